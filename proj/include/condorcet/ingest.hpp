#pragma once
// Prediction datasets on disk and synthetic replication data.
//
// File layout: header `id,date,true_label,<model_1>,...,<model_m>` with the
// date column optional; cells hold label names; an empty prediction cell is
// a missing prediction.

#include "condorcet/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace condorcet {

Dataset read_predictions(const std::filesystem::path& path, const LabelSpace& labels);
Dataset parse_predictions(std::istream& in, const LabelSpace& labels);

void write_predictions(const std::filesystem::path& path, const Dataset& data);
void write_predictions(std::ostream& out, const Dataset& data);

struct SyntheticModel {
    std::string name;
    double advantage = 0.0;
};

struct SyntheticOptions {
    LabelSpace labels = LabelSpace::sentiment();
    /// Class prevalence in label order; defaults to 31/27/42 percent.
    std::vector<double> class_probs{0.31, 0.27, 0.42};
    std::vector<SyntheticModel> models;
    double rho = 0.0;
    std::size_t rows = 1000;
    std::uint64_t seed = 0;
};

/// Row r draws from CounterRng(derive_seed(seed, kGenerateTag), r): the true label from class_probs,
/// then canonical votes from the common-cause mixture, relabelled so the
/// canonical true label lands on the row's true label.
Dataset generate_synthetic(const SyntheticOptions& options);

inline constexpr std::uint64_t kGenerateTag = 0x67656e;

}  // namespace condorcet
