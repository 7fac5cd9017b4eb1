#pragma once
// Confusion matrices, macro-averaged precision/recall/F1, and the bagging
// comparison against the best single model.

#include "condorcet/dataset.hpp"
#include "condorcet/vote.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace condorcet {

/// Rows are true labels, columns predicted labels. Abstentions are counted
/// per true label outside the k x k grid.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int k);

    int classes() const noexcept { return k_; }
    std::uint64_t at(Label truth, Label predicted) const;
    std::uint64_t abstentions(Label truth) const;
    void add(Label truth, Label predicted);

    std::uint64_t total() const noexcept { return total_; }
    std::uint64_t row_total(Label truth) const;  // includes abstentions
    std::uint64_t column_total(Label predicted) const;
    std::uint64_t trace() const;
    std::uint64_t total_abstentions() const;

    /// Row-normalized predicted-label distribution for a true label.
    std::vector<double> row_distribution(Label truth) const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t cell(Label t, Label p) const;
    int k_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> abstain_;
    std::uint64_t total_ = 0;
};

/// Records are (true label, predicted label); predicted may be kAbstain.
ConfusionMatrix confusion_matrix(std::span<const std::pair<Label, Label>> records, int k);
ConfusionMatrix confusion_matrix(std::span<const Label> truth, std::span<const Label> predicted, int k);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricsReport {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double abstention_rate = 0.0;
    std::vector<ClassMetrics> per_class;
};

/// Zero denominators give a metric of 0.
MetricsReport metrics_report(const ConfusionMatrix& cm);

struct BaggingDelta {
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;

    /// Rounded to two decimals for display.
    BaggingDelta rounded() const;
};

/// Ensemble minus solo, componentwise.
BaggingDelta bagging_delta(const MetricsReport& ensemble, const MetricsReport& best_solo);

/// Per-record plurality vote over the chosen models. Record r breaks ties
/// with CounterRng(derive_seed(seed, kTieBreakTag), r), a stream no other
/// consumer of the same seed uses. Throws DomainError naming the record and model
/// when a prediction is missing.
inline constexpr std::uint64_t kTieBreakTag = 0x746965;

std::vector<Label> ensemble_predictions(const Dataset& data, std::span<const std::size_t> models,
                                        TiePolicy policy, std::uint64_t seed);
std::vector<Label> ensemble_predictions(const Dataset& data, std::span<const std::string> models,
                                        TiePolicy policy, std::uint64_t seed);

}  // namespace condorcet
