#pragma once

#include "condorcet/core.hpp"

#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace condorcet {

/// One labelled item with every model's prediction. predictions[m] belongs
/// to Dataset::models()[m]; kMissing marks an empty cell.
struct PredictionRecord {
    std::string id;
    std::optional<std::string> date;
    Label truth = 1;
    std::vector<Label> predictions;

    bool operator==(const PredictionRecord&) const = default;
};

class Dataset {
public:
    Dataset(LabelSpace labels, std::vector<std::string> models, bool has_date = false);

    const LabelSpace& labels() const noexcept { return labels_; }
    int classes() const noexcept { return labels_.size(); }
    const std::vector<std::string>& models() const noexcept { return models_; }
    bool has_date() const noexcept { return has_date_; }
    const std::vector<PredictionRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }

    /// Validates labels, prediction count and id uniqueness.
    void add(PredictionRecord record);

    std::size_t model_index(std::string_view name) const;
    /// Indices for the named models, or all models when names is empty.
    std::vector<std::size_t> model_indices(std::span<const std::string> names) const;

    std::vector<Label> truth_column() const;
    std::vector<Label> prediction_column(std::size_t model) const;

    bool operator==(const Dataset& other) const {
        return labels_ == other.labels_ && models_ == other.models_ &&
               has_date_ == other.has_date_ && records_ == other.records_;
    }

private:
    LabelSpace labels_;
    std::vector<std::string> models_;
    bool has_date_;
    std::vector<PredictionRecord> records_;
    std::unordered_set<std::string> ids_;
};

}  // namespace condorcet
