#include "condorcet/dataset.hpp"

#include <algorithm>
#include <unordered_set>

namespace condorcet {

Dataset::Dataset(LabelSpace labels, std::vector<std::string> models, bool has_date)
    : labels_(std::move(labels)), models_(std::move(models)), has_date_(has_date) {
    std::unordered_set<std::string> seen;
    for (const auto& m : models_) {
        if (m.empty()) throw DomainError("model names must be non-empty");
        if (!seen.insert(m).second) throw DomainError("duplicate model name '" + m + "'");
    }
}

void Dataset::add(PredictionRecord record) {
    if (record.truth < 1 || record.truth > classes())
        throw DomainError("record '" + record.id + "' has true label outside 1..k");
    if (record.predictions.size() != models_.size())
        throw DomainError("record '" + record.id + "' has " +
                          std::to_string(record.predictions.size()) + " predictions, expected " +
                          std::to_string(models_.size()));
    for (Label p : record.predictions)
        if (p != kMissing && (p < 1 || p > classes()))
            throw DomainError("record '" + record.id + "' has prediction outside 1..k");
    if (has_date_ != record.date.has_value())
        throw DomainError("record '" + record.id + "' date presence differs from dataset");

    if (!ids_.insert(record.id).second) throw DomainError("duplicate id '" + record.id + "'");
    records_.push_back(std::move(record));
}

std::size_t Dataset::model_index(std::string_view name) const {
    for (std::size_t m = 0; m < models_.size(); ++m)
        if (models_[m] == name) return m;
    throw DomainError("unknown model '" + std::string(name) + "'");
}

std::vector<std::size_t> Dataset::model_indices(std::span<const std::string> names) const {
    std::vector<std::size_t> out;
    if (names.empty()) {
        for (std::size_t m = 0; m < models_.size(); ++m) out.push_back(m);
        return out;
    }
    for (const auto& n : names) out.push_back(model_index(n));
    return out;
}

std::vector<Label> Dataset::truth_column() const {
    std::vector<Label> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.truth);
    return out;
}

std::vector<Label> Dataset::prediction_column(std::size_t model) const {
    if (model >= models_.size()) throw DomainError("model index out of range");
    std::vector<Label> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.predictions[model]);
    return out;
}

}  // namespace condorcet
