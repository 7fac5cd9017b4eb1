#include "condorcet/metrics.hpp"

#include <cmath>

namespace condorcet {

ConfusionMatrix::ConfusionMatrix(int k) : k_(k) {
    if (k < 2) throw DomainError("confusion matrix needs k >= 2");
    counts_.assign(static_cast<std::size_t>(k * k), 0);
    abstain_.assign(static_cast<std::size_t>(k), 0);
}

std::size_t ConfusionMatrix::cell(Label t, Label p) const {
    if (t < 1 || t > k_ || p < 1 || p > k_) throw DomainError("label outside 1..k");
    return static_cast<std::size_t>((t - 1) * k_ + (p - 1));
}

std::uint64_t ConfusionMatrix::at(Label truth, Label predicted) const {
    return counts_[cell(truth, predicted)];
}

std::uint64_t ConfusionMatrix::abstentions(Label truth) const {
    if (truth < 1 || truth > k_) throw DomainError("label outside 1..k");
    return abstain_[static_cast<std::size_t>(truth - 1)];
}

void ConfusionMatrix::add(Label truth, Label predicted) {
    if (predicted == kAbstain) {
        if (truth < 1 || truth > k_) throw DomainError("label outside 1..k");
        ++abstain_[static_cast<std::size_t>(truth - 1)];
    } else {
        ++counts_[cell(truth, predicted)];
    }
    ++total_;
}

std::uint64_t ConfusionMatrix::row_total(Label truth) const {
    std::uint64_t s = abstentions(truth);
    for (Label p = 1; p <= k_; ++p) s += at(truth, p);
    return s;
}

std::uint64_t ConfusionMatrix::column_total(Label predicted) const {
    std::uint64_t s = 0;
    for (Label t = 1; t <= k_; ++t) s += at(t, predicted);
    return s;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t s = 0;
    for (Label j = 1; j <= k_; ++j) s += at(j, j);
    return s;
}

std::uint64_t ConfusionMatrix::total_abstentions() const {
    std::uint64_t s = 0;
    for (auto a : abstain_) s += a;
    return s;
}

std::vector<double> ConfusionMatrix::row_distribution(Label truth) const {
    const auto row = row_total(truth);
    if (row == 0) throw DomainError("true label " + std::to_string(truth) + " has no records");
    std::vector<double> out;
    for (Label p = 1; p <= k_; ++p) out.push_back(static_cast<double>(at(truth, p)) / static_cast<double>(row));
    return out;
}

ConfusionMatrix confusion_matrix(std::span<const std::pair<Label, Label>> records, int k) {
    if (records.empty()) throw DomainError("confusion matrix needs at least one record");
    ConfusionMatrix cm(k);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto [t, p] = records[i];
        if (t < 1 || t > k || (p != kAbstain && (p < 1 || p > k)))
            throw DomainError("record " + std::to_string(i) + " has label outside 1.." + std::to_string(k));
        cm.add(t, p);
    }
    return cm;
}

ConfusionMatrix confusion_matrix(std::span<const Label> truth, std::span<const Label> predicted, int k) {
    if (truth.size() != predicted.size()) throw DomainError("truth and prediction lengths differ");
    std::vector<std::pair<Label, Label>> records;
    records.reserve(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) records.emplace_back(truth[i], predicted[i]);
    return confusion_matrix(records, k);
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport metrics_report(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw DomainError("confusion matrix is empty");
    MetricsReport r;
    const int k = cm.classes();
    for (Label j = 1; j <= k; ++j) {
        ClassMetrics c;
        c.precision = ratio(cm.at(j, j), cm.column_total(j));
        c.recall = ratio(cm.at(j, j), cm.row_total(j));
        c.f1 = c.precision + c.recall > 0.0 ? 2.0 * c.precision * c.recall / (c.precision + c.recall) : 0.0;
        r.macro_precision += c.precision;
        r.macro_recall += c.recall;
        r.macro_f1 += c.f1;
        r.per_class.push_back(c);
    }
    r.macro_precision /= k;
    r.macro_recall /= k;
    r.macro_f1 /= k;
    r.accuracy = ratio(cm.trace(), cm.total());
    r.abstention_rate = ratio(cm.total_abstentions(), cm.total());
    return r;
}

BaggingDelta BaggingDelta::rounded() const {
    auto r2 = [](double x) {
        const double v = std::round(x * 100.0) / 100.0;
        return v == 0.0 ? 0.0 : v;  // no negative zero
    };
    return {r2(f1), r2(precision), r2(recall)};
}

BaggingDelta bagging_delta(const MetricsReport& ensemble, const MetricsReport& best_solo) {
    return {ensemble.macro_f1 - best_solo.macro_f1, ensemble.macro_precision - best_solo.macro_precision,
            ensemble.macro_recall - best_solo.macro_recall};
}

std::vector<Label> ensemble_predictions(const Dataset& data, std::span<const std::size_t> models,
                                        TiePolicy policy, std::uint64_t seed) {
    if (models.empty()) throw DomainError("ensemble needs at least one model");
    const auto k = static_cast<std::size_t>(data.classes());
    std::vector<std::uint32_t> counts(k);
    std::vector<Label> out;
    out.reserve(data.size());
    const auto& records = data.records();
    const std::uint64_t tie_seed = derive_seed(seed, kTieBreakTag);
    for (std::size_t r = 0; r < records.size(); ++r) {
        std::fill(counts.begin(), counts.end(), 0u);
        for (std::size_t m : models) {
            if (m >= data.models().size()) throw DomainError("model index out of range");
            const Label p = records[r].predictions[m];
            if (p == kMissing)
                throw DomainError("record '" + records[r].id + "' has no prediction for model '" +
                                  data.models()[m] + "'");
            ++counts[static_cast<std::size_t>(p - 1)];
        }
        CounterRng rng(tie_seed, r);
        out.push_back(plurality_from_counts(counts, policy, rng));
    }
    return out;
}

std::vector<Label> ensemble_predictions(const Dataset& data, std::span<const std::string> models,
                                        TiePolicy policy, std::uint64_t seed) {
    const auto idx = data.model_indices(models);
    return ensemble_predictions(data, std::span<const std::size_t>(idx), policy, seed);
}

}  // namespace condorcet
