#include "condorcet/diagnose.hpp"

#include "condorcet/exact.hpp"
#include "condorcet/metrics.hpp"
#include "condorcet/parallel.hpp"
#include "condorcet/rng.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>

namespace condorcet {

namespace {

constexpr std::uint64_t kObservedTag = 1;
constexpr std::uint64_t kPermutationTag = 2;
constexpr std::uint64_t kPermutationTieTag = 3;
constexpr std::uint64_t kBootstrapTag = 4;

void check_inputs(const Dataset& data, std::span<const std::size_t> models, const DiagnoseOptions& options) {
    if (models.size() < 2) throw DomainError("diagnosis needs at least 2 models");
    if (data.size() < options.min_records)
        throw DomainError("diagnosis needs at least " + std::to_string(options.min_records) +
                          " records, got " + std::to_string(data.size()));
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (!(options.tolerance >= 0.0)) throw DomainError("tolerance must be non-negative");
    if (!(options.margin >= 0.0)) throw DomainError("margin must be non-negative");
    for (std::size_t m : models)
        if (m >= data.models().size()) throw DomainError("model index out of range");
    for (const auto& rec : data.records())
        for (std::size_t m : models)
            if (rec.predictions[m] == kMissing)
                throw DomainError("record '" + rec.id + "' has no prediction for model '" +
                                  data.models()[m] + "'");
}

double accuracy_of(std::span<const Label> truth, std::span<const Label> predicted) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
    return v == Verdict::consistent ? "consistent" : "rejected";
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw DomainError("quantile of empty sample");
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

ConditionResults check_conditions(const Dataset& data, std::span<const std::size_t> models,
                                  const DiagnoseOptions& options) {
    check_inputs(data, models, options);
    const int k = data.classes();
    const auto truth = data.truth_column();

    std::vector<ConfusionMatrix> matrices;
    for (std::size_t m : models) matrices.push_back(confusion_matrix(truth, data.prediction_column(m), k));
    for (Label t = 1; t <= k; ++t)
        if (matrices.front().row_total(t) == 0)
            throw DomainError("class '" + data.labels().name(t) + "' has no records");

    ConditionResults res;
    for (std::size_t a = 0; a < matrices.size(); ++a)
        for (std::size_t b = a + 1; b < matrices.size(); ++b)
            for (Label t = 1; t <= k; ++t) {
                const auto pa = matrices[a].row_distribution(t);
                const auto pb = matrices[b].row_distribution(t);
                double tv = 0.0;
                for (std::size_t j = 0; j < pa.size(); ++j) tv += std::abs(pa[j] - pb[j]);
                res.max_tv_distance = std::max(res.max_tv_distance, tv / 2.0);
            }
    res.identical = res.max_tv_distance <= options.tolerance;

    const double chance = 1.0 / k;
    res.better_than_random = true;
    res.uniform_errors = true;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const auto& cm = matrices[i];
        ModelConditionStats s;
        s.model = data.models()[models[i]];
        s.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());

        const boost::math::binomial_distribution<double> null(static_cast<double>(cm.total()), chance);
        const auto hits = cm.trace();
        s.binomial_p_value =
            hits == 0 ? 1.0 : boost::math::cdf(boost::math::complement(null, static_cast<double>(hits - 1)));
        s.better_than_random = s.accuracy > chance && s.binomial_p_value < options.alpha;

        for (Label t = 1; t <= k; ++t) {
            const auto row = cm.row_total(t);
            const auto errors = row - cm.at(t, t) - cm.abstentions(t);
            for (Label j = 1; j <= k; ++j)
                if (j != t)
                    s.max_wrong_rate = std::max(s.max_wrong_rate,
                                                static_cast<double>(cm.at(t, j)) / static_cast<double>(row));
            if (errors == 0 || k == 2) continue;
            const double expected = static_cast<double>(errors) / (k - 1);
            for (Label j = 1; j <= k; ++j) {
                if (j == t) continue;
                const double d = static_cast<double>(cm.at(t, j)) - expected;
                s.chi_square += d * d / expected;
            }
            s.chi_square_dof += static_cast<std::size_t>(k - 2);
        }
        if (s.chi_square_dof > 0) {
            const boost::math::chi_squared_distribution<double> chi(static_cast<double>(s.chi_square_dof));
            s.chi_square_p_value = boost::math::cdf(boost::math::complement(chi, s.chi_square));
        }
        s.uniform_errors = s.chi_square_p_value >= options.alpha && s.max_wrong_rate < chance;

        res.better_than_random = res.better_than_random && s.better_than_random;
        res.uniform_errors = res.uniform_errors && s.uniform_errors;
        res.models.push_back(std::move(s));
    }
    return res;
}

std::vector<std::vector<Label>> stratified_shuffle(const Dataset& data, std::span<const std::size_t> models,
                                                   std::uint64_t seed, std::size_t replicate) {
    const int k = data.classes();
    std::vector<std::vector<std::size_t>> strata(static_cast<std::size_t>(k));
    for (std::size_t r = 0; r < data.size(); ++r)
        strata[static_cast<std::size_t>(data.records()[r].truth - 1)].push_back(r);

    CounterRng rng(derive_seed(seed, kPermutationTag), replicate);
    std::vector<std::vector<Label>> columns;
    std::vector<Label> buffer;
    for (std::size_t i = 0; i < models.size(); ++i) {
        auto col = data.prediction_column(models[i]);
        if (i > 0) {
            for (const auto& stratum : strata) {
                buffer.clear();
                for (std::size_t r : stratum) buffer.push_back(col[r]);
                rng.shuffle(std::span<Label>(buffer));
                for (std::size_t j = 0; j < stratum.size(); ++j) col[stratum[j]] = buffer[j];
            }
        }
        columns.push_back(std::move(col));
    }
    return columns;
}

namespace {

double bagged_accuracy(std::span<const Label> truth, const std::vector<std::vector<Label>>& columns, int k,
                       TiePolicy policy, std::uint64_t tie_seed) {
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(k));
    std::size_t hits = 0;
    for (std::size_t r = 0; r < truth.size(); ++r) {
        std::fill(counts.begin(), counts.end(), 0u);
        for (const auto& col : columns) ++counts[static_cast<std::size_t>(col[r] - 1)];
        CounterRng rng(tie_seed, r);
        hits += plurality_from_counts(counts, policy, rng) == truth[r] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace

IndependenceResult independence_gap(const Dataset& data, std::span<const std::size_t> models,
                                    const DiagnoseOptions& options) {
    check_inputs(data, models, options);
    if (options.permutations < 100)
        throw DomainError("permutation count must be at least 100, got " + std::to_string(options.permutations));
    const int k = data.classes();
    const auto truth = data.truth_column();
    IndependenceResult res;

    const double lo_adv = -1.0 / k + 1e-9;
    for (std::size_t m : models) {
        const double acc = accuracy_of(truth, data.prediction_column(m));
        res.fitted_advantages.push_back(std::clamp(acc - 1.0 / k, lo_adv, max_advantage(k)));
    }
    res.predicted_accuracy_parametric = exact_plurality_accuracy(k, res.fitted_advantages, options.tie_policy);

    const auto bagged = ensemble_predictions(data, models, options.tie_policy, derive_seed(options.seed, kObservedTag));
    std::vector<std::uint8_t> correct(truth.size());
    for (std::size_t r = 0; r < truth.size(); ++r) correct[r] = bagged[r] == truth[r] ? 1 : 0;
    res.observed_ensemble_accuracy = accuracy_of(truth, bagged);

    std::vector<double> perm(options.permutations);
    parallel_for(options.permutations, [&](std::size_t b) {
        const auto columns = stratified_shuffle(data, models, options.seed, b);
        perm[b] = bagged_accuracy(truth, columns, k, options.tie_policy,
                                  derive_seed(derive_seed(options.seed, kPermutationTieTag), b));
    });
    double sum = 0.0;
    for (double v : perm) sum += v;
    res.permutation_mean = sum / static_cast<double>(perm.size());
    res.permutation_ci = {quantile(perm, options.alpha / 2.0), quantile(perm, 1.0 - options.alpha / 2.0)};

    if (options.bootstrap > 0) {
        std::vector<double> boot(options.bootstrap);
        const std::size_t n = correct.size();
        parallel_for(options.bootstrap, [&](std::size_t b) {
            CounterRng rng(derive_seed(options.seed, kBootstrapTag), b);
            std::size_t hits = 0;
            for (std::size_t i = 0; i < n; ++i) hits += correct[rng.below(n)];
            boot[b] = static_cast<double>(hits) / static_cast<double>(n);
        });
        res.observed_ci = {quantile(boot, options.alpha / 2.0), quantile(boot, 1.0 - options.alpha / 2.0)};
    } else {
        res.observed_ci = {res.observed_ensemble_accuracy, res.observed_ensemble_accuracy};
    }

    res.gap = res.observed_ensemble_accuracy - res.predicted_accuracy_parametric;
    const bool below_permutation = res.observed_ensemble_accuracy < res.permutation_ci.lower;
    const bool below_parametric =
        res.observed_ensemble_accuracy < res.predicted_accuracy_parametric - options.margin;
    res.verdict = below_permutation && below_parametric ? Verdict::rejected : Verdict::consistent;
    return res;
}

DiagnosticReport diagnose(const Dataset& data, std::span<const std::string> models, const DiagnoseOptions& options) {
    const auto idx = data.model_indices(models);
    DiagnosticReport report;
    for (std::size_t m : idx) report.models.push_back(data.models()[m]);
    report.records = data.size();
    report.classes = data.classes();
    report.conditions = check_conditions(data, idx, options);
    report.independence = independence_gap(data, idx, options);
    return report;
}

}  // namespace condorcet
