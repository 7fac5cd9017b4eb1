#include "condorcet/simulate.hpp"

#include "condorcet/parallel.hpp"

#include <cmath>
#include <string>

namespace condorcet {

void DependenceModel::validate() const {
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
}

void EnsembleSpec::validate() const {
    if (k < 2) throw DomainError("k must be at least 2");
    if (n < 1) throw DomainError("n must be at least 1");
    dependence.validate();
    if (dependence.rho > 0.0 && !advantages.is_constant())
        throw DomainError("rho > 0 requires a constant advantage");
    for (std::size_t i = 1; i <= n; ++i) advantages.at(i, k);
}

EnsembleSampler::EnsembleSampler(int k, std::span<const double> advantages, double rho)
    : k_(k), rho_(rho) {
    DependenceModel{rho}.validate();
    if (advantages.empty()) throw DomainError("ensemble needs at least one classifier");
    p_true_.reserve(advantages.size());
    inv_wrong_.reserve(advantages.size());
    for (double a : advantages) {
        const UbtcaPmf pmf(k, a);
        p_true_.push_back(pmf.p_true());
        inv_wrong_.push_back(pmf.p_wrong() > 0.0 ? 1.0 / pmf.p_wrong() : 0.0);
    }
}

EnsembleSampler::EnsembleSampler(const EnsembleSpec& spec)
    : EnsembleSampler((spec.validate(), spec.k), spec.advantages.take(spec.n, spec.k),
                      spec.dependence.rho) {}

void EnsembleSampler::sample(CounterRng& rng, std::span<Label> votes) const {
    const bool shared = rng.uniform() < rho_;
    if (shared) {
        const double u = rng.uniform();
        for (std::size_t i = 0; i < p_true_.size(); ++i) votes[i] = map_uniform(i, u);
    } else {
        for (std::size_t i = 0; i < p_true_.size(); ++i) votes[i] = map_uniform(i, rng.uniform());
    }
}

bool EnsembleSampler::trial_correct(CounterRng& rng, VoteRule rule, TiePolicy policy,
                                    std::span<std::uint32_t> counts) const {
    const std::size_t n = p_true_.size();
    const bool shared = rng.uniform() < rho_;
    const double shared_u = shared ? rng.uniform() : 0.0;

    if (rule == VoteRule::score_threshold) {
        std::int64_t score = 0;
        for (std::size_t i = 0; i < n; ++i) score += map_uniform(i, shared ? shared_u : rng.uniform());
        return score_exceeds_threshold(score, static_cast<std::int64_t>(n), k_);
    }
    std::fill(counts.begin(), counts.end(), 0u);
    for (std::size_t i = 0; i < n; ++i)
        ++counts[static_cast<std::size_t>(map_uniform(i, shared ? shared_u : rng.uniform()) - 1)];
    return plurality_from_counts(counts, policy, rng) == k_;
}

VoteProfile sample_ensemble_votes(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t trial) {
    const EnsembleSampler sampler(spec);
    std::vector<Label> votes(spec.n);
    CounterRng rng(seed, trial);
    sampler.sample(rng, votes);
    return VoteProfile(spec.k, std::move(votes));
}

McEstimate make_estimate(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) throw DomainError("trials must be at least 1");
    McEstimate e;
    e.successes = successes;
    e.trials = trials;
    e.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(trials));
    return e;
}

namespace {

std::uint64_t count_successes(const EnsembleSampler& sampler, VoteRule rule, TiePolicy policy,
                              std::uint64_t trials, std::uint64_t seed) {
    const auto k = static_cast<std::size_t>(sampler.classes());
    return parallel_sum(trials, [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> counts(k);
        std::uint64_t wins = 0;
        for (std::size_t t = begin; t < end; ++t) {
            CounterRng rng(seed, t);
            wins += sampler.trial_correct(rng, rule, policy, counts) ? 1 : 0;
        }
        return wins;
    });
}

}  // namespace

McEstimate mc_accuracy(const EnsembleSpec& spec, std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw DomainError("trials must be at least 1");
    const EnsembleSampler sampler(spec);
    return make_estimate(count_successes(sampler, spec.rule, spec.tie_policy, trials, seed), trials);
}

ConvergenceCurve convergence_experiment(int k, const AdvantageSequence& advantages,
                                        std::span<const std::size_t> n_grid, VoteRule rule,
                                        std::uint64_t trials, std::uint64_t seed, TiePolicy policy) {
    if (trials == 0) throw DomainError("trials must be at least 1");
    if (n_grid.empty()) throw DomainError("n grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] == 0) throw DomainError("n grid entries must be >= 1");
        if (i > 0 && n_grid[i] <= n_grid[i - 1])
            throw DomainError("n grid must be strictly increasing");
    }
    ConvergenceCurve curve;
    for (std::size_t n : n_grid) {
        const auto values = advantages.take(n, k);
        const EnsembleSampler sampler(k, values, 0.0);
        const auto est = make_estimate(
            count_successes(sampler, rule, policy, trials, derive_seed(seed, n)), trials);
        curve.rows.push_back({n, est.estimate, est.std_error, advantages.drift(n, k)});
    }
    return curve;
}

}  // namespace condorcet
