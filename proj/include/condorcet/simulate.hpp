#pragma once
// Seeded Monte Carlo over ensembles of uniformly-biased classifiers.
//
// Trial t of a run with seed s draws from CounterRng(s, t), so estimates do
// not depend on how trials are split across workers.

#include "condorcet/core.hpp"
#include "condorcet/rng.hpp"
#include "condorcet/vote.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace condorcet {

/// Common-cause mixture: with probability rho every classifier reuses one
/// shared draw, otherwise all draw independently.
struct DependenceModel {
    double rho = 0.0;
    void validate() const;
};

struct EnsembleSpec {
    int k = 3;
    std::size_t n = 1;
    AdvantageSequence advantages = AdvantageSequence::constant(0.0);
    DependenceModel dependence;
    TiePolicy tie_policy = TiePolicy::uniform_random;
    VoteRule rule = VoteRule::plurality;

    /// rho > 0 requires a constant advantage.
    void validate() const;
};

/// Draws canonical votes (true label = k) for a fixed set of classifiers.
///
/// The shared draw is a single uniform variate mapped through each
/// classifier's inverse CDF; with identical classifiers that is a copy of
/// one vote, and each classifier's marginal is exactly its own pmf.
class EnsembleSampler {
public:
    EnsembleSampler(int k, std::span<const double> advantages, double rho);
    explicit EnsembleSampler(const EnsembleSpec& spec);

    int classes() const noexcept { return k_; }
    std::size_t size() const noexcept { return p_true_.size(); }

    void sample(CounterRng& rng, std::span<Label> votes) const;

    /// One trial; true when the rule names label k. `counts` needs k slots.
    bool trial_correct(CounterRng& rng, VoteRule rule, TiePolicy policy,
                       std::span<std::uint32_t> counts) const;

private:
    Label map_uniform(std::size_t i, double u) const noexcept {
        if (u < p_true_[i]) return k_;
        const auto j = static_cast<int>((u - p_true_[i]) * inv_wrong_[i]);
        return 1 + (j < k_ - 2 ? j : k_ - 2);
    }

    int k_;
    double rho_;
    std::vector<double> p_true_;
    std::vector<double> inv_wrong_;
};

VoteProfile sample_ensemble_votes(const EnsembleSpec& spec, std::uint64_t seed,
                                  std::uint64_t trial = 0);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
};

McEstimate make_estimate(std::uint64_t successes, std::uint64_t trials);

McEstimate mc_accuracy(const EnsembleSpec& spec, std::uint64_t trials, std::uint64_t seed);

struct ConvergenceRow {
    std::size_t n = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    /// sum_{i<=n} a_i / sqrt(n)
    double drift = 0.0;
};

struct ConvergenceCurve {
    std::vector<ConvergenceRow> rows;
};

/// Independent classifiers only. Grid point n uses seed derive_seed(seed, n).
ConvergenceCurve convergence_experiment(int k, const AdvantageSequence& advantages,
                                        std::span<const std::size_t> n_grid, VoteRule rule,
                                        std::uint64_t trials, std::uint64_t seed,
                                        TiePolicy policy = TiePolicy::uniform_random);

}  // namespace condorcet
