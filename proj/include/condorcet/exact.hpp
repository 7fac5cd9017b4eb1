#pragma once
// Exact ensemble accuracy for independent uniformly-biased classifiers.

#include "condorcet/core.hpp"
#include "condorcet/vote.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace condorcet {

inline constexpr std::uint64_t kDefaultStateCap = 50'000'000;

/// Number of count vectors with k non-negative parts summing to n,
/// saturating at UINT64_MAX.
std::uint64_t composition_count(std::uint64_t n, std::uint64_t k) noexcept;

/// Distribution of the final count vector for n independent classifiers.
/// Layer m holds every composition of m into k parts in lexicographic order.
class CountVectorDistribution {
public:
    static CountVectorDistribution compute(int k, std::span<const double> advantages,
                                           std::uint64_t state_cap = kDefaultStateCap);

    int classes() const noexcept { return k_; }
    std::size_t voters() const noexcept { return n_; }
    std::size_t state_count() const noexcept { return mass_.size(); }
    /// Total mass after each processed classifier (index 0 = empty ensemble).
    const std::vector<double>& layer_mass() const noexcept { return layer_mass_; }

    /// Expected win credit of the true label under the given tie policy.
    double accuracy(TiePolicy policy) const;

    /// Calls fn(counts, mass) for every terminal count vector.
    template <class Fn>
    void for_each_state(Fn&& fn) const {
        std::vector<std::uint32_t> c(static_cast<std::size_t>(k_), 0);
        c.back() = static_cast<std::uint32_t>(n_);
        for (std::size_t idx = 0; idx < mass_.size(); ++idx) {
            fn(std::span<const std::uint32_t>(c), mass_[idx]);
            next_composition(c);
        }
    }

    static void next_composition(std::vector<std::uint32_t>& c) noexcept;

private:
    int k_ = 0;
    std::size_t n_ = 0;
    std::vector<double> mass_;
    std::vector<double> layer_mass_;
};

/// Probability that plurality voting names the true label (canonical k).
/// Classifiers are processed one at a time over count vectors; tie mass is
/// credited fractionally under uniform-random. Throws ResourceError when the
/// final layer would hold more than state_cap count vectors.
double exact_plurality_accuracy(int k, std::span<const double> advantages, TiePolicy policy,
                                std::uint64_t state_cap = kDefaultStateCap);

/// Probability that the mean vote index exceeds (k+1)/2. DP over the sum.
double exact_score_threshold_accuracy(int k, std::span<const double> advantages);

/// Same as true_label_probability; the baseline every ensemble is compared to.
double single_classifier_accuracy(int k, double advantage);

}  // namespace condorcet
