#include "condorcet/exact.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace condorcet {

std::uint64_t composition_count(std::uint64_t n, std::uint64_t k) noexcept {
    // C(n+k-1, k-1) computed incrementally; each partial product is itself a
    // binomial coefficient so the division is exact.
    if (k == 0) return n == 0 ? 1 : 0;
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i < k; ++i) {
        const auto next = static_cast<unsigned __int128>(result) * (n + i) / i;
        if (next > kMax) return kMax;
        result = static_cast<std::uint64_t>(next);
    }
    return result;
}

namespace {

class BinomialTable {
public:
    BinomialTable(std::size_t max_n, std::size_t max_k) : cols_(max_k + 1), table_((max_n + 1) * cols_, 0) {
        for (std::size_t n = 0; n <= max_n; ++n) {
            at(n, 0) = 1;
            for (std::size_t r = 1; r <= std::min(n, max_k); ++r)
                at(n, r) = at(n - 1, r - 1) + (r <= n - 1 ? at(n - 1, r) : 0);
        }
    }
    std::uint64_t operator()(std::size_t n, std::size_t r) const { return table_[n * cols_ + r]; }

private:
    std::uint64_t& at(std::size_t n, std::size_t r) { return table_[n * cols_ + r]; }
    std::size_t cols_;
    std::vector<std::uint64_t> table_;
};

// Lexicographic rank of a composition c of m into k parts. Uses
// sum_{v<c_j} C(R-v+p-1, p-1) = C(R+p, p) - C(R-c_j+p, p) with p parts left.
std::size_t rank_of(const std::vector<std::uint32_t>& c, std::uint32_t m, const BinomialTable& binom) {
    const std::size_t k = c.size();
    std::size_t rank = 0;
    std::uint32_t remaining = m;
    for (std::size_t j = 0; j + 1 < k; ++j) {
        const std::size_t parts = k - 1 - j;
        rank += binom(remaining + parts, parts) - binom(remaining - c[j] + parts, parts);
        remaining -= c[j];
    }
    return rank;
}

void check_inputs(int k, std::span<const double> advantages) {
    if (advantages.empty()) throw DomainError("ensemble needs at least one classifier");
    for (double a : advantages) check_advantage(k, a);
}

}  // namespace

void CountVectorDistribution::next_composition(std::vector<std::uint32_t>& c) noexcept {
    const std::size_t k = c.size();
    std::uint32_t suffix = c[k - 1];
    for (std::size_t i = k - 1; i-- > 0;) {
        if (suffix > 0) {
            ++c[i];
            for (std::size_t j = i + 1; j + 1 < k; ++j) c[j] = 0;
            c[k - 1] = suffix - 1;
            return;
        }
        suffix += c[i];
    }
}

CountVectorDistribution CountVectorDistribution::compute(int k, std::span<const double> advantages,
                                                         std::uint64_t state_cap) {
    check_inputs(k, advantages);
    const std::size_t n = advantages.size();
    const std::size_t kk = static_cast<std::size_t>(k);
    const std::uint64_t final_states = composition_count(n, kk);
    if (final_states > state_cap)
        throw ResourceError("exact enumeration needs " + std::to_string(final_states) +
                            " count vectors (cap " + std::to_string(state_cap) +
                            "); use Monte Carlo simulation instead");

    const BinomialTable binom(n + kk, kk);
    CountVectorDistribution dist;
    dist.k_ = k;
    dist.n_ = n;

    std::vector<double> layer{1.0};
    dist.layer_mass_.push_back(1.0);
    std::vector<std::uint32_t> c(kk, 0);
    std::vector<std::uint32_t> succ(kk);
    for (std::size_t m = 0; m < n; ++m) {
        const UbtcaPmf pmf(k, advantages[m]);
        std::vector<double> next(composition_count(m + 1, kk), 0.0);
        std::fill(c.begin(), c.end(), 0);
        c.back() = static_cast<std::uint32_t>(m);
        for (std::size_t idx = 0; idx < layer.size(); ++idx) {
            const double w = layer[idx];
            if (w != 0.0) {
                for (std::size_t j = 0; j < kk; ++j) {
                    const double p = j + 1 == kk ? pmf.p_true() : pmf.p_wrong();
                    if (p == 0.0) continue;
                    succ = c;
                    ++succ[j];
                    next[rank_of(succ, static_cast<std::uint32_t>(m + 1), binom)] += w * p;
                }
            }
            next_composition(c);
        }
        layer = std::move(next);
        double total = 0.0;
        for (double w : layer) total += w;
        dist.layer_mass_.push_back(total);
    }
    dist.mass_ = std::move(layer);
    return dist;
}

double CountVectorDistribution::accuracy(TiePolicy policy) const {
    double acc = 0.0;
    for_each_state([&](std::span<const std::uint32_t> counts, double mass) {
        const std::uint32_t mine = counts.back();
        const std::uint32_t best = *std::max_element(counts.begin(), counts.end());
        if (mine != best) return;
        const auto tied = std::count(counts.begin(), counts.end(), best);
        if (tied == 1) {
            acc += mass;
        } else if (policy == TiePolicy::uniform_random) {
            acc += mass / static_cast<double>(tied);
        }
        // strict-fail abstains; lowest-index picks a smaller label than k.
    });
    return acc;
}

double exact_plurality_accuracy(int k, std::span<const double> advantages, TiePolicy policy,
                                std::uint64_t state_cap) {
    return CountVectorDistribution::compute(k, advantages, state_cap).accuracy(policy);
}

double exact_score_threshold_accuracy(int k, std::span<const double> advantages) {
    check_inputs(k, advantages);
    const std::size_t n = advantages.size();
    const std::size_t kk = static_cast<std::size_t>(k);
    // dist[s] = P(S_m = s + m), sums range over [m, m*k].
    std::vector<double> dist{1.0};
    for (std::size_t m = 0; m < n; ++m) {
        const UbtcaPmf pmf(k, advantages[m]);
        std::vector<double> next(dist.size() + kk - 1, 0.0);
        for (std::size_t s = 0; s < dist.size(); ++s) {
            if (dist[s] == 0.0) continue;
            for (std::size_t j = 0; j < kk; ++j) {
                const double p = j + 1 == kk ? pmf.p_true() : pmf.p_wrong();
                next[s + j] += dist[s] * p;
            }
        }
        dist = std::move(next);
    }
    double acc = 0.0;
    const auto nn = static_cast<std::int64_t>(n);
    for (std::size_t s = 0; s < dist.size(); ++s)
        if (score_exceeds_threshold(static_cast<std::int64_t>(s) + nn, nn, k)) acc += dist[s];
    return acc;
}

double single_classifier_accuracy(int k, double advantage) {
    return true_label_probability(k, advantage);
}

}  // namespace condorcet
