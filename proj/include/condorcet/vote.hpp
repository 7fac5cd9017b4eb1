#pragma once

#include "condorcet/core.hpp"
#include "condorcet/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace condorcet {

enum class TiePolicy { strict_fail, uniform_random, lowest_index };

TiePolicy parse_tie_policy(std::string_view text);
std::string_view to_string(TiePolicy policy) noexcept;

/// Aggregation rule for deciding whether the ensemble names the true label.
enum class VoteRule { plurality, score_threshold };

VoteRule parse_vote_rule(std::string_view text);
std::string_view to_string(VoteRule rule) noexcept;

/// n votes over labels 1..k.
class VoteProfile {
public:
    VoteProfile(int k, std::vector<Label> votes);

    int classes() const noexcept { return k_; }
    std::size_t size() const noexcept { return votes_.size(); }
    std::span<const Label> votes() const noexcept { return votes_; }
    /// counts()[j-1] = number of votes for label j.
    const std::vector<std::uint32_t>& counts() const noexcept { return counts_; }
    /// Sum of vote indices.
    std::int64_t score() const noexcept { return score_; }

private:
    int k_;
    std::vector<Label> votes_;
    std::vector<std::uint32_t> counts_;
    std::int64_t score_ = 0;
};

/// Plurality winner from a count vector; kAbstain on a strict-fail tie.
/// The generator is only consulted for uniform-random ties.
Label plurality_from_counts(std::span<const std::uint32_t> counts, TiePolicy policy,
                            CounterRng& rng);

/// Uniform-random ties need a seed; other policies ignore it.
Label plurality_vote(const VoteProfile& profile, TiePolicy policy,
                     std::optional<std::uint64_t> seed = std::nullopt);

/// Mean vote index strictly above (k+1)/2, evaluated as 2*S > n*(k+1).
bool score_threshold_vote(const VoteProfile& profile);

constexpr bool score_exceeds_threshold(std::int64_t score, std::int64_t n, std::int64_t k) noexcept {
    return 2 * score > n * (k + 1);
}

}  // namespace condorcet
