#include "condorcet/vote.hpp"

#include <algorithm>
#include <string>

namespace condorcet {

TiePolicy parse_tie_policy(std::string_view text) {
    if (text == "strict-fail") return TiePolicy::strict_fail;
    if (text == "uniform-random") return TiePolicy::uniform_random;
    if (text == "lowest-index") return TiePolicy::lowest_index;
    throw DomainError("unknown tie policy '" + std::string(text) +
                      "' (expected strict-fail, uniform-random or lowest-index)");
}

std::string_view to_string(TiePolicy policy) noexcept {
    switch (policy) {
        case TiePolicy::strict_fail: return "strict-fail";
        case TiePolicy::uniform_random: return "uniform-random";
        case TiePolicy::lowest_index: return "lowest-index";
    }
    return "?";
}

VoteRule parse_vote_rule(std::string_view text) {
    if (text == "plurality") return VoteRule::plurality;
    if (text == "score-threshold") return VoteRule::score_threshold;
    throw DomainError("unknown rule '" + std::string(text) +
                      "' (expected plurality or score-threshold)");
}

std::string_view to_string(VoteRule rule) noexcept {
    return rule == VoteRule::plurality ? "plurality" : "score-threshold";
}

VoteProfile::VoteProfile(int k, std::vector<Label> votes)
    : k_(k), votes_(std::move(votes)), counts_(static_cast<std::size_t>(std::max(k, 0)), 0) {
    if (k < 2) throw DomainError("vote profile needs k >= 2");
    if (votes_.empty()) throw DomainError("vote profile is empty");
    for (std::size_t i = 0; i < votes_.size(); ++i) {
        const Label v = votes_[i];
        if (v < 1 || v > k)
            throw DomainError("vote " + std::to_string(i) + " = " + std::to_string(v) +
                              " outside 1.." + std::to_string(k));
        ++counts_[static_cast<std::size_t>(v - 1)];
        score_ += v;
    }
}

Label plurality_from_counts(std::span<const std::uint32_t> counts, TiePolicy policy,
                            CounterRng& rng) {
    std::uint32_t best = 0;
    std::size_t tied = 0;
    std::size_t first = 0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] > best) {
            best = counts[j];
            tied = 1;
            first = j;
        } else if (counts[j] == best) {
            ++tied;
        }
    }
    if (tied == 1 || policy == TiePolicy::lowest_index) return static_cast<Label>(first + 1);
    if (policy == TiePolicy::strict_fail) return kAbstain;

    auto pick = rng.below(tied);
    for (std::size_t j = first; j < counts.size(); ++j) {
        if (counts[j] != best) continue;
        if (pick == 0) return static_cast<Label>(j + 1);
        --pick;
    }
    return kAbstain;  // unreachable
}

Label plurality_vote(const VoteProfile& profile, TiePolicy policy,
                     std::optional<std::uint64_t> seed) {
    if (policy == TiePolicy::uniform_random && !seed) {
        const auto& c = profile.counts();
        const auto best = *std::max_element(c.begin(), c.end());
        if (std::count(c.begin(), c.end(), best) > 1)
            throw DomainError("uniform-random tie break requires a seed");
    }
    CounterRng rng(seed.value_or(0), 0);
    return plurality_from_counts(profile.counts(), policy, rng);
}

bool score_threshold_vote(const VoteProfile& profile) {
    return score_exceeds_threshold(profile.score(), static_cast<std::int64_t>(profile.size()),
                                   profile.classes());
}

}  // namespace condorcet
