#include "condorcet/exact.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace condorcet;

namespace {

oracle::Ties ties_of(TiePolicy p) {
    switch (p) {
        case TiePolicy::strict_fail: return oracle::Ties::strict;
        case TiePolicy::uniform_random: return oracle::Ties::uniform;
        case TiePolicy::lowest_index: return oracle::Ties::lowest;
    }
    return oracle::Ties::uniform;
}

constexpr TiePolicy kPolicies[] = {TiePolicy::strict_fail, TiePolicy::uniform_random, TiePolicy::lowest_index};

}  // namespace

TEST(Compositions, Count) {
    EXPECT_EQ(composition_count(3, 3), 10u);
    EXPECT_EQ(composition_count(0, 4), 1u);
    EXPECT_EQ(composition_count(5, 1), 1u);
    EXPECT_EQ(composition_count(100, 5), 4598126u);
    EXPECT_EQ(composition_count(1'000'000, 50), std::numeric_limits<std::uint64_t>::max());
}

TEST(Compositions, LexicographicWalk) {
    std::vector<std::uint32_t> c{0, 0, 3};
    std::vector<std::vector<std::uint32_t>> seen{c};
    for (int i = 1; i < 10; ++i) {
        CountVectorDistribution::next_composition(c);
        seen.push_back(c);
    }
    EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
    EXPECT_EQ(seen.back(), (std::vector<std::uint32_t>{3, 0, 0}));
    for (const auto& s : seen) EXPECT_EQ(s[0] + s[1] + s[2], 3u);
}

TEST(ExactPlurality, Examples) {
    for (auto p : kPolicies) EXPECT_NEAR(exact_plurality_accuracy(3, std::vector{0.1}, p), 13.0 / 30, 1e-15);
    EXPECT_NEAR(exact_plurality_accuracy(2, std::vector{0.1, 0.1, 0.1}, TiePolicy::uniform_random), 0.648, 1e-14);
    EXPECT_NEAR(exact_plurality_accuracy(3, std::vector{0.1, 0.1, 0.1}, TiePolicy::uniform_random), 0.47017,
                5e-6);
}

TEST(ExactPlurality, MatchesBruteForce) {
    const std::vector<std::vector<double>> cases{
        {0.0}, {0.1, -0.2}, {0.3, 0.05, -0.1}, {0.2, 0.2, 0.2, 0.2}, {0.5, -0.3, 0.0, 0.25}, {0.1, 0.1, 0.1, 0.1, 0.1}};
    for (int k : {2, 3, 4})
        for (const auto& advs : cases) {
            std::vector<double> a = advs;
            for (auto& x : a) x = std::clamp(x, -1.0 / k + 1e-3, max_advantage(k));
            for (auto p : kPolicies)
                EXPECT_NEAR(exact_plurality_accuracy(k, a, p), oracle::plurality_accuracy(k, a, ties_of(p)), 1e-12)
                    << "k=" << k << " n=" << a.size();
        }
}

TEST(ExactPlurality, LayersNormalized) {
    const std::vector<double> advs{0.1, -0.1, 0.3, 0.0, 0.2, 0.05, 0.6, -0.2};
    const auto dist = CountVectorDistribution::compute(4, advs);
    ASSERT_EQ(dist.layer_mass().size(), advs.size() + 1);
    for (double m : dist.layer_mass()) EXPECT_NEAR(m, 1.0, 1e-10);
    EXPECT_EQ(dist.state_count(), composition_count(advs.size(), 4));
    double total = 0.0;
    dist.for_each_state([&](std::span<const std::uint32_t> c, double mass) {
        std::uint32_t s = 0;
        for (auto x : c) s += x;
        EXPECT_EQ(s, advs.size());
        total += mass;
    });
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(ExactPlurality, SymmetricInAdvantageOrder) {
    std::vector<double> advs{0.3, -0.1, 0.05, 0.2, 0.0, 0.15};
    const double ref = exact_plurality_accuracy(3, advs, TiePolicy::uniform_random);
    std::sort(advs.begin(), advs.end());
    do {
        EXPECT_NEAR(exact_plurality_accuracy(3, advs, TiePolicy::uniform_random), ref, 1e-13);
    } while (std::next_permutation(advs.begin(), advs.end()));
}

TEST(ExactPlurality, TwoClassesMatchBinomial) {
    for (int n = 1; n <= 21; n += 2)
        for (double a : {0.02, 0.1, 0.3})
            EXPECT_NEAR(exact_plurality_accuracy(2, std::vector<double>(static_cast<std::size_t>(n), a),
                                                 TiePolicy::strict_fail),
                        oracle::binomial_majority(n, 0.5 + a), 1e-12);
}

TEST(ExactPlurality, GrowthForPositiveAdvantage) {
    for (int k : {2, 3, 5})
        for (double a : {0.05, 0.1, 0.3}) {
            double prev = 0.0;
            for (std::size_t n = 1; n <= 31; n += 2) {
                const double acc =
                    exact_plurality_accuracy(k, std::vector<double>(n, a), TiePolicy::uniform_random);
                EXPECT_GE(acc, prev - 1e-15) << k << ' ' << a << ' ' << n;
                EXPECT_GE(acc, single_classifier_accuracy(k, a) - 1e-12);
                prev = acc;
            }
        }
}

TEST(ExactPlurality, DeclineForNegativeAdvantage) {
    for (int k : {2, 3, 5})
        for (double a : {-0.05, -0.1}) {
            double prev = 1.0;
            for (std::size_t n = 1; n <= 31; n += 2) {
                const double acc =
                    exact_plurality_accuracy(k, std::vector<double>(n, a), TiePolicy::uniform_random);
                EXPECT_LE(acc, prev + 1e-15);
                if (n >= 3) EXPECT_LT(acc, 1.0 / k);
                prev = acc;
            }
        }
}

TEST(ExactPlurality, StateCap) {
    EXPECT_THROW(exact_plurality_accuracy(10, std::vector<double>(200, 0.1), TiePolicy::uniform_random),
                 ResourceError);
    EXPECT_THROW(exact_plurality_accuracy(3, std::vector<double>(5, 0.1), TiePolicy::uniform_random, 20),
                 ResourceError);
    EXPECT_NO_THROW(exact_plurality_accuracy(3, std::vector<double>(5, 0.1), TiePolicy::uniform_random, 21));
}

TEST(ExactPlurality, InputErrors) {
    EXPECT_THROW(exact_plurality_accuracy(3, std::vector<double>{}, TiePolicy::uniform_random), DomainError);
    EXPECT_THROW(exact_plurality_accuracy(3, std::vector<double>{0.1, 0.9}, TiePolicy::uniform_random),
                 DomainError);
    EXPECT_THROW(exact_plurality_accuracy(1, std::vector<double>{0.0}, TiePolicy::uniform_random), DomainError);
}

TEST(ExactScoreThreshold, Examples) {
    EXPECT_NEAR(exact_score_threshold_accuracy(2, std::vector{0.1, 0.1, 0.1}), 0.648, 1e-14);
    EXPECT_NEAR(exact_score_threshold_accuracy(3, std::vector{0.1}), 13.0 / 30, 1e-15);
    EXPECT_NEAR(exact_score_threshold_accuracy(3, std::vector{0.0, 0.0}), 1.0 / 3, 1e-15);
}

TEST(ExactScoreThreshold, MatchesBruteForce) {
    for (int k : {2, 3, 4, 5})
        for (const auto& advs : std::vector<std::vector<double>>{{0.1}, {0.0, 0.2}, {0.1, -0.1, 0.2}, {0.15, 0.15, 0.15, 0.15}})
            EXPECT_NEAR(exact_score_threshold_accuracy(k, advs), oracle::score_threshold_accuracy(k, advs), 1e-12);
}

TEST(ExactScoreThreshold, AgreesWithPluralityForTwoClasses) {
    for (std::size_t n = 1; n <= 15; n += 2) {
        const std::vector<double> advs(n, 0.07);
        EXPECT_NEAR(exact_score_threshold_accuracy(2, advs),
                    exact_plurality_accuracy(2, advs, TiePolicy::strict_fail), 1e-12);
    }
}

TEST(SingleClassifier, Examples) {
    EXPECT_NEAR(single_classifier_accuracy(3, 0.1), 13.0 / 30, 1e-15);
    EXPECT_DOUBLE_EQ(single_classifier_accuracy(3, 0.0), 1.0 / 3);
    EXPECT_DOUBLE_EQ(single_classifier_accuracy(4, 0.25), 0.5);
}
