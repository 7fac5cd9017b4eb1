#include "condorcet/core.hpp"
#include "condorcet/rng.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>

using namespace condorcet;

TEST(LabelSpace, SentimentAndAlias) {
    const auto s = LabelSpace::sentiment();
    EXPECT_EQ(s.size(), 3);
    EXPECT_EQ(s.find("Negative"), 1);
    EXPECT_EQ(s.find("Positive"), 3);
    EXPECT_EQ(s.find("Indecisive"), s.find("Neutral"));
    EXPECT_FALSE(s.find("neutral").has_value());
    EXPECT_EQ(s.name(2), "Neutral");
    EXPECT_THROW(s.name(4), DomainError);
}

TEST(LabelSpace, RejectsBadNames) {
    EXPECT_THROW(LabelSpace({"a"}), DomainError);
    EXPECT_THROW(LabelSpace({"a", "a"}), DomainError);
    EXPECT_THROW(LabelSpace({"a", ""}), DomainError);
    auto s = LabelSpace::numbered(4);
    EXPECT_EQ(s.find("4"), 4);
    EXPECT_THROW(s.add_alias("x", "9"), DomainError);
}

TEST(Pmf, TrueLabelProbabilityExamples) {
    EXPECT_DOUBLE_EQ(true_label_probability(3, 0.0), 1.0 / 3);
    EXPECT_NEAR(true_label_probability(3, 0.1), 0.4333333333333333, 1e-15);
    EXPECT_DOUBLE_EQ(true_label_probability(2, 0.5), 1.0);
}

TEST(Pmf, WrongLabelProbabilityExamples) {
    EXPECT_NEAR(wrong_label_probability(3, 0.1), 0.2833333333333333, 1e-15);
    EXPECT_NEAR(wrong_label_probability(3, 2.0 / 3), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(wrong_label_probability(3, 0.0), 1.0 / 3);
}

TEST(Pmf, BoundsNamed) {
    try {
        true_label_probability(3, 0.7);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("upper bound"), std::string::npos);
    }
    try {
        wrong_label_probability(3, -1.0 / 3);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("lower bound"), std::string::npos);
    }
    EXPECT_THROW(UbtcaPmf(1, 0.0), DomainError);
    EXPECT_THROW(UbtcaPmf(3, NAN), DomainError);
    EXPECT_NO_THROW(UbtcaPmf(3, -0.33));
}

TEST(Pmf, SumsToOne) {
    for (int k : {2, 3, 4, 5, 7, 10, 100})
        for (double frac : {-0.99, -0.5, 0.0, 0.1, 0.37, 0.5, 0.99, 1.0}) {
            const double a = frac < 0 ? frac / k : frac * max_advantage(k);
            const UbtcaPmf pmf(k, a);
            EXPECT_NEAR(pmf.p_true() + (k - 1) * pmf.p_wrong(), 1.0, 1e-15) << k << ' ' << a;
            double total = 0.0;
            for (double p : pmf.probabilities()) total += p;
            EXPECT_NEAR(total, 1.0, 1e-14);
        }
}

TEST(Moments, MeanExamples) {
    EXPECT_DOUBLE_EQ(classifier_mean(3, 0.0), 2.0);
    EXPECT_NEAR(classifier_mean(3, 0.1), 2.15, 1e-15);
    EXPECT_DOUBLE_EQ(classifier_mean(5, 0.0), 3.0);
}

TEST(Moments, MeanMatchesSummation) {
    for (int k : {2, 3, 5, 8})
        for (double a : {-0.1, 0.0, 0.05, 0.2, max_advantage(k)})
            EXPECT_NEAR(classifier_mean(k, a), oracle::pmf_moments(k, a).mean, 1e-12);
}

TEST(Moments, VarianceExamples) {
    EXPECT_NEAR(classifier_moments(3, 0.0).variance, 2.0 / 3, 1e-14);
    EXPECT_NEAR(classifier_moments(3, 0.2).variance, 0.67667, 5e-6);
    EXPECT_NEAR(classifier_moments(3, 0.2).variance, 2.0 / 3 + 0.5 * 0.2 - 2.25 * 0.04, 1e-14);
    EXPECT_NEAR(classifier_moments(2, 0.0).variance, 0.25, 1e-15);
}

// Summation gives a*k(4k+1)/6 for E[C^2] and a*k(k-2)/6 for the variance.
TEST(Moments, SummedLinearCoefficients) {
    for (int k : {2, 3, 4, 6})
        for (double a : {-0.1, 0.05, 0.2}) {
            const auto m = oracle::pmf_moments(k, a);
            const double kd = k;
            EXPECT_NEAR(m.second, (kd + 1) * (2 * kd + 1) / 6 + a * kd * (4 * kd + 1) / 6, 1e-12);
            EXPECT_NEAR(m.variance, (kd * kd - 1) / 12 + a * kd * (kd - 2) / 6 - a * a * kd * kd / 4, 1e-12);
            const auto r = classifier_moments(k, a);
            EXPECT_NEAR(r.second_moment, m.second, 1e-12);
            EXPECT_NEAR(r.variance, m.variance, 1e-12);
        }
}

TEST(Moments, QuotedFormulasDisagreeExceptAtZero) {
    const auto r = classifier_moments(3, 0.2);
    EXPECT_NEAR(r.quoted_variance, 2.0 / 3 + 0.2 * 3 * 11 / 6.0 - 0.04 * 9 / 4, 1e-14);
    EXPECT_TRUE(r.discrepancy_flag);
    EXPECT_GT(std::abs(r.quoted_variance - r.variance), 0.1);
    EXPECT_FALSE(classifier_moments(3, 0.0).discrepancy_flag);
    EXPECT_NEAR(classifier_moments(3, 0.0).quoted_variance, 2.0 / 3, 1e-14);
    for (int k : {2, 3, 5})
        for (double a : {-0.2 / k, 0.01, 0.3}) EXPECT_TRUE(classifier_moments(k, a).discrepancy_flag);
}

TEST(Moments, UniformReduction) {
    for (int k : {2, 3, 4, 9}) {
        const auto r = classifier_moments(k, 0.0);
        EXPECT_NEAR(r.mean, (k + 1) / 2.0, 1e-13);
        EXPECT_NEAR(r.variance, (k * k - 1) / 12.0, 1e-12);
    }
}

TEST(Moments, AsymptoticVariance) {
    const auto r = classifier_moments(3, 0.2, 0.0);
    ASSERT_TRUE(r.asymptotic_variance);
    EXPECT_NEAR(*r.asymptotic_variance, 2.0 / 3, 1e-14);
    EXPECT_FALSE(classifier_moments(3, 0.2).asymptotic_variance);
}

TEST(Moments, SampledFrequenciesWithinFourSigma) {
    const UbtcaPmf pmf(4, 0.15);
    const auto probs = pmf.probabilities();
    std::vector<double> cdf;
    double acc = 0.0;
    for (double p : probs) cdf.push_back(acc += p);
    constexpr int draws = 1'000'000;
    std::vector<int> hits(4, 0);
    CounterRng rng(7, 0);
    for (int i = 0; i < draws; ++i) {
        const double u = rng.uniform();
        int j = 0;
        while (j < 3 && u >= cdf[static_cast<std::size_t>(j)]) ++j;
        ++hits[static_cast<std::size_t>(j)];
    }
    for (std::size_t j = 0; j < 4; ++j) {
        const double se = std::sqrt(probs[j] * (1 - probs[j]) / draws);
        EXPECT_LT(std::abs(hits[j] / double(draws) - probs[j]), 4 * se);
    }
}

TEST(Advantage, Parse) {
    EXPECT_TRUE(AdvantageSequence::parse("0.1").is_constant());
    EXPECT_DOUBLE_EQ(AdvantageSequence::parse("const:0.25").at(9, 3), 0.25);
    EXPECT_EQ(AdvantageSequence::parse("log").kind(), AdvantageSequence::Kind::log_decay);
    EXPECT_DOUBLE_EQ(AdvantageSequence::parse("power:2").parameter(), 2.0);
    const auto list = AdvantageSequence::parse("list:0.1,0.2,-0.1");
    EXPECT_EQ(list.take(3, 3), (std::vector<double>{0.1, 0.2, -0.1}));
    EXPECT_THROW(list.at(4, 3), DomainError);
    for (const char* bad : {"", "abc", "power:0", "power:-1", "list:", "list:0.1,x", "const:"})
        EXPECT_THROW(AdvantageSequence::parse(bad), DomainError) << bad;
}

TEST(Advantage, Values) {
    const auto lg = AdvantageSequence::log_decay();
    EXPECT_DOUBLE_EQ(lg.at(1, 3), 2.0 / 3);  // 1/ln 2 capped
    EXPECT_DOUBLE_EQ(lg.at(10, 3), 1.0 / std::log(11.0));
    const auto pw = AdvantageSequence::power_decay(2);
    EXPECT_DOUBLE_EQ(pw.at(1, 3), 2.0 / 3);
    EXPECT_DOUBLE_EQ(pw.at(4, 3), 1.0 / 16);
    EXPECT_THROW(AdvantageSequence::constant(0.9).at(1, 3), DomainError);
    EXPECT_THROW(AdvantageSequence::constant(0.1).at(0, 3), DomainError);
}

TEST(Advantage, Limits) {
    EXPECT_EQ(AdvantageSequence::constant(0.2).limit(), 0.2);
    EXPECT_EQ(AdvantageSequence::log_decay().limit(), 0.0);
    EXPECT_EQ(AdvantageSequence::power_decay(0.5).limit(), 0.0);
    EXPECT_FALSE(AdvantageSequence::explicit_list({0.1}).limit().has_value());
}

TEST(Advantage, EvaluationIsPure) {
    const auto pw = AdvantageSequence::power_decay(1.0 / 3);
    for (std::size_t i = 1; i < 200; ++i) {
        const double a = pw.at(i, 5);
        const double b = pw.at(i, 5);
        EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
    }
    EXPECT_EQ(pw.take(50, 5), pw.take(50, 5));
}

TEST(Advantage, Drift) {
    const auto c = AdvantageSequence::constant(0.1);
    for (std::size_t n : {1u, 4u, 100u, 10000u}) EXPECT_DOUBLE_EQ(c.drift(n, 3), 0.1 * std::sqrt(double(n)));
    const auto slow = AdvantageSequence::power_decay(1.0 / 3);
    double prev = 0.0;
    for (std::size_t n : {1u, 2u, 5u, 11u, 101u, 1001u}) {
        EXPECT_GT(slow.drift(n, 3), prev);
        prev = slow.drift(n, 3);
    }
    const auto fast = AdvantageSequence::power_decay(2);
    prev = fast.drift(10, 3);
    for (std::size_t n : {100u, 1000u, 10000u}) {
        EXPECT_LT(fast.drift(n, 3), prev);
        prev = fast.drift(n, 3);
    }
    EXPECT_THROW(c.drift(0, 3), DomainError);
}

TEST(Iwtub, ConformingCopies) {
    const auto p = UbtcaPmf(3, 0.1).probabilities();
    const std::vector<EmpiricalPmf> pmfs(3, EmpiricalPmf{p, 3});
    const auto v = iwtub_validate(pmfs, 0.01);
    EXPECT_TRUE(v.identical);
    EXPECT_TRUE(v.better_than_random);
    EXPECT_TRUE(v.uniform_errors);
    EXPECT_NEAR(v.max_tv_distance, 0.0, 1e-15);
}

TEST(Iwtub, UnevenErrors) {
    const std::vector<EmpiricalPmf> pmfs{{{0.5, 0.3, 0.2}, 1}};
    const auto v = iwtub_validate(pmfs, 0.01);
    EXPECT_FALSE(v.uniform_errors);
    EXPECT_TRUE(v.better_than_random);
    EXPECT_NEAR(v.wrong_spread[0], 0.05, 1e-12);
}

TEST(Iwtub, WorseThanRandom) {
    const std::vector<EmpiricalPmf> pmfs{{UbtcaPmf(3, -0.05).probabilities(), 3}};
    EXPECT_FALSE(iwtub_validate(pmfs, 0.01).better_than_random);
}

TEST(Iwtub, DistinctMarginals) {
    const std::vector<EmpiricalPmf> pmfs{{UbtcaPmf(3, 0.1).probabilities(), 3},
                                         {UbtcaPmf(3, 0.3).probabilities(), 3}};
    const auto v = iwtub_validate(pmfs, 0.05);
    EXPECT_FALSE(v.identical);
    EXPECT_NEAR(v.max_tv_distance, 0.2, 1e-12);
}

TEST(Iwtub, TrueLabelPositionIgnored) {
    const std::vector<EmpiricalPmf> pmfs{{{0.6, 0.2, 0.2}, 1}, {{0.2, 0.2, 0.6}, 3}, {{0.2, 0.6, 0.2}, 2}};
    EXPECT_TRUE(iwtub_validate(pmfs, 1e-9).identical);
}

TEST(Iwtub, Errors) {
    EXPECT_THROW(iwtub_validate({}, 0.01), DomainError);
    const std::vector<EmpiricalPmf> mismatched{{{0.5, 0.5}, 1}, {{0.4, 0.3, 0.3}, 1}};
    EXPECT_THROW(iwtub_validate(mismatched, 0.01), DomainError);
    const std::vector<EmpiricalPmf> unnormalized{{{0.5, 0.3, 0.3}, 1}};
    EXPECT_THROW(iwtub_validate(unnormalized, 0.01), DomainError);
}
