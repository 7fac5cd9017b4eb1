#pragma once
// Checks the identical-distribution, better-than-random and uniform-error
// conditions on prediction data, then tests independence by comparing the
// observed bagging accuracy with what independent models would achieve.

#include "condorcet/dataset.hpp"
#include "condorcet/vote.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace condorcet {

struct DiagnoseOptions {
    double tolerance = 0.05;   // max pairwise TV distance for condition 1
    double alpha = 0.01;       // test level and permutation CI level
    double margin = 0.01;      // accuracy margin below the parametric baseline
    std::size_t bootstrap = 200;
    std::size_t permutations = 200;
    std::size_t min_records = 100;
    TiePolicy tie_policy = TiePolicy::uniform_random;
    std::uint64_t seed = 0;
};

struct ModelConditionStats {
    std::string model;
    double accuracy = 0.0;
    /// One-sided exact binomial test of accuracy > 1/k.
    double binomial_p_value = 1.0;
    /// Goodness of fit of wrong-label counts to uniformity, pooled over
    /// true classes.
    double chi_square = 0.0;
    std::size_t chi_square_dof = 0;
    double chi_square_p_value = 1.0;
    double max_wrong_rate = 0.0;
    bool better_than_random = false;
    bool uniform_errors = false;
};

struct ConditionResults {
    bool identical = false;
    /// Max over model pairs and true classes of the row TV distance.
    double max_tv_distance = 0.0;
    bool better_than_random = false;
    bool uniform_errors = false;
    std::vector<ModelConditionStats> models;
};

enum class Verdict { consistent, rejected };
std::string_view to_string(Verdict v) noexcept;

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

struct IndependenceResult {
    /// Exact plurality accuracy of independent classifiers with the fitted
    /// advantages accuracy - 1/k.
    double predicted_accuracy_parametric = 0.0;
    double permutation_mean = 0.0;
    Interval permutation_ci;
    double observed_ensemble_accuracy = 0.0;
    /// Percentile bootstrap interval of the observed accuracy (empty when
    /// bootstrap = 0).
    Interval observed_ci;
    /// observed - parametric prediction.
    double gap = 0.0;
    Verdict verdict = Verdict::consistent;
    std::vector<double> fitted_advantages;
};

struct DiagnosticReport {
    std::vector<std::string> models;
    std::size_t records = 0;
    int classes = 0;
    ConditionResults conditions;
    IndependenceResult independence;
};

ConditionResults check_conditions(const Dataset& data, std::span<const std::size_t> models,
                                  const DiagnoseOptions& options);

IndependenceResult independence_gap(const Dataset& data, std::span<const std::size_t> models,
                                    const DiagnoseOptions& options);

DiagnosticReport diagnose(const Dataset& data, std::span<const std::string> models,
                          const DiagnoseOptions& options);

/// Prediction columns (in `models` order) after shuffling every column but
/// the first within strata of the true label. Each replicate index gives
/// its own reproducible stream derived from seed.
std::vector<std::vector<Label>> stratified_shuffle(const Dataset& data, std::span<const std::size_t> models,
                                                   std::uint64_t seed, std::size_t replicate);

/// Linear-interpolated quantile of unsorted values, q in [0, 1].
double quantile(std::vector<double> values, double q);

}  // namespace condorcet
