#pragma once
// Label spaces, the uniformly-biased classifier model, advantage schedules
// and per-classifier moments.
//
// Analytic routines use the canonical encoding: labels are 1..k and the
// true label is k. Real label names are mapped onto that convention only at
// the ingest/CLI boundary.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace condorcet {

using Label = int;

/// Returned by the plurality rule when a strict-fail tie occurs.
inline constexpr Label kAbstain = 0;
/// Marks an absent prediction cell in a dataset.
inline constexpr Label kMissing = -1;

/// Input violates a documented precondition. Maps to CLI exit code 1.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Computation refused because its state space exceeds a configured cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LabelSpace {
public:
    explicit LabelSpace(std::vector<std::string> names);

    /// Labels named "1".."k".
    static LabelSpace numbered(int k);
    /// Negative, Neutral, Positive; "Indecisive" is accepted as Neutral.
    static LabelSpace sentiment();

    int size() const noexcept { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(Label label) const;

    /// Resolves a name or registered alias to its 1-based label.
    std::optional<Label> find(std::string_view name) const;

    void add_alias(std::string alias, std::string_view canonical);

    bool operator==(const LabelSpace& other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Label> index_;
};

/// Throws DomainError unless k >= 2 and -1/k < a <= (k-1)/k.
void check_advantage(int k, double advantage);
bool advantage_in_range(int k, double advantage) noexcept;
double max_advantage(int k) noexcept;

/// Per-classifier label distribution: the true label gets 1/k + a, every
/// wrong label gets 1/k - a/(k-1).
class UbtcaPmf {
public:
    UbtcaPmf(int k, double advantage);

    int classes() const noexcept { return k_; }
    double advantage() const noexcept { return advantage_; }
    double p_true() const noexcept { return p_true_; }
    double p_wrong() const noexcept { return p_wrong_; }

    /// Probability of a canonical vote (true label = k).
    double probability(Label vote) const;
    /// Probabilities of labels 1..k in order.
    std::vector<double> probabilities() const;

private:
    int k_;
    double advantage_;
    double p_true_;
    double p_wrong_;
};

double true_label_probability(int k, double advantage);
double wrong_label_probability(int k, double advantage);

/// Closed form (k+1)/2 + a*k/2.
double classifier_mean(int k, double advantage);

struct MomentReport {
    // Direct summation over the pmf.
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    // The widely quoted closed forms
    //   E[C^2] = (k+1)(2k+1)/6 + a k(8k-1)/6
    //   V[C]   = (k^2-1)/12 + a k(5k-4)/6 - a^2 k^2/4
    // evaluated verbatim. Summation gives a k(4k+1)/6 and a k(k-2)/6 for the
    // linear terms, so these disagree whenever a != 0.
    double quoted_second_moment = 0.0;
    double quoted_variance = 0.0;
    bool discrepancy_flag = false;
    /// Summed variance at the limiting advantage, when one was supplied.
    std::optional<double> asymptotic_variance;
};

MomentReport classifier_moments(int k, double advantage,
                                std::optional<double> limit_advantage = std::nullopt);

/// Advantage schedule a_1, a_2, ... for non-identical ensembles.
class AdvantageSequence {
public:
    enum class Kind { constant, log_decay, power_decay, explicit_list };

    static AdvantageSequence constant(double value);
    /// a_i = 1/ln(i+1).
    static AdvantageSequence log_decay();
    /// a_i = i^(-alpha), alpha > 0.
    static AdvantageSequence power_decay(double alpha);
    static AdvantageSequence explicit_list(std::vector<double> values);

    /// Accepts "0.1", "const:0.1", "log", "power:2", "list:0.1,0.2".
    static AdvantageSequence parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return parameter_; }
    bool is_constant() const noexcept { return kind_ == Kind::constant; }

    /// Advantage of the i-th classifier (1-based) paired with k classes.
    /// Decay schedules are capped at (k-1)/k; constant and explicit values
    /// are validated and rejected when out of range.
    double at(std::size_t i, int k) const;
    std::vector<double> take(std::size_t n, int k) const;

    /// sum_{i<=n} a_i / sqrt(n) over the values at() returns.
    double drift(std::size_t n, int k) const;

    /// a_infinity, when the schedule has a limit.
    std::optional<double> limit() const;

    std::string describe() const;

private:
    AdvantageSequence(Kind kind, double parameter, std::vector<double> values)
        : kind_(kind), parameter_(parameter), values_(std::move(values)) {}

    Kind kind_;
    double parameter_;
    std::vector<double> values_;
};

/// Empirical label distribution of one classifier with its true label.
struct EmpiricalPmf {
    std::vector<double> probs;  // labels 1..k
    Label true_label = 1;
};

struct IwtubVerdicts {
    bool identical = false;
    bool better_than_random = false;
    bool uniform_errors = false;
    double max_tv_distance = 0.0;
    std::vector<double> true_probabilities;
    /// Max deviation of wrong-label masses from their own mean, per input.
    std::vector<double> wrong_spread;
    std::vector<double> max_wrong_probability;
};

/// Checks identical distribution, better-than-random and uniform errors on
/// marginals. Independence cannot be decided here.
IwtubVerdicts iwtub_validate(std::span<const EmpiricalPmf> pmfs, double tolerance);

}  // namespace condorcet
