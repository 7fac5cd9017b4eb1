#include "condorcet/core.hpp"

#include "condorcet/detail/parse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace condorcet {

namespace {

constexpr double kBoundSlack = 1e-12;

void check_classes(int k) {
    if (k < 2) throw DomainError("class count must be at least 2, got " + std::to_string(k));
}

}  // namespace

LabelSpace::LabelSpace(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2) throw DomainError("label space needs at least 2 labels");
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) throw DomainError("label names must be non-empty");
        if (!index_.emplace(names_[i], static_cast<Label>(i + 1)).second)
            throw DomainError("duplicate label name '" + names_[i] + "'");
    }
}

LabelSpace LabelSpace::numbered(int k) {
    check_classes(k);
    std::vector<std::string> names;
    for (int i = 1; i <= k; ++i) names.push_back(std::to_string(i));
    return LabelSpace(std::move(names));
}

LabelSpace LabelSpace::sentiment() {
    LabelSpace space({"Negative", "Neutral", "Positive"});
    space.add_alias("Indecisive", "Neutral");
    return space;
}

const std::string& LabelSpace::name(Label label) const {
    if (label < 1 || label > size())
        throw DomainError("label index " + std::to_string(label) + " outside 1.." +
                          std::to_string(size()));
    return names_[static_cast<std::size_t>(label - 1)];
}

std::optional<Label> LabelSpace::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void LabelSpace::add_alias(std::string alias, std::string_view canonical) {
    auto target = find(canonical);
    if (!target) throw DomainError("alias target '" + std::string(canonical) + "' is not a label");
    if (index_.count(alias)) throw DomainError("alias '" + alias + "' already defined");
    index_.emplace(std::move(alias), *target);
}

double max_advantage(int k) noexcept {
    return static_cast<double>(k - 1) / static_cast<double>(k);
}

bool advantage_in_range(int k, double advantage) noexcept {
    if (k < 2 || !std::isfinite(advantage)) return false;
    return advantage > -1.0 / k && advantage <= max_advantage(k) + kBoundSlack;
}

void check_advantage(int k, double advantage) {
    check_classes(k);
    if (!std::isfinite(advantage)) throw DomainError("advantage must be finite");
    if (!(advantage > -1.0 / k)) {
        std::ostringstream msg;
        msg << "advantage " << advantage << " violates lower bound a > -1/k = " << -1.0 / k
            << " (k=" << k << ")";
        throw DomainError(msg.str());
    }
    if (advantage > max_advantage(k) + kBoundSlack) {
        std::ostringstream msg;
        msg << "advantage " << advantage << " violates upper bound a <= (k-1)/k = "
            << max_advantage(k) << " (k=" << k << ")";
        throw DomainError(msg.str());
    }
}

UbtcaPmf::UbtcaPmf(int k, double advantage) : k_(k), advantage_(advantage) {
    check_advantage(k, advantage);
    const double kd = static_cast<double>(k);
    p_true_ = std::min(1.0, 1.0 / kd + advantage);
    p_wrong_ = std::max(0.0, 1.0 / kd - advantage / (kd - 1.0));
}

double UbtcaPmf::probability(Label vote) const {
    if (vote < 1 || vote > k_) throw DomainError("vote outside 1..k");
    return vote == k_ ? p_true_ : p_wrong_;
}

std::vector<double> UbtcaPmf::probabilities() const {
    std::vector<double> p(static_cast<std::size_t>(k_), p_wrong_);
    p.back() = p_true_;
    return p;
}

double true_label_probability(int k, double advantage) {
    return UbtcaPmf(k, advantage).p_true();
}

double wrong_label_probability(int k, double advantage) {
    return UbtcaPmf(k, advantage).p_wrong();
}

double classifier_mean(int k, double advantage) {
    check_advantage(k, advantage);
    return (k + 1) / 2.0 + advantage * k / 2.0;
}

namespace {

double summed_variance(int k, double advantage) {
    const UbtcaPmf pmf(k, advantage);
    double m1 = 0.0;
    double m2 = 0.0;
    for (int j = 1; j <= k; ++j) {
        const double p = pmf.probability(j);
        m1 += j * p;
        m2 += static_cast<double>(j) * j * p;
    }
    return m2 - m1 * m1;
}

}  // namespace

MomentReport classifier_moments(int k, double advantage, std::optional<double> limit_advantage) {
    const UbtcaPmf pmf(k, advantage);
    MomentReport r;
    for (int j = 1; j <= k; ++j) {
        const double p = pmf.probability(j);
        r.mean += j * p;
        r.second_moment += static_cast<double>(j) * j * p;
    }
    r.variance = r.second_moment - r.mean * r.mean;

    const double kd = k;
    const double a = advantage;
    r.quoted_second_moment = (kd + 1) * (2 * kd + 1) / 6.0 + a * kd * (8 * kd - 1) / 6.0;
    r.quoted_variance =
        (kd * kd - 1) / 12.0 + a * kd * (5 * kd - 4) / 6.0 - a * a * kd * kd / 4.0;
    r.discrepancy_flag = a != 0.0 && std::abs(r.variance - r.quoted_variance) > 1e-9;

    if (limit_advantage) r.asymptotic_variance = summed_variance(k, *limit_advantage);
    return r;
}

AdvantageSequence AdvantageSequence::constant(double value) {
    if (!std::isfinite(value)) throw DomainError("constant advantage must be finite");
    return AdvantageSequence(Kind::constant, value, {});
}

AdvantageSequence AdvantageSequence::log_decay() {
    return AdvantageSequence(Kind::log_decay, 0.0, {});
}

AdvantageSequence AdvantageSequence::power_decay(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("power-decay exponent must be > 0");
    return AdvantageSequence(Kind::power_decay, alpha, {});
}

AdvantageSequence AdvantageSequence::explicit_list(std::vector<double> values) {
    if (values.empty()) throw DomainError("explicit advantage list is empty");
    for (double v : values)
        if (!std::isfinite(v)) throw DomainError("explicit advantages must be finite");
    return AdvantageSequence(Kind::explicit_list, 0.0, std::move(values));
}

AdvantageSequence AdvantageSequence::parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    const std::string_view rest =
        colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

    if (colon == std::string_view::npos) {
        if (head == "log") return log_decay();
        if (auto v = detail::parse_double(head)) return constant(*v);
        throw DomainError("cannot parse advantage spec '" + std::string(text) + "'");
    }
    if (head == "const" || head == "constant") {
        if (auto v = detail::parse_double(rest)) return constant(*v);
    } else if (head == "power") {
        if (auto v = detail::parse_double(rest)) return power_decay(*v);
    } else if (head == "list") {
        std::vector<double> values;
        for (auto item : detail::split(rest, ',')) {
            auto v = detail::parse_double(item);
            if (!v) throw DomainError("bad value '" + std::string(item) + "' in advantage list");
            values.push_back(*v);
        }
        return explicit_list(std::move(values));
    }
    throw DomainError("cannot parse advantage spec '" + std::string(text) + "'");
}

double AdvantageSequence::at(std::size_t i, int k) const {
    if (i == 0) throw DomainError("advantage sequence index is 1-based");
    check_classes(k);
    const double cap = max_advantage(k);
    switch (kind_) {
        case Kind::constant:
            check_advantage(k, parameter_);
            return parameter_;
        case Kind::log_decay:
            return std::min(cap, 1.0 / std::log(static_cast<double>(i) + 1.0));
        case Kind::power_decay:
            return std::min(cap, std::pow(static_cast<double>(i), -parameter_));
        case Kind::explicit_list: {
            if (i > values_.size())
                throw DomainError("advantage index " + std::to_string(i) +
                                  " beyond explicit list of length " +
                                  std::to_string(values_.size()));
            const double v = values_[i - 1];
            check_advantage(k, v);
            return v;
        }
    }
    return 0.0;
}

std::vector<double> AdvantageSequence::take(std::size_t n, int k) const {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) out.push_back(at(i, k));
    return out;
}

double AdvantageSequence::drift(std::size_t n, int k) const {
    if (n == 0) throw DomainError("drift needs n >= 1");
    if (kind_ == Kind::constant) {
        check_advantage(k, parameter_);
        return parameter_ * std::sqrt(static_cast<double>(n));
    }
    double sum = 0.0;
    for (std::size_t i = 1; i <= n; ++i) sum += at(i, k);
    return sum / std::sqrt(static_cast<double>(n));
}

std::optional<double> AdvantageSequence::limit() const {
    switch (kind_) {
        case Kind::constant: return parameter_;
        case Kind::log_decay:
        case Kind::power_decay: return 0.0;
        case Kind::explicit_list: return std::nullopt;
    }
    return std::nullopt;
}

std::string AdvantageSequence::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case Kind::constant: out << "const:" << parameter_; break;
        case Kind::log_decay: out << "log"; break;
        case Kind::power_decay: out << "power:" << parameter_; break;
        case Kind::explicit_list: {
            out << "list:";
            for (std::size_t i = 0; i < values_.size(); ++i) out << (i ? "," : "") << values_[i];
            break;
        }
    }
    return out.str();
}

namespace {

// True label first, wrong labels in increasing order.
std::vector<double> canonical_order(const EmpiricalPmf& pmf) {
    std::vector<double> out;
    out.reserve(pmf.probs.size());
    out.push_back(pmf.probs[static_cast<std::size_t>(pmf.true_label - 1)]);
    for (std::size_t j = 0; j < pmf.probs.size(); ++j)
        if (static_cast<Label>(j + 1) != pmf.true_label) out.push_back(pmf.probs[j]);
    return out;
}

}  // namespace

IwtubVerdicts iwtub_validate(std::span<const EmpiricalPmf> pmfs, double tolerance) {
    if (pmfs.empty()) throw DomainError("iwtub_validate needs at least one distribution");
    if (!(tolerance >= 0.0)) throw DomainError("tolerance must be non-negative");
    const std::size_t k = pmfs.front().probs.size();
    if (k < 2) throw DomainError("distributions need at least 2 labels");

    std::vector<std::vector<double>> canon;
    for (std::size_t m = 0; m < pmfs.size(); ++m) {
        const auto& pmf = pmfs[m];
        if (pmf.probs.size() != k)
            throw DomainError("distribution " + std::to_string(m) + " has mismatched k");
        if (pmf.true_label < 1 || pmf.true_label > static_cast<Label>(k))
            throw DomainError("distribution " + std::to_string(m) + " has invalid true label");
        double total = 0.0;
        for (double p : pmf.probs) {
            if (p < 0.0) throw DomainError("negative probability in distribution " + std::to_string(m));
            total += p;
        }
        if (std::abs(total - 1.0) > std::max(tolerance, 1e-9))
            throw DomainError("distribution " + std::to_string(m) + " is not normalized");
        canon.push_back(canonical_order(pmf));
    }

    IwtubVerdicts v;
    for (std::size_t a = 0; a < canon.size(); ++a)
        for (std::size_t b = a + 1; b < canon.size(); ++b) {
            double tv = 0.0;
            for (std::size_t j = 0; j < k; ++j) tv += std::abs(canon[a][j] - canon[b][j]);
            v.max_tv_distance = std::max(v.max_tv_distance, tv / 2.0);
        }
    v.identical = v.max_tv_distance <= tolerance;

    const double chance = 1.0 / static_cast<double>(k);
    v.better_than_random = true;
    v.uniform_errors = true;
    for (const auto& c : canon) {
        v.true_probabilities.push_back(c[0]);
        if (!(c[0] > chance)) v.better_than_random = false;

        double mean = 0.0;
        for (std::size_t j = 1; j < k; ++j) mean += c[j];
        mean /= static_cast<double>(k - 1);
        double spread = 0.0;
        double worst = 0.0;
        for (std::size_t j = 1; j < k; ++j) {
            spread = std::max(spread, std::abs(c[j] - mean));
            worst = std::max(worst, c[j]);
        }
        v.wrong_spread.push_back(spread);
        v.max_wrong_probability.push_back(worst);
        if (spread > tolerance || !(worst < chance)) v.uniform_errors = false;
    }
    return v;
}

}  // namespace condorcet
