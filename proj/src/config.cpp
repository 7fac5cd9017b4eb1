#include "condorcet/config.hpp"

#include "condorcet/simulate.hpp"
#include "condorcet/vote.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace condorcet {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& known) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [key, _] : obj.items())
        if (!known.count(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
}

template <class T>
void read_field(const json& obj, const std::string& section, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    const std::string path = section + "." + key;
    if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ConfigError(path, "expected a string");
        out = it->template get<std::string>();
    } else if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw ConfigError(path, "expected a number");
        out = it->template get<double>();
    } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw ConfigError(path, "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (it->is_number_integer() && !it->is_number_unsigned())
                throw ConfigError(path, "must be non-negative");
        }
        out = it->template get<T>();
    } else {
        static_assert(sizeof(T) == 0, "unsupported field type");
    }
}

template <class T>
void read_list(const json& obj, const std::string& section, const char* key, std::vector<T>& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    const std::string path = section + "." + key;
    if (!it->is_array()) throw ConfigError(path, "expected an array");
    out.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& v = (*it)[i];
        const std::string item = path + "[" + std::to_string(i) + "]";
        if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ConfigError(item, "expected a string");
        } else if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) throw ConfigError(item, "expected a number");
        } else {
            if (!v.is_number_unsigned()) throw ConfigError(item, "expected a non-negative integer");
        }
        out.push_back(v.template get<T>());
    }
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    reject_unknown(doc, "", {"labels", "ensemble", "mc", "grids", "diagnose", "io"});
    RunConfig cfg;

    if (auto it = doc.find("labels"); it != doc.end()) {
        reject_unknown(*it, "labels", {"names"});
        read_list(*it, "labels", "names", cfg.labels);
    }
    if (auto it = doc.find("ensemble"); it != doc.end()) {
        reject_unknown(*it, "ensemble", {"k", "n", "advantage", "rho", "tie_policy", "rule"});
        read_field(*it, "ensemble", "k", cfg.ensemble.k);
        read_field(*it, "ensemble", "n", cfg.ensemble.n);
        if (auto a = it->find("advantage"); a != it->end() && a->is_number())
            cfg.ensemble.advantage = a->dump();
        else
            read_field(*it, "ensemble", "advantage", cfg.ensemble.advantage);
        read_field(*it, "ensemble", "rho", cfg.ensemble.rho);
        read_field(*it, "ensemble", "tie_policy", cfg.ensemble.tie_policy);
        read_field(*it, "ensemble", "rule", cfg.ensemble.rule);
    }
    if (auto it = doc.find("mc"); it != doc.end()) {
        reject_unknown(*it, "mc", {"trials", "seed"});
        read_field(*it, "mc", "trials", cfg.mc.trials);
        read_field(*it, "mc", "seed", cfg.mc.seed);
    }
    if (auto it = doc.find("grids"); it != doc.end()) {
        reject_unknown(*it, "grids", {"n_grid", "rho_grid"});
        read_list(*it, "grids", "n_grid", cfg.grids.n_grid);
        read_list(*it, "grids", "rho_grid", cfg.grids.rho_grid);
    }
    if (auto it = doc.find("diagnose"); it != doc.end()) {
        reject_unknown(*it, "diagnose", {"tolerance", "alpha", "bootstrap", "permutations", "margin"});
        read_field(*it, "diagnose", "tolerance", cfg.diagnose.tolerance);
        read_field(*it, "diagnose", "alpha", cfg.diagnose.alpha);
        read_field(*it, "diagnose", "bootstrap", cfg.diagnose.bootstrap);
        read_field(*it, "diagnose", "permutations", cfg.diagnose.permutations);
        read_field(*it, "diagnose", "margin", cfg.diagnose.margin);
    }
    if (auto it = doc.find("io"); it != doc.end()) {
        reject_unknown(*it, "io", {"input", "output"});
        read_field(*it, "io", "input", cfg.io.input);
        read_field(*it, "io", "output", cfg.io.output);
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

LabelSpace make_label_space(const std::vector<std::string>& names) {
    if (names.empty()) return LabelSpace::sentiment();
    LabelSpace space(names);
    if (space.find("Neutral") && !space.find("Indecisive")) space.add_alias("Indecisive", "Neutral");
    return space;
}

namespace {

template <class Fn>
void as_field(std::string_view field, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        throw ConfigError(field, e.what());
    }
}

void validate_labels(const RunConfig& cfg) {
    as_field("labels.names", [&] { make_label_space(cfg.labels); });
}

void validate_ensemble_common(const RunConfig& cfg) {
    const auto& e = cfg.ensemble;
    if (e.k < 2) throw ConfigError("ensemble.k", "must be >= 2");
    as_field("ensemble.tie_policy", [&] { parse_tie_policy(e.tie_policy); });
    if (!e.rule.empty()) as_field("ensemble.rule", [&] { parse_vote_rule(e.rule); });
    as_field("ensemble.advantage", [&] { AdvantageSequence::parse(e.advantage); });
}

void validate_n_grid(const RunConfig& cfg) {
    const auto& grid = cfg.grids.n_grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] == 0) throw ConfigError("grids.n_grid[" + std::to_string(i) + "]", "must be >= 1");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw ConfigError("grids.n_grid", "must be strictly increasing");
    }
}

void validate_advantages_over(const RunConfig& cfg, std::size_t n_max) {
    const auto seq = AdvantageSequence::parse(cfg.ensemble.advantage);
    as_field("ensemble.advantage", [&] {
        for (std::size_t i = 1; i <= n_max; ++i) seq.at(i, cfg.ensemble.k);
    });
}

std::size_t max_n(const RunConfig& cfg) {
    return cfg.grids.n_grid.empty() ? cfg.ensemble.n : cfg.grids.n_grid.back();
}

}  // namespace

void validate_for_exact(const RunConfig& cfg) {
    validate_ensemble_common(cfg);
    if (cfg.ensemble.n < 1) throw ConfigError("ensemble.n", "must be >= 1");
    validate_advantages_over(cfg, cfg.ensemble.n);
}

void validate_for_simulate(const RunConfig& cfg) {
    validate_labels(cfg);
    validate_ensemble_common(cfg);
    if (cfg.ensemble.n < 1) throw ConfigError("ensemble.n", "must be >= 1");
    if (cfg.mc.trials < 1) throw ConfigError("mc.trials", "must be >= 1");
    validate_n_grid(cfg);
    auto check_rho = [](double rho, const std::string& field) {
        if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError(field, "must lie in [0, 1]");
    };
    check_rho(cfg.ensemble.rho, "ensemble.rho");
    for (std::size_t i = 0; i < cfg.grids.rho_grid.size(); ++i)
        check_rho(cfg.grids.rho_grid[i], "grids.rho_grid[" + std::to_string(i) + "]");
    const bool dependent = cfg.ensemble.rho > 0.0 ||
                           std::any_of(cfg.grids.rho_grid.begin(), cfg.grids.rho_grid.end(),
                                       [](double r) { return r > 0.0; });
    if (dependent && !AdvantageSequence::parse(cfg.ensemble.advantage).is_constant())
        throw ConfigError("ensemble.advantage", "rho > 0 requires a constant advantage");
    validate_advantages_over(cfg, max_n(cfg));
}

void validate_for_convergence(const RunConfig& cfg) {
    validate_ensemble_common(cfg);
    if (cfg.mc.trials < 1) throw ConfigError("mc.trials", "must be >= 1");
    if (cfg.grids.n_grid.empty()) throw ConfigError("grids.n_grid", "must not be empty");
    validate_n_grid(cfg);
    validate_advantages_over(cfg, max_n(cfg));
}

void validate_for_diagnose(const RunConfig& cfg) {
    validate_labels(cfg);
    as_field("ensemble.tie_policy", [&] { parse_tie_policy(cfg.ensemble.tie_policy); });
    const auto& d = cfg.diagnose;
    if (!(d.tolerance >= 0.0)) throw ConfigError("diagnose.tolerance", "must be >= 0");
    if (!(d.alpha > 0.0 && d.alpha < 1.0)) throw ConfigError("diagnose.alpha", "must lie in (0, 1)");
    if (!(d.margin >= 0.0)) throw ConfigError("diagnose.margin", "must be >= 0");
    if (d.permutations < 100) throw ConfigError("diagnose.permutations", "must be >= 100");
}

DiagnoseOptions diagnose_options(const RunConfig& cfg) {
    DiagnoseOptions o;
    o.tolerance = cfg.diagnose.tolerance;
    o.alpha = cfg.diagnose.alpha;
    o.bootstrap = cfg.diagnose.bootstrap;
    o.permutations = cfg.diagnose.permutations;
    o.margin = cfg.diagnose.margin;
    o.tie_policy = parse_tie_policy(cfg.ensemble.tie_policy);
    o.seed = cfg.mc.seed;
    return o;
}

}  // namespace condorcet
