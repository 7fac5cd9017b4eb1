#include "condorcet/cli.hpp"

#include "condorcet/config.hpp"
#include "condorcet/csv.hpp"
#include "condorcet/detail/parse.hpp"
#include "condorcet/diagnose.hpp"
#include "condorcet/exact.hpp"
#include "condorcet/ingest.hpp"
#include "condorcet/metrics.hpp"
#include "condorcet/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace condorcet::cli {

namespace {

using detail::format_double;

std::string fixed5(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(5) << v;
    return s.str();
}

std::string fixed2(double v) {
    std::ostringstream s;
    s << std::showpos << std::fixed << std::setprecision(2) << v;
    return s.str();
}

template <class T>
std::vector<T> parse_list(std::string_view text, std::string_view field) {
    std::vector<T> out;
    for (auto item : detail::split(text, ',')) {
        if constexpr (std::is_same_v<T, double>) {
            auto v = detail::parse_double(item);
            if (!v) throw ConfigError(field, "bad number '" + std::string(item) + "'");
            out.push_back(*v);
        } else {
            auto v = detail::parse_uint(item);
            if (!v) throw ConfigError(field, "bad integer '" + std::string(item) + "'");
            out.push_back(static_cast<T>(*v));
        }
    }
    return out;
}

std::vector<std::string> parse_names(std::string_view text) {
    std::vector<std::string> out;
    for (auto item : detail::split(text, ','))
        if (!item.empty()) out.emplace_back(item);
    return out;
}

/// Empty path means stdout.
void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    f << content;
    if (!f) throw IoError("write to '" + path + "' failed");
}

// Flags shared by the subcommands. Every value is optional; when present it
// overrides the config file.
struct Flags {
    std::string config;
    int k = 0;
    std::size_t n = 0;
    std::string advantage;
    std::string tie_policy;
    std::string rule;
    double rho = 0.0;
    std::string n_grid;
    std::string rho_grid;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t state_cap = kDefaultStateCap;
    std::string input;
    std::string out;
    std::string labels;
    std::string models;
    double tolerance = 0.0;
    double alpha = 0.0;
    std::size_t bootstrap = 0;
    std::size_t permutations = 0;
    double margin = 0.0;
    std::size_t min_records = 100;
    std::size_t rows = 0;
    std::string class_probs;
};

bool given(CLI::App* app, const char* name) {
    const auto* opt = app->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

RunConfig resolve(CLI::App* app, const Flags& f) {
    RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (given(app, "--k")) cfg.ensemble.k = f.k;
    if (given(app, "--n")) cfg.ensemble.n = f.n;
    if (given(app, "--advantage")) cfg.ensemble.advantage = f.advantage;
    if (given(app, "--tie-policy")) cfg.ensemble.tie_policy = f.tie_policy;
    if (given(app, "--rule")) cfg.ensemble.rule = f.rule;
    if (given(app, "--rho")) cfg.ensemble.rho = f.rho;
    if (given(app, "--n-grid")) cfg.grids.n_grid = parse_list<std::size_t>(f.n_grid, "--n-grid");
    if (given(app, "--rho-grid")) cfg.grids.rho_grid = parse_list<double>(f.rho_grid, "--rho-grid");
    if (given(app, "--trials")) cfg.mc.trials = f.trials;
    if (given(app, "--seed")) cfg.mc.seed = f.seed;
    if (given(app, "--input")) cfg.io.input = f.input;
    if (given(app, "--out")) cfg.io.output = f.out;
    if (given(app, "--labels")) cfg.labels = parse_names(f.labels);
    if (given(app, "--tolerance")) cfg.diagnose.tolerance = f.tolerance;
    if (given(app, "--alpha")) cfg.diagnose.alpha = f.alpha;
    if (given(app, "--bootstrap")) cfg.diagnose.bootstrap = f.bootstrap;
    if (given(app, "--permutations")) cfg.diagnose.permutations = f.permutations;
    if (given(app, "--margin")) cfg.diagnose.margin = f.margin;
    return cfg;
}

VoteRule rule_or(const RunConfig& cfg, VoteRule fallback) {
    return cfg.ensemble.rule.empty() ? fallback : parse_vote_rule(cfg.ensemble.rule);
}

void cmd_exact(CLI::App* app, const Flags& f, std::ostream& out) {
    const RunConfig cfg = resolve(app, f);
    validate_for_exact(cfg);
    const int k = cfg.ensemble.k;
    const auto seq = AdvantageSequence::parse(cfg.ensemble.advantage);
    const auto advantages = seq.take(cfg.ensemble.n, k);
    const auto rule = rule_or(cfg, VoteRule::plurality);
    const auto policy = parse_tie_policy(cfg.ensemble.tie_policy);

    double accuracy = 0.0;
    if (rule == VoteRule::plurality) {
        try {
            accuracy = exact_plurality_accuracy(k, advantages, policy, f.state_cap);
        } catch (const ResourceError& e) {
            throw ResourceError(std::string(e.what()) + " (try the 'simulate' subcommand)");
        }
    } else {
        accuracy = exact_score_threshold_accuracy(k, advantages);
    }
    double single = 0.0;
    for (double a : advantages) single = std::max(single, single_classifier_accuracy(k, a));

    out << "rule              " << to_string(rule) << '\n'
        << "tie policy        " << to_string(policy) << '\n'
        << "k                 " << k << '\n'
        << "n                 " << cfg.ensemble.n << '\n'
        << "advantage         " << seq.describe() << '\n'
        << "exact accuracy    " << fixed5(accuracy) << '\n'
        << "single baseline   " << fixed5(single) << '\n'
        << "difference        " << fixed5(accuracy - single) << '\n';

    if (!cfg.io.output.empty()) {
        std::ostringstream csv;
        csv << "k,n,rule,tie_policy,accuracy,single_accuracy,difference\n"
            << k << ',' << cfg.ensemble.n << ',' << to_string(rule) << ',' << to_string(policy) << ','
            << format_double(accuracy) << ',' << format_double(single) << ','
            << format_double(accuracy - single) << '\n';
        write_output(cfg.io.output, csv.str(), out);
    }
}

void cmd_simulate(CLI::App* app, const Flags& f, std::ostream& out) {
    const RunConfig cfg = resolve(app, f);
    validate_for_simulate(cfg);
    const auto n_grid = cfg.grids.n_grid.empty() ? std::vector<std::size_t>{cfg.ensemble.n} : cfg.grids.n_grid;
    const auto rho_grid = cfg.grids.rho_grid.empty() ? std::vector<double>{cfg.ensemble.rho} : cfg.grids.rho_grid;

    std::ostringstream csv;
    csv << "n,rho,estimate,stderr\n";
    for (std::size_t n : n_grid) {
        for (double rho : rho_grid) {
            EnsembleSpec spec;
            spec.k = cfg.ensemble.k;
            spec.n = n;
            spec.advantages = AdvantageSequence::parse(cfg.ensemble.advantage);
            spec.dependence.rho = rho;
            spec.tie_policy = parse_tie_policy(cfg.ensemble.tie_policy);
            spec.rule = rule_or(cfg, VoteRule::plurality);
            const auto est = mc_accuracy(spec, cfg.mc.trials, cfg.mc.seed);
            csv << n << ',' << format_double(rho) << ',' << format_double(est.estimate) << ','
                << format_double(est.std_error) << '\n';
        }
    }
    write_output(cfg.io.output, csv.str(), out);
}

void cmd_convergence(CLI::App* app, const Flags& f, std::ostream& out) {
    const RunConfig cfg = resolve(app, f);
    validate_for_convergence(cfg);
    const auto curve = convergence_experiment(
        cfg.ensemble.k, AdvantageSequence::parse(cfg.ensemble.advantage), cfg.grids.n_grid,
        rule_or(cfg, VoteRule::score_threshold), cfg.mc.trials, cfg.mc.seed,
        parse_tie_policy(cfg.ensemble.tie_policy));
    std::ostringstream csv;
    csv << "n,estimate,stderr,drift\n";
    for (const auto& row : curve.rows)
        csv << row.n << ',' << format_double(row.estimate) << ',' << format_double(row.std_error) << ','
            << format_double(row.drift) << '\n';
    write_output(cfg.io.output, csv.str(), out);
}

Dataset load_dataset(const RunConfig& cfg) {
    if (cfg.io.input.empty()) throw ConfigError("io.input", "an input predictions file is required");
    LabelSpace labels = [&] {
        try {
            return make_label_space(cfg.labels);
        } catch (const DomainError& e) {
            throw ConfigError("labels.names", e.what());
        }
    }();
    return read_predictions(cfg.io.input, labels);
}

void cmd_metrics(CLI::App* app, const Flags& f, std::ostream& out) {
    const RunConfig cfg = resolve(app, f);
    const auto policy = parse_tie_policy(cfg.ensemble.tie_policy);
    const Dataset data = load_dataset(cfg);
    if (data.size() == 0) throw DomainError("dataset has no records");
    const auto chosen = data.model_indices(parse_names(f.models));
    const auto truth = data.truth_column();

    struct Row {
        std::string name;
        MetricsReport report;
    };
    std::vector<Row> rows;
    for (std::size_t m : chosen) {
        const auto col = data.prediction_column(m);
        for (std::size_t r = 0; r < col.size(); ++r)
            if (col[r] == kMissing)
                throw DomainError("record '" + data.records()[r].id + "' has no prediction for model '" +
                                  data.models()[m] + "'");
        rows.push_back({data.models()[m], metrics_report(confusion_matrix(truth, col, data.classes()))});
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].report.macro_f1 > rows[best].report.macro_f1) best = i;
    const auto bagged = ensemble_predictions(data, std::span<const std::size_t>(chosen), policy, cfg.mc.seed);
    rows.push_back({"bagging", metrics_report(confusion_matrix(truth, bagged, data.classes()))});
    const auto delta = bagging_delta(rows.back().report, rows[best].report);

    out << std::left << std::setw(24) << "model" << std::setw(10) << "accuracy" << std::setw(10) << "f1"
        << std::setw(11) << "precision" << std::setw(10) << "recall" << "abstain\n";
    for (const auto& r : rows)
        out << std::setw(24) << r.name << std::setw(10) << fixed5(r.report.accuracy) << std::setw(10)
            << fixed5(r.report.macro_f1) << std::setw(11) << fixed5(r.report.macro_precision) << std::setw(10)
            << fixed5(r.report.macro_recall) << fixed5(r.report.abstention_rate) << '\n';
    const auto d = delta.rounded();
    out << "bagging vs " << rows[best].name << " (macro averages): dF1 " << fixed2(d.f1) << "  dPrecision "
        << fixed2(d.precision) << "  dRecall " << fixed2(d.recall) << '\n';

    if (!cfg.io.output.empty()) {
        std::ostringstream csv;
        csv << "name,accuracy,macro_precision,macro_recall,macro_f1,abstention_rate\n";
        for (const auto& r : rows)
            csv << csv_field(r.name) << ',' << format_double(r.report.accuracy) << ','
                << format_double(r.report.macro_precision) << ',' << format_double(r.report.macro_recall) << ','
                << format_double(r.report.macro_f1) << ',' << format_double(r.report.abstention_rate) << '\n';
        const auto& b = rows.back().report;
        const auto& s = rows[best].report;
        csv << csv_field("delta_vs_" + rows[best].name) << ',' << format_double(b.accuracy - s.accuracy) << ','
            << format_double(delta.precision) << ',' << format_double(delta.recall) << ','
            << format_double(delta.f1) << ',' << format_double(b.abstention_rate - s.abstention_rate) << '\n';
        write_output(cfg.io.output, csv.str(), out);
    }
}

nlohmann::json report_json(const DiagnosticReport& r) {
    using nlohmann::json;
    json models = json::array();
    for (const auto& s : r.conditions.models)
        models.push_back({{"model", s.model},
                          {"accuracy", s.accuracy},
                          {"binomial_p_value", s.binomial_p_value},
                          {"better_than_random", s.better_than_random},
                          {"chi_square", s.chi_square},
                          {"chi_square_dof", s.chi_square_dof},
                          {"chi_square_p_value", s.chi_square_p_value},
                          {"max_wrong_rate", s.max_wrong_rate},
                          {"uniform_errors", s.uniform_errors}});
    const auto& ind = r.independence;
    return json{
        {"records", r.records},
        {"classes", r.classes},
        {"models", r.models},
        {"condition1_identical", {{"pass", r.conditions.identical}, {"max_tv_distance", r.conditions.max_tv_distance}}},
        {"condition2_better_than_random", {{"pass", r.conditions.better_than_random}}},
        {"condition3_uniform_errors", {{"pass", r.conditions.uniform_errors}}},
        {"per_model", models},
        {"independence",
         {{"predicted_accuracy_parametric", ind.predicted_accuracy_parametric},
          {"fitted_advantages", ind.fitted_advantages},
          {"predicted_accuracy_permutation",
           {{"mean", ind.permutation_mean}, {"ci_lower", ind.permutation_ci.lower}, {"ci_upper", ind.permutation_ci.upper}}},
          {"observed_ensemble_accuracy", ind.observed_ensemble_accuracy},
          {"observed_ci", {{"lower", ind.observed_ci.lower}, {"upper", ind.observed_ci.upper}}},
          {"gap", ind.gap},
          {"verdict", std::string(to_string(ind.verdict))}}}};
}

void cmd_diagnose(CLI::App* app, const Flags& f, std::ostream& out) {
    const RunConfig cfg = resolve(app, f);
    validate_for_diagnose(cfg);
    auto options = diagnose_options(cfg);
    options.min_records = f.min_records;
    const Dataset data = load_dataset(cfg);
    const auto models = parse_names(f.models);
    const auto report = diagnose(data, models, options);

    const auto pass = [](bool b) { return b ? "pass" : "FAIL"; };
    const auto& c = report.conditions;
    out << "records " << report.records << ", classes " << report.classes << ", models " << report.models.size()
        << '\n'
        << "condition 1 identical distribution     " << pass(c.identical) << "  (max TV " << fixed5(c.max_tv_distance)
        << ")\n"
        << "condition 2 better than random         " << pass(c.better_than_random) << '\n'
        << "condition 3 uniform incorrect labels   " << pass(c.uniform_errors) << '\n';
    for (const auto& s : c.models)
        out << "  " << std::left << std::setw(22) << s.model << " acc " << fixed5(s.accuracy) << "  binom p "
            << std::setprecision(3) << std::scientific << s.binomial_p_value << std::defaultfloat << "  chi2 "
            << fixed5(s.chi_square) << " (dof " << s.chi_square_dof << ", p " << fixed5(s.chi_square_p_value)
            << ")\n";
    const auto& ind = report.independence;
    out << "independence\n"
        << "  predicted (parametric)    " << fixed5(ind.predicted_accuracy_parametric) << '\n'
        << "  predicted (permutation)   " << fixed5(ind.permutation_mean) << "  CI [" << fixed5(ind.permutation_ci.lower)
        << ", " << fixed5(ind.permutation_ci.upper) << "]\n"
        << "  observed ensemble         " << fixed5(ind.observed_ensemble_accuracy) << '\n'
        << "  gap                       " << fixed5(ind.gap) << '\n'
        << "  verdict                   " << to_string(ind.verdict) << '\n';

    if (!cfg.io.output.empty()) write_output(cfg.io.output, report_json(report).dump(2) + "\n", out);
}

std::vector<SyntheticModel> parse_models(std::string_view text, int k) {
    std::vector<SyntheticModel> models;
    std::size_t index = 0;
    for (auto item : detail::split(text, ',')) {
        ++index;
        SyntheticModel m;
        m.name = "model_" + std::to_string(index);
        auto spec = item;
        if (auto colon = item.find(':'); colon != std::string_view::npos) {
            m.name = std::string(detail::trim(item.substr(0, colon)));
            spec = detail::trim(item.substr(colon + 1));
        }
        const auto eq = spec.find('=');
        const auto key = eq == std::string_view::npos ? std::string_view{} : spec.substr(0, eq);
        const auto value = eq == std::string_view::npos ? std::optional<double>{} : detail::parse_double(spec.substr(eq + 1));
        if (!value || (key != "a" && key != "acc"))
            throw ConfigError("--models", "expected [name:]a=<advantage> or [name:]acc=<accuracy>, got '" +
                                              std::string(item) + "'");
        m.advantage = key == "a" ? *value : *value - 1.0 / k;
        try {
            check_advantage(k, m.advantage);
        } catch (const DomainError& e) {
            throw ConfigError("--models", e.what());
        }
        models.push_back(std::move(m));
    }
    return models;
}

void cmd_generate(CLI::App* app, const Flags& f, std::ostream& out) {
    const RunConfig cfg = resolve(app, f);
    SyntheticOptions opt;
    try {
        opt.labels = make_label_space(cfg.labels);
    } catch (const DomainError& e) {
        throw ConfigError("labels.names", e.what());
    }
    const int k = opt.labels.size();
    if (given(app, "--class-probs")) {
        opt.class_probs = parse_list<double>(f.class_probs, "--class-probs");
    } else if (k != 3) {
        opt.class_probs.assign(static_cast<std::size_t>(k), 1.0 / k);
    }
    if (!given(app, "--models")) throw ConfigError("--models", "required");
    opt.models = parse_models(f.models, k);
    opt.rho = cfg.ensemble.rho;
    if (!(opt.rho >= 0.0 && opt.rho <= 1.0)) throw ConfigError("ensemble.rho", "must lie in [0, 1]");
    opt.rows = f.rows;
    opt.seed = cfg.mc.seed;
    if (cfg.io.output.empty()) throw ConfigError("io.output", "an --out path is required");

    const Dataset data = generate_synthetic(opt);
    std::ostringstream buf;
    write_predictions(buf, data);
    write_output(cfg.io.output, buf.str(), out);
    out << "wrote " << data.size() << " rows, " << data.models().size() << " models to " << cfg.io.output << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Majority-vote ensemble accuracy, convergence experiments and independence diagnostics"};
    app.require_subcommand(1);
    Flags f;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON run configuration");
    };
    auto add_ensemble = [&](CLI::App* sub) {
        sub->add_option("--k", f.k, "number of classes");
        sub->add_option("--advantage", f.advantage, "advantage: 0.1 | const:0.1 | log | power:ALPHA | list:a1,a2,...");
        sub->add_option("--tie-policy", f.tie_policy, "uniform-random | strict-fail | lowest-index");
        sub->add_option("--rule", f.rule, "plurality | score-threshold");
    };
    auto add_mc = [&](CLI::App* sub) {
        sub->add_option("--trials", f.trials, "Monte Carlo trials per grid point");
        sub->add_option("--seed", f.seed, "random seed");
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", f.out, "output file"); };

    auto* exact = app.add_subcommand("exact", "exact ensemble accuracy for independent classifiers");
    add_config(exact);
    add_ensemble(exact);
    exact->add_option("--n", f.n, "number of classifiers");
    exact->add_option("--state-cap", f.state_cap, "maximum count vectors before refusing");
    add_out(exact);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo accuracy over n and rho grids");
    add_config(simulate);
    add_ensemble(simulate);
    simulate->add_option("--n", f.n, "number of classifiers when no grid is given");
    simulate->add_option("--rho", f.rho, "common-cause dependence when no grid is given");
    simulate->add_option("--n-grid", f.n_grid, "comma-separated ensemble sizes");
    simulate->add_option("--rho-grid", f.rho_grid, "comma-separated dependence levels");
    add_mc(simulate);
    add_out(simulate);

    auto* convergence = app.add_subcommand("convergence", "accuracy and drift along an ensemble-size grid");
    add_config(convergence);
    add_ensemble(convergence);
    convergence->add_option("--n-grid", f.n_grid, "comma-separated strictly increasing ensemble sizes");
    add_mc(convergence);
    add_out(convergence);

    auto* metrics = app.add_subcommand("metrics", "per-model and bagged metrics for a predictions file");
    add_config(metrics);
    metrics->add_option("--input", f.input, "predictions CSV");
    metrics->add_option("--labels", f.labels, "comma-separated label names");
    metrics->add_option("--models", f.models, "comma-separated models to bag (default all)");
    metrics->add_option("--tie-policy", f.tie_policy, "uniform-random | strict-fail | lowest-index");
    metrics->add_option("--seed", f.seed, "tie-break seed");
    add_out(metrics);

    auto* diag = app.add_subcommand("diagnose", "condition checks and independence test");
    add_config(diag);
    diag->add_option("--input", f.input, "predictions CSV");
    diag->add_option("--labels", f.labels, "comma-separated label names");
    diag->add_option("--models", f.models, "comma-separated models (default all)");
    diag->add_option("--tie-policy", f.tie_policy, "uniform-random | strict-fail | lowest-index");
    diag->add_option("--tolerance", f.tolerance, "max TV distance for identical distribution");
    diag->add_option("--alpha", f.alpha, "test level");
    diag->add_option("--bootstrap", f.bootstrap, "bootstrap replicates for the observed accuracy CI");
    diag->add_option("--permutations", f.permutations, "stratified permutation replicates (>= 100)");
    diag->add_option("--margin", f.margin, "accuracy margin below the parametric baseline");
    diag->add_option("--min-records", f.min_records, "minimum record count");
    diag->add_option("--seed", f.seed, "random seed");
    add_out(diag);

    auto* generate = app.add_subcommand("generate", "synthetic prediction dataset");
    add_config(generate);
    generate->add_option("--rows", f.rows, "number of rows")->required();
    generate->add_option("--models", f.models, "comma-separated [name:]a=ADV or [name:]acc=ACC");
    generate->add_option("--rho", f.rho, "common-cause dependence");
    generate->add_option("--class-probs", f.class_probs, "comma-separated class prevalences");
    generate->add_option("--labels", f.labels, "comma-separated label names");
    generate->add_option("--seed", f.seed, "random seed");
    add_out(generate);

    std::vector<std::string> argv_store{"condorcet"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }

    try {
        if (*exact) cmd_exact(exact, f, out);
        else if (*simulate) cmd_simulate(simulate, f, out);
        else if (*convergence) cmd_convergence(convergence, f, out);
        else if (*metrics) cmd_metrics(metrics, f, out);
        else if (*diag) cmd_diagnose(diag, f, out);
        else if (*generate) cmd_generate(generate, f, out);
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kResourceCap;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }
    return kOk;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace condorcet::cli
