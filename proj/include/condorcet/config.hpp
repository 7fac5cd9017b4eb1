#pragma once
// Run configuration: a JSON document with sections labels, ensemble, mc,
// grids, diagnose and io. Unknown keys are rejected; errors name the field
// path (e.g. "mc.trials: must be >= 1").

#include "condorcet/core.hpp"
#include "condorcet/diagnose.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace condorcet {

struct RunConfig {
    struct Ensemble {
        int k = 3;
        std::size_t n = 3;
        std::string advantage = "0.1";
        double rho = 0.0;
        std::string tie_policy = "uniform-random";
        /// Empty selects the command default: plurality, except score-threshold
        /// for convergence runs.
        std::string rule;
    };
    struct MonteCarlo {
        std::uint64_t trials = 100'000;
        std::uint64_t seed = 0;
    };
    struct Grids {
        std::vector<std::size_t> n_grid;
        std::vector<double> rho_grid;
    };
    struct Diagnose {
        double tolerance = 0.05;
        double alpha = 0.01;
        std::size_t bootstrap = 200;
        std::size_t permutations = 200;
        double margin = 0.01;
    };
    struct Io {
        std::string input;
        std::string output;
    };

    std::vector<std::string> labels;
    Ensemble ensemble;
    MonteCarlo mc;
    Grids grids;
    Diagnose diagnose;
    Io io;
};

/// Configuration or flag value fails validation.
class ConfigError : public DomainError {
public:
    ConfigError(std::string_view field, std::string_view what)
        : DomainError(std::string(field) + ": " + std::string(what)) {}
};

RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Label space for the given names; empty means Negative/Neutral/Positive.
/// "Indecisive" is accepted for "Neutral" whenever Neutral is a label.
LabelSpace make_label_space(const std::vector<std::string>& names);

/// Checks every field a command consumes before any computation runs.
void validate_for_exact(const RunConfig& config);
void validate_for_simulate(const RunConfig& config);
void validate_for_convergence(const RunConfig& config);
void validate_for_diagnose(const RunConfig& config);

DiagnoseOptions diagnose_options(const RunConfig& config);

}  // namespace condorcet
