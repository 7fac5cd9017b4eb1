#include "condorcet/cli.hpp"
#include "condorcet/config.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace condorcet;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("condorcet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ExactExamples) {
    auto r = run_cli({"exact", "--k", "3", "--n", "3", "--advantage", "0.1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("exact accuracy    0.47017"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("single baseline   0.43333"), std::string::npos);
    EXPECT_NE(r.out.find("uniform-random"), std::string::npos);
    r = run_cli({"exact", "--k", "3", "--n", "1", "--advantage", "0.1"});
    EXPECT_NE(r.out.find("exact accuracy    0.43333"), std::string::npos);
    r = run_cli({"exact", "--k", "2", "--n", "3", "--advantage", "0.1", "--out", path("e.csv")});
    EXPECT_NE(r.out.find("exact accuracy    0.64800"), std::string::npos);
    EXPECT_EQ(slurp(path("e.csv")),
              "k,n,rule,tie_policy,accuracy,single_accuracy,difference\n"
              "2,3,plurality,uniform-random,0.6479999999999999,0.6,0.04799999999999993\n");
}

TEST_F(CliTest, ExactStateCap) {
    const auto r = run_cli({"exact", "--k", "10", "--n", "200", "--advantage", "0.1"});
    EXPECT_EQ(r.code, cli::kResourceCap);
    EXPECT_NE(r.err.find("simulate"), std::string::npos);
}

TEST_F(CliTest, ValidationErrors) {
    EXPECT_EQ(run_cli({}).code, cli::kValidationError);
    EXPECT_EQ(run_cli({"exact", "--k", "3", "--advantage", "0.9"}).code, cli::kValidationError);
    EXPECT_EQ(run_cli({"exact", "--bogus"}).code, cli::kValidationError);
    auto r = run_cli({"simulate", "--trials", "0"});
    EXPECT_EQ(r.code, cli::kValidationError);
    EXPECT_NE(r.err.find("mc.trials"), std::string::npos) << r.err;
    r = run_cli({"simulate", "--advantage", "log", "--rho", "0.5"});
    EXPECT_EQ(r.code, cli::kValidationError);
    r = run_cli({"convergence", "--n-grid", "10,5"});
    EXPECT_NE(r.err.find("grids.n_grid"), std::string::npos) << r.err;
    EXPECT_EQ(run_cli({"convergence"}).code, cli::kValidationError);
    EXPECT_EQ(run_cli({"diagnose", "--input", path("x.csv"), "--permutations", "50"}).code,
              cli::kValidationError);
}

TEST_F(CliTest, IoErrors) {
    EXPECT_EQ(run_cli({"metrics", "--input", path("missing.csv")}).code, cli::kIoError);
    EXPECT_EQ(run_cli({"exact", "--config", path("missing.json")}).code, cli::kIoError);
    EXPECT_EQ(run_cli({"exact", "--out", path("no/such/dir/x.csv")}).code, cli::kIoError);
}

TEST_F(CliTest, ConfigFileAndOverrides) {
    write("c.json", R"({"ensemble": {"k": 2, "n": 3, "advantage": 0.1}, "mc": {"seed": 4}})");
    auto r = run_cli({"exact", "--config", path("c.json")});
    EXPECT_NE(r.out.find("0.64800"), std::string::npos) << r.err;
    r = run_cli({"exact", "--config", path("c.json"), "--n", "1"});
    EXPECT_NE(r.out.find("exact accuracy    0.60000"), std::string::npos);
    write("bad.json", R"({"ensemble": {"kk": 2}})");
    r = run_cli({"exact", "--config", path("bad.json")});
    EXPECT_EQ(r.code, cli::kValidationError);
    EXPECT_NE(r.err.find("ensemble.kk"), std::string::npos);
    write("type.json", R"({"mc": {"trials": "many"}})");
    r = run_cli({"simulate", "--config", path("type.json")});
    EXPECT_NE(r.err.find("mc.trials"), std::string::npos);
}

TEST(Config, ParseAndValidate) {
    const auto cfg = parse_config(R"({"labels": {"names": ["a", "b"]}, "grids": {"n_grid": [1, 3], "rho_grid": [0, 0.5]},
        "diagnose": {"alpha": 0.05, "permutations": 300}, "io": {"input": "x.csv"}})");
    EXPECT_EQ(cfg.labels, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(cfg.grids.n_grid, (std::vector<std::size_t>{1, 3}));
    EXPECT_EQ(cfg.diagnose.permutations, 300u);
    EXPECT_EQ(diagnose_options(cfg).alpha, 0.05);
    EXPECT_THROW(parse_config("{"), ConfigError);
    EXPECT_THROW(parse_config(R"({"mc": {"seed": -1}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"grids": {"n_grid": [1, -2]}})"), ConfigError);
    RunConfig bad;
    bad.ensemble.rho = 2;
    EXPECT_THROW(validate_for_simulate(bad), ConfigError);
    bad = RunConfig{};
    bad.ensemble.tie_policy = "coin";
    try {
        validate_for_exact(bad);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("ensemble.tie_policy"), std::string::npos);
    }
}

TEST_F(CliTest, SimulateEndpoints) {
    const auto r = run_cli({"simulate", "--k", "3", "--n", "3", "--advantage", "0.1", "--rho-grid", "0,1",
                            "--trials", "200000", "--seed", "5", "--out", path("s.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream csv(slurp(path("s.csv")));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "n,rho,estimate,stderr");
    const double targets[] = {0.470167, 13.0 / 30};
    for (double target : targets) {
        ASSERT_TRUE(std::getline(csv, line));
        std::istringstream row(line);
        std::string n, rho, est, se;
        std::getline(row, n, ',');
        std::getline(row, rho, ',');
        std::getline(row, est, ',');
        std::getline(row, se, ',');
        EXPECT_LT(std::abs(std::stod(est) - target), 4 * std::stod(se)) << line;
    }
}

TEST_F(CliTest, ConvergenceCsv) {
    const auto r = run_cli({"convergence", "--k", "3", "--advantage", "0.1", "--n-grid", "1,11,101", "--trials",
                            "20000", "--out", path("c.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream csv(slurp(path("c.csv")));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "n,estimate,stderr,drift");
    std::getline(csv, line);
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "0.1");
}

TEST_F(CliTest, GenerateMetricsDiagnose) {
    auto r = run_cli({"generate", "--rows", "10000", "--models", "a=0.2,a=0.2,a=0.2", "--rho", "0", "--seed", "3",
                      "--out", path("g.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(path("g.csv")).substr(0, 40).find("id,true_label,model_1,model_2,model_3"), 0u);

    r = run_cli({"metrics", "--input", path("g.csv"), "--out", path("m.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("bagging vs"), std::string::npos);
    std::istringstream csv(slurp(path("m.csv")));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "name,accuracy,macro_precision,macro_recall,macro_f1,abstention_rate");
    const double p = 1.0 / 3 + 0.2;
    for (int m = 0; m < 3; ++m) {
        std::getline(csv, line);
        const auto acc = std::stod(line.substr(line.find(',') + 1));
        EXPECT_LT(std::abs(acc - p), 4 * std::sqrt(p * (1 - p) / 10000)) << line;
    }
    std::getline(csv, line);
    EXPECT_EQ(line.rfind("bagging,", 0), 0u);
    std::getline(csv, line);
    EXPECT_EQ(line.rfind("delta_vs_model_", 0), 0u);

    r = run_cli({"diagnose", "--input", path("g.csv"), "--out", path("d.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("verdict                   consistent"), std::string::npos) << r.out;
    const auto j = nlohmann::json::parse(slurp(path("d.json")));
    EXPECT_EQ(j["independence"]["verdict"], "consistent");
    EXPECT_TRUE(j["condition1_identical"]["pass"].get<bool>());

    r = run_cli({"generate", "--rows", "10000", "--models", "a=0.2,a=0.2,a=0.2", "--rho", "1", "--seed", "3",
                 "--out", path("g1.csv")});
    r = run_cli({"diagnose", "--input", path("g1.csv")});
    EXPECT_NE(r.out.find("verdict                   rejected"), std::string::npos) << r.out;
}

TEST_F(CliTest, GenerateOptions) {
    auto r = run_cli({"generate", "--rows", "100", "--models", "good:acc=0.9,bad:a=0", "--labels", "x,y",
                      "--out", path("g.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(path("g.csv")).substr(0, 24), "id,true_label,good,bad\n1");
    EXPECT_EQ(run_cli({"generate", "--rows", "10", "--models", "a=0.9", "--out", path("x.csv")}).code,
              cli::kValidationError);
    EXPECT_EQ(run_cli({"generate", "--rows", "10", "--models", "z=0.1", "--out", path("x.csv")}).code,
              cli::kValidationError);
    EXPECT_EQ(run_cli({"generate", "--rows", "10", "--models", "a=0.1"}).code, cli::kValidationError);
    EXPECT_EQ(run_cli({"generate", "--rows", "10", "--models", "a=0.1", "--class-probs", "0.5,0.6,0.1", "--out",
                       path("x.csv")})
                  .code,
              cli::kValidationError);
}

TEST_F(CliTest, MetricsSchemaErrorNamesLine) {
    write("p.csv", "id,true_label,m1,m2\n1,Positive,Positive,Neutral\n2,Bullish,Positive,Neutral\n");
    const auto r = run_cli({"metrics", "--input", path("p.csv")});
    EXPECT_EQ(r.code, cli::kValidationError);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, RepeatRunsAreByteIdentical) {
    for (const char* workers : {"1", "3"}) {
        setenv("CONDORCET_WORKERS", workers, 1);
        const std::string tag = workers;
        run_cli({"generate", "--rows", "3000", "--models", "a=0.2,a=0.1,a=0.3", "--rho", "0.4", "--seed", "8",
                 "--out", path("g" + tag + ".csv")});
        run_cli({"simulate", "--n-grid", "3,5", "--rho-grid", "0,0.5", "--trials", "20000", "--seed", "8",
                 "--out", path("s" + tag + ".csv")});
        run_cli({"diagnose", "--input", path("g1.csv"), "--seed", "8", "--out", path("d" + tag + ".json")});
        run_cli({"metrics", "--input", path("g1.csv"), "--seed", "8", "--out", path("m" + tag + ".csv")});
    }
    unsetenv("CONDORCET_WORKERS");
    for (const char* f : {"g", "s", "d", "m"}) {
        const auto a = slurp(path(std::string(f) + "1" + (f[0] == 'd' ? ".json" : ".csv")));
        const auto b = slurp(path(std::string(f) + "3" + (f[0] == 'd' ? ".json" : ".csv")));
        EXPECT_FALSE(a.empty()) << f;
        EXPECT_EQ(a, b) << f;
    }
}

TEST_F(CliTest, BinaryExitCodes) {
    const char* bin = std::getenv("CONDORCET_BIN");
    if (!bin) GTEST_SKIP() << "CONDORCET_BIN not set";
    const std::string b = bin;
    auto code = [](const std::string& cmd) {
        const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    EXPECT_EQ(code(b + " exact --k 3 --n 3 --advantage 0.1"), 0);
    EXPECT_EQ(code(b + " exact --k 3 --n 3 --advantage 2"), 1);
    EXPECT_EQ(code(b + " exact --k 10 --n 200 --advantage 0.1"), 2);
    EXPECT_EQ(code(b + " metrics --input " + path("none.csv")), 3);
}
