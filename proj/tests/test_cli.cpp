#include "app.hpp"
#include "metdich/generators.hpp"
#include "metdich/io.hpp"
#include "metdich/trees.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace metdich;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        root_ = fs::temp_directory_path() / (std::string("metdich_cli_") + info->name());
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    void TearDown() override { fs::remove_all(root_); }

    int run(json config, const std::string& sub = "out") {
        config["output_dir"] = (root_ / sub).string();
        std::ostringstream log;
        const int code = app::run(config, log);
        log_ = log.str();
        return code;
    }

    std::string read(const std::string& name, const std::string& sub = "out") const {
        std::ifstream in(root_ / sub / name);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    static std::vector<std::vector<std::string>> rows(const std::string& csv) {
        std::vector<std::vector<std::string>> out;
        std::istringstream in(csv);
        std::string line;
        while (std::getline(in, line)) {
            std::vector<std::string> cells;
            std::string cell;
            bool quoted = false;
            for (char c : line) {
                if (c == '"') {
                    quoted = !quoted;
                } else if (c == ',' && !quoted) {
                    cells.push_back(cell);
                    cell.clear();
                } else {
                    cell += c;
                }
            }
            cells.push_back(cell);
            out.push_back(cells);
        }
        return out;
    }

    fs::path root_;
    std::string log_;
};

int shell(const std::string& command) {
    const int status = std::system((command + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_F(Cli, PsiOnUltrametricHost) {
    ASSERT_EQ(run({{"command", "invariant"}, {"kind", "psi"}, {"host", "ultrametric-host:depth=4"},
                   {"n_list", {2, 4, 8}}}),
              0)
        << log_;
    const auto r = rows(read("results.csv"));
    ASSERT_EQ(r.size(), 4u);
    EXPECT_EQ(r[0][0], "kind");
    EXPECT_EQ(r[1][3], "0.5");
    EXPECT_EQ(r[2][3], "0.25");
    EXPECT_EQ(r[3][3], "0.125");
    EXPECT_TRUE(fs::exists(root_ / "out" / "plot.svg"));
    const auto manifest = json::parse(read("manifest.json"));
    EXPECT_EQ(manifest["predicate_table"], kPredicateTableVersion);
    EXPECT_EQ(manifest["version"], app::kVersion);
    EXPECT_EQ(manifest["outputs"]["results.csv"], hex_digest(fnv1a(read("results.csv"))));
}

TEST_F(Cli, GenWritesPath) {
    ASSERT_EQ(run({{"command", "gen"}, {"family", {{"kind", "path"}, {"n", 4}}}}), 0) << log_;
    const auto x = parse_metric(read("metric.txt"));
    EXPECT_EQ(x(0, 4), 4.0);
}

TEST_F(Cli, DichotomyFit) {
    ASSERT_EQ(run({{"command", "dichotomy-fit"}, {"n0", 2}, {"eta", 0.5}}), 0) << log_;
    const auto manifest = json::parse(read("manifest.json"));
    EXPECT_EQ(manifest["summary"]["beta"], 1.0);
}

TEST_F(Cli, SweepOfPathsGivesDN) {
    const json grid = {{"family", "path"}, {"n", {2, 4, 8}}, {"hosts", {"ultrametric-host:depth=4"}}};
    ASSERT_EQ(run({{"command", "sweep"}, {"grid", grid}}), 0) << log_;
    const auto r = rows(read("results.csv"));
    ASSERT_EQ(r.size(), 4u);
    EXPECT_EQ(r[0].back(), "D_N");
    EXPECT_NEAR(std::stod(r[1].back()), 2.0, 1e-6);
    EXPECT_NEAR(std::stod(r[2].back()), 4.0, 1e-6);
    EXPECT_NEAR(std::stod(r[3].back()), 8.0, 1e-6);
}

TEST_F(Cli, SingleCellSweepMatchesDirectRun) {
    const json domain = "path:n=3", host = "ultrametric-host:depth=3";
    ASSERT_EQ(run({{"command", "distortion"}, {"domain", domain}, {"host", host}}, "direct"), 0) << log_;
    ASSERT_EQ(run({{"command", "sweep"}, {"cells", {{{"domain", domain}, {"host", host}}}}}, "sweep"), 0) << log_;
    const auto direct = rows(read("results.csv", "direct"));
    const auto sweep = rows(read("results.csv", "sweep"));
    ASSERT_EQ(direct.size(), 2u);
    ASSERT_EQ(sweep.size(), 2u);
    EXPECT_EQ(sweep[1][0], direct[1][0]);
    EXPECT_EQ(sweep[1][1], direct[1][1]);
    EXPECT_EQ(sweep[1][3], direct[1][2]);
    EXPECT_EQ(sweep[1][4], direct[1][3]);
    EXPECT_EQ(sweep[1][5], direct[1][4]);
    EXPECT_EQ(sweep[1].back(), direct[1][2]);
}

TEST_F(Cli, EmptyGridWritesHeaderOnly) {
    ASSERT_EQ(run({{"command", "sweep"}, {"cells", json::array()}}), 0) << log_;
    EXPECT_EQ(read("results.csv"), "domain,host,N,lower,upper,certificate,complete,status,D_N\n");
}

TEST_F(Cli, SweepRecordsFailedCells) {
    const json cells = {{{"domain", "path:n=9"}, {"host", "path:n=2"}}, {{"domain", "path:n=2"}, {"host", "path:n=2"}}};
    ASSERT_EQ(run({{"command", "sweep"}, {"cells", cells}}), 0) << log_;
    const auto r = rows(read("results.csv"));
    ASSERT_EQ(r.size(), 3u);
    int errors = 0;
    for (std::size_t i = 1; i < r.size(); ++i) errors += r[i][7].rfind("error", 0) == 0;
    EXPECT_EQ(errors, 1);
}

TEST_F(Cli, WitnessRevalidates) {
    ASSERT_EQ(run({{"command", "distortion"}, {"domain", "path:n=3"}, {"host", "ultrametric-host:depth=2"}}), 0)
        << log_;
    const auto r = rows(read("results.csv"));
    std::istringstream w(read("witness.txt"));
    const auto domain = metdich::path(3);
    const auto host = ultrametric_host(2);
    std::vector<Index> f;
    std::string a, b;
    while (w >> a >> b) f.push_back(host.find(b));
    EXPECT_EQ(witness_hash(f), r[1][7]);
    EXPECT_EQ(format_real(distortion(Embedding(domain, host, f))), r[1][3]);
}

TEST_F(Cli, ByteIdenticalReruns) {
    const json cfg = {{"command", "forks"}, {"space", "heta:depth=3,eta=0.2"}, {"delta", 0.05}};
    ASSERT_EQ(run(cfg, "a"), 0) << log_;
    ASSERT_EQ(run(cfg, "b"), 0) << log_;
    EXPECT_EQ(read("results.csv", "a"), read("results.csv", "b"));
    EXPECT_EQ(read("manifest.json", "a"), read("manifest.json", "b"));
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run({{"command", "nope"}}), app::invalid_config);
    EXPECT_EQ(run({{"command", "gen"}, {"family", "sphere:n=3"}}), app::invalid_config);
    EXPECT_EQ(run({{"command", "heta"}, {"depth", 3}, {"eta", 2.0}}), app::invalid_config);
    EXPECT_EQ(run({{"command", "distortion"}, {"domain", "path:n=6"}, {"host", "ultrametric-host:depth=4"},
                   {"budget", {{"max_nodes", 1}}}}),
              app::budget_exhausted);
    EXPECT_EQ(run({{"command", "invariant"}, {"kind", "type"}, {"host", "path:n=4"}, {"n_list", {4}},
                   {"budget", {{"max_maps", 10}, {"allow_heuristic", false}}}}),
              app::budget_exhausted);
}

TEST_F(Cli, SpaceSpecs) {
    EXPECT_EQ(app::parse_space_spec("path:n=4"), json({{"kind", "path"}, {"n", 4}}));
    EXPECT_EQ(app::parse_space_spec("heta:depth=5,eta=0.2"), json({{"kind", "heta"}, {"depth", 5}, {"eta", 0.2}}));
    EXPECT_EQ(app::parse_space_spec("@m.txt"), json({{"file", "m.txt"}}));
    EXPECT_THROW(app::parse_space_spec("path:n=four"), app::ConfigError);
}

TEST_F(Cli, ExecutableFlagsAndHelp) {
    const std::string exe = METDICH_EXECUTABLE;
    EXPECT_EQ(shell(exe + " --help"), 0);
    EXPECT_EQ(shell(exe + " invariant --help"), 0);
    EXPECT_EQ(shell(exe + " invariant --bogus 1"), 2);
    EXPECT_EQ(shell(exe), 2);
    const auto out = (root_ / "exe").string();
    EXPECT_EQ(shell(exe + " heta --depth 3 --eta 0.5 --out " + out), 0);
    EXPECT_TRUE(fs::exists(fs::path(out) / "metric.txt"));
    std::ofstream(root_ / "cfg.json") << R"({"depth": 2, "eta": 0.25})";
    EXPECT_EQ(shell(exe + " heta --config " + (root_ / "cfg.json").string() + " --eta 0.5 --out " + out), 0);
    const auto manifest = json::parse(read("manifest.json", "exe"));
    EXPECT_EQ(manifest["config"]["depth"], 2);
    EXPECT_EQ(manifest["config"]["eta"], 0.5);
}
