#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "ising/brute_force.hpp"
#include "ising/io.hpp"
#include "ising/planar_ising.hpp"

using namespace ising;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;  // stdout
    std::string all;  // stdout and stderr
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("ising_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    Outcome run(const std::string& args) {
        Outcome r;
        const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
        const std::string cmd = std::string(ISING_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
        const int status = std::system(cmd.c_str());
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.all = r.out + slurp(err);
        return r;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    static double log_z_of(const std::string& out) {
        const auto pos = out.find("log_z = ");
        EXPECT_NE(pos, std::string::npos) << out;
        return std::stod(out.substr(pos + 8));
    }

    fs::path dir_;
};

IsingModel with_couplings(const Graph& g, std::uint64_t seed) {
    Rng rng(seed);
    return ising::testing::random_model(g, -1.0, 1.0, rng);
}

}  // namespace

TEST_F(CliTest, SingleEdgeLogZ) {
    const auto model = file("edge.json", R"({"n": 2, "edges": [{"u": 0, "v": 1, "j": 1.0}]})");
    const Outcome r = run("logz --model " + model);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "log_z = 1.8200751916\n");
    EXPECT_NEAR(log_z_of(r.out), std::log(4.0 * std::cosh(1.0)), 1e-10);
    EXPECT_NE(r.all.find("engine: planar"), std::string::npos);
}

TEST_F(CliTest, ConditionedPlanarLogZ) {
    const IsingModel m = with_couplings(ising::testing::rect_grid(3, 3), 3);
    const auto model = file("grid.json", model_to_json(m));
    const Outcome r = run("logz --model " + model + " --condition 0:+1");
    EXPECT_EQ(r.code, 0);
    EXPECT_NEAR(log_z_of(r.out), log_z_planar(m) - std::log(2.0), 1e-9);
    const Outcome pair = run("logz --model " + model + " --condition 0:+1,1:-1");
    Condition s;
    s.assignments = {{0, 1}, {1, -1}};
    EXPECT_NEAR(log_z_of(pair.out), brute_force_log_z(m, s), 1e-9);
}

TEST_F(CliTest, K5IsRejected) {
    const auto model = file("k5.json", model_to_json(with_couplings(ising::testing::complete_graph(5), 1)));
    const Outcome r = run("k5 --model " + model);
    EXPECT_EQ(r.code, 5);
    EXPECT_NE(r.all.find("NotK5Free"), std::string::npos);
}

TEST_F(CliTest, K33RoundTrip) {
    const IsingModel m = with_couplings(ising::testing::complete_bipartite(3, 3), 2);
    const auto model = file("k33.json", model_to_json(m));
    const auto dec = (dir_ / "k33.dec.json").string();
    ASSERT_EQ(run("k5 --model " + model + " --out " + dec).code, 0);
    const DecompositionTree tree = parse_decomposition(slurp(dec));
    EXPECT_EQ(tree.nodes.size(), 1u);
    const Outcome r = run("logz --model " + model + " --decomposition " + dec);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.all.find("engine: decomposition"), std::string::npos);
    EXPECT_NEAR(log_z_of(r.out), brute_force_log_z(m), 1e-9);
    EXPECT_EQ(run("validate --model " + model + " --decomposition " + dec).code, 0);
}

TEST_F(CliTest, PlanarGridDecompositionIsAccepted) {
    const IsingModel m = with_couplings(ising::testing::rect_grid(4, 4), 5);
    const auto model = file("grid.json", model_to_json(m));
    const auto dec = (dir_ / "grid.dec.json").string();
    ASSERT_EQ(run("k5 --model " + model + " --out " + dec).code, 0);
    const Outcome r = run("logz --model " + model + " --decomposition " + dec);
    EXPECT_EQ(r.code, 0);
    EXPECT_NEAR(log_z_of(r.out), log_z_planar(m), 1e-9);
}

TEST_F(CliTest, ValidateReportsViolations) {
    Graph g(6);
    for (int v = 0; v < 4; ++v) g.add_edge(v, v + 1);
    for (int v = 0; v < 4; ++v) g.add_edge(v, 5);
    const auto model = file("g.json", graph_to_json(g));
    const auto wide = file("wide.json", R"({"c": 8, "root": 0, "nodes": [
        {"id": 0, "parent": null, "vertices": [0, 1, 2, 3, 4], "edges": [[0, 1], [1, 2], [2, 3], [3, 4]]},
        {"id": 1, "parent": 0, "vertices": [0, 1, 2, 3, 5], "edges": [[0, 5], [1, 5], [2, 5], [3, 5]]}]})");
    const Outcome r = run("validate --model " + model + " --decomposition " + wide);
    EXPECT_EQ(r.code, 5);
    EXPECT_NE(r.out.find("P2"), std::string::npos);

    // K5 minus {0,1} is planar, but the navel {0,1} of the child restores the edge.
    Graph h(6);
    for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v)
            if (!(u == 0 && v == 1)) h.add_edge(u, v);
    h.add_edge(0, 5);
    h.add_edge(1, 5);
    const auto model2 = file("h.json", graph_to_json(h));
    const auto p4 = file("p4.json", R"({"c": 4, "root": 0, "nodes": [
        {"id": 0, "parent": null, "vertices": [0, 1, 2, 3, 4],
         "edges": [[0, 2], [0, 3], [0, 4], [1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]]},
        {"id": 1, "parent": 0, "vertices": [0, 1, 5], "edges": [[0, 5], [1, 5]]}]})");
    const Outcome q = run("validate --model " + model2 + " --decomposition " + p4);
    EXPECT_EQ(q.code, 5);
    EXPECT_NE(q.out.find("P4"), std::string::npos);
    EXPECT_EQ(q.out.find("P3"), std::string::npos);
    EXPECT_EQ(run("validate --model " + model2 + " --decomposition " + p4 + " --c 8").code, 0);
}

TEST_F(CliTest, SamplingIsDeterministic) {
    const IsingModel m = with_couplings(ising::testing::complete_bipartite(3, 3), 9);
    const auto model = file("k33.json", model_to_json(m));
    const auto dec = (dir_ / "k33.dec.json").string();
    ASSERT_EQ(run("k5 --model " + model + " --out " + dec).code, 0);
    const Outcome a = run("sample --model " + model + " --decomposition " + dec + " --samples 50 --seed 3");
    const Outcome b = run("sample --model " + model + " --decomposition " + dec + " --samples 50 --seed 3");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    std::istringstream lines(a.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        std::istringstream spins(line);
        int s = 0, n = 0;
        while (spins >> s) {
            EXPECT_TRUE(s == 1 || s == -1);
            ++n;
        }
        EXPECT_EQ(n, 6);
        ++count;
    }
    EXPECT_EQ(count, 50);
    const Outcome none = run("sample --model " + model + " --samples 0 --seed 3");
    EXPECT_EQ(none.code, 0);
    EXPECT_EQ(none.out, "");
}

TEST_F(CliTest, ConditionedSamplesRespectTheCondition) {
    const IsingModel m = with_couplings(ising::testing::rect_grid(3, 3), 4);
    const auto model = file("grid.json", model_to_json(m));
    const Outcome r = run("sample --model " + model + " --condition 4:-1 --samples 20 --seed 1");
    EXPECT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line)) {
        std::istringstream spins(line);
        std::vector<int> x;
        for (int s; spins >> s;) x.push_back(s);
        ASSERT_EQ(x.size(), 9u);
        EXPECT_EQ(x[4], -1);
    }
}

TEST_F(CliTest, UnsupportedModels) {
    Graph g = ising::testing::complete_bipartite(3, 3);
    for (int i = 0; i < 16; ++i) g.add_vertex();
    const auto big = file("big.json", model_to_json(with_couplings(g, 1)));
    EXPECT_EQ(run("logz --model " + big).code, 3);

    IsingModel m = with_couplings(ising::testing::complete_bipartite(3, 3), 2);
    const auto plain = file("k33.json", model_to_json(m));
    const auto dec = (dir_ / "k33.dec.json").string();
    ASSERT_EQ(run("k5 --model " + plain + " --out " + dec).code, 0);
    m.fields = std::vector<double>(6, 0.25);
    const auto fielded = file("fielded.json", model_to_json(m));
    EXPECT_EQ(run("logz --model " + fielded + " --decomposition " + dec).code, 3);
    // small enough to enumerate, fields are fine
    const Outcome r = run("logz --model " + fielded);
    EXPECT_EQ(r.code, 0);
    EXPECT_NEAR(log_z_of(r.out), brute_force_log_z(m), 1e-9);
}

TEST_F(CliTest, InvalidInputs) {
    EXPECT_EQ(run("logz --model " + file("bad.json", "{\"n\": 2, \"edges\": [[0, 1]")).code, 2);
    EXPECT_EQ(run("logz --model " + file("loop.json", R"({"n": 2, "edges": [[0, 0]]})")).code, 2);
    EXPECT_EQ(run("logz --model " + (dir_ / "missing.json").string()).code, 2);
    const auto edge = file("edge.json", R"({"n": 2, "edges": [[0, 1, 0.5]]})");
    EXPECT_EQ(run("logz --model " + edge + " --condition 0:2").code, 2);
    EXPECT_EQ(run("logz --model " + edge + " --condition 7:+1").code, 2);
    EXPECT_EQ(run("sample --model " + edge).code, 2);  // seed is required
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, ExperimentCsv) {
    const std::string args =
        "experiment --H 5 --alphas 1,2,3 --trials 5 --seed 7 --methods psg,dsg --max-iters 2 --max-inner 8 --out ";
    const auto a = (dir_ / "a.csv").string(), b = (dir_ / "b.csv").string();
    ASSERT_EQ(run(args + a).code, 0);
    ASSERT_EQ(run(args + b).code, 0);
    const std::string text = slurp(a);
    EXPECT_EQ(text, slurp(b));
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "alpha,trial,method,h_bound,logz_true,err_logz_norm,err_pairwise,err_singleton,iters,runtime_ms");
    int rows = 0;
    while (std::getline(lines, line)) {
        std::vector<std::string> cols;
        std::istringstream cells(line);
        for (std::string c; std::getline(cells, c, ',');) cols.push_back(c);
        ASSERT_EQ(cols.size(), 10u);
        EXPECT_GE(std::stod(cols[5]), 0.0);
        ++rows;
    }
    EXPECT_EQ(rows, 30);
    EXPECT_EQ(run("experiment --H 5 --seed 1 --methods trw").code, 2);
    EXPECT_EQ(run("experiment --H 3 --seed 1 --methods dsg").code, 2);
}
