#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <sys/wait.h>

#include "detsched/analysis.hpp"
#include "detsched/block_io.hpp"
#include "detsched/digest.hpp"
#include "detsched/executor.hpp"
#include "detsched/schedule.hpp"
#include "detsched/workload.hpp"

using namespace detsched;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path workdir() {
    const auto* info = testing::UnitTest::GetInstance()->current_test_info();
    fs::path dir = fs::temp_directory_path() / "detsched_cli_test" / info->name();
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

Run cli(const std::string& args) {
    const char* bin = std::getenv("DETSCHED_CLI");
    if (bin == nullptr) throw std::runtime_error("DETSCHED_CLI is not set");
    const fs::path err = fs::temp_directory_path() / ("detsched_cli_err_" + std::to_string(::getpid()));
    const std::string cmd = std::string("'") + bin + "' " + args + " 2>'" + err.string() + "'";
    Run r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) throw std::runtime_error("popen failed");
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    fs::remove(err);
    return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::string field(const std::string& out, const std::string& key) {
    const auto pos = out.find(key + ": ");
    if (pos == std::string::npos) return "";
    const auto start = pos + key.size() + 2;
    return out.substr(start, out.find('\n', start) - start);
}

Block writer_reader() {
    Block b;
    b.txs = {make_transaction(0, {}, {"x"}, 1, {ProgramKind::WriteConst, 1}),
             make_transaction(1, {"x"}, {"y"}, 1, {ProgramKind::SumAndAdd, 1})};
    return b;
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
    EXPECT_EQ(cli("--help").code, 0);
    EXPECT_EQ(cli("schedule --help").code, 0);
    EXPECT_EQ(cli("schedule").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
}

TEST(Cli, ScheduleGoldenChainOfFour) {
    const auto dir = workdir();
    spit(dir / "c.json", serialize_block(chain_block(4)));
    const auto r = cli("schedule " + q(dir / "c.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out,
              "runner: min-coloring\n"
              "coloring: exact\n"
              "# schedule\n"
              "4 3\n0 1\n2 1\n2 3\n"
              "# levels\n"
              "0 2\n1 3\n"
              "block_latency: 2\n"
              "mean_latency: 1.5\n"
              "p95_latency: 2\n");
}

TEST(Cli, ScheduleChainLatencies) {
    const auto dir = workdir();
    for (std::size_t n : {4u, 10u, 50u}) {
        spit(dir / "c.json", serialize_block(chain_block(n)));
        EXPECT_EQ(field(cli("schedule " + q(dir / "c.json") + " --runner min-coloring").out, "block_latency"), "2");
        EXPECT_EQ(field(cli("schedule " + q(dir / "c.json") + " --runner order").out, "block_latency"),
                  std::to_string(n));
    }
}

TEST(Cli, ParseErrorsExitTwoWithLine) {
    const auto dir = workdir();
    spit(dir / "bad.json", "{\n\"seq\": 0,\n\"txs\": [\n");
    const auto r = cli("schedule " + q(dir / "bad.json"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line"), std::string::npos);
    EXPECT_EQ(cli("schedule " + q(dir / "missing.json")).code, 2);
    spit(dir / "c.json", serialize_block(chain_block(3)));
    EXPECT_EQ(cli("schedule " + q(dir / "c.json") + " --runner bogus").code, 2);
}

TEST(Cli, CapacityErrorsExitThree) {
    const auto dir = workdir();
    spit(dir / "c.json", serialize_block(chain_block(12)));
    const auto r = cli("oracle " + q(dir / "c.json"));
    EXPECT_EQ(r.code, 3);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(cli("oracle " + q(dir / "c.json") + " --cap 12").code, 0);
}

TEST(Cli, ExecuteDependentPair) {
    const auto dir = workdir();
    spit(dir / "b.json", serialize_block(writer_reader()));
    const auto r = cli("execute " + q(dir / "b.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto state = r.out.substr(r.out.find("# state\n") + 8);
    EXPECT_EQ(state.substr(0, state.find('\n')), R"({"x":1,"y":2})");
}

TEST(Cli, ExecuteWithInitialState) {
    const auto dir = workdir();
    spit(dir / "b.json", serialize_block(writer_reader()));
    spit(dir / "s.json", R"({"x":40,"z":9})");
    const auto r = cli("execute " + q(dir / "b.json") + " --state " + q(dir / "s.json") + " --runner order");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find(R"({"x":1,"y":2,"z":9})"), std::string::npos);
}

TEST(Cli, ExecuteEmptyBlock) {
    const auto dir = workdir();
    spit(dir / "e.json", serialize_block(Block{}));
    const auto r = cli("execute " + q(dir / "e.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("# results\n[]\n"), std::string::npos);
    EXPECT_NE(r.out.find("# state\n{}\n"), std::string::npos);
}

TEST(Cli, SimulateMakespanEqualsScheduleLatency) {
    const auto dir = workdir();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        WorkloadSpec s;
        s.n_txs = 14;
        s.seed = seed;
        s.length_mode = LengthMode::Heterogeneous;
        spit(dir / "b.json", serialize_block(gen_block(s)));
        const auto sched = cli("schedule " + q(dir / "b.json"));
        const auto sim = cli("execute " + q(dir / "b.json") + " --simulate");
        ASSERT_EQ(sim.code, 0) << sim.err;
        EXPECT_EQ(field(sim.out, "makespan"), field(sched.out, "block_latency"));
        EXPECT_EQ(field(sim.out, "makespan"), field(sim.out, "latency"));
    }
}

TEST(Cli, TraceIsOneLinePerTransaction) {
    const auto dir = workdir();
    spit(dir / "c.json", serialize_block(chain_block(5)));
    const auto r = cli("execute " + q(dir / "c.json") + " --trace");
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out.substr(r.out.find("# trace\n") + 8));
    std::vector<TraceInterval> trace;
    TraceInterval t;
    while (in >> t.id >> t.start_ns >> t.end_ns) trace.push_back(t);
    EXPECT_EQ(trace.size(), 5u);
    EXPECT_TRUE(conflicting_intervals_disjoint(trace, build_conflict_graph(chain_block(5))));
}

TEST(Cli, OracleExamples) {
    const auto dir = workdir();
    spit(dir / "c.json", serialize_block(chain_block(6)));
    EXPECT_EQ(field(cli("oracle " + q(dir / "c.json")).out, "optimal_latency"), "2");
    spit(dir / "k3.json", serialize_block(transform_graph_to_block(gnp_graph(3, 1.0, 0), 1)));
    const auto r = cli("oracle " + q(dir / "k3.json") + " --double-check");
    EXPECT_EQ(field(r.out, "optimal_latency"), "3");
    EXPECT_EQ(field(r.out, "orientation_oracle"), "3");
}

TEST(Cli, GenBlockMatchesLibrary) {
    const auto dir = workdir();
    spit(dir / "spec.json", R"({"n_txs": 6, "seed": 3})");
    ASSERT_EQ(cli("gen-block " + q(dir / "spec.json") + " --seq 4 --out " + q(dir / "b.json")).code, 0);
    WorkloadSpec s;
    s.n_txs = 6;
    s.seed = 3;
    EXPECT_EQ(parse_block(slurp(dir / "b.json")), gen_block(s, 4, genesis_hash()));
    const auto again = cli("gen-block " + q(dir / "spec.json") + " --seq 4");
    EXPECT_EQ(again.out, slurp(dir / "b.json"));
}

TEST(Cli, AsmrDigests) {
    const auto dir = workdir();
    spit(dir / "specs.json",
         R"([{"n_txs": 10, "seed": 1}, {"n_txs": 10, "seed": 2}, {"n_txs": 10, "seed": 3}, {"n_txs": 10, "seed": 4}])");
    ASSERT_EQ(cli("gen-stream " + q(dir / "specs.json") + " --out " + q(dir / "s.jsonl")).code, 0);
    const auto min = cli("asmr " + q(dir / "s.jsonl") + " --runner min-coloring");
    const auto batch = cli("asmr " + q(dir / "s.jsonl") + " --runner batch");
    ASSERT_EQ(min.code, 0) << min.err;
    EXPECT_EQ(field(min.out, "processed"), "4");
    EXPECT_EQ(field(min.out, "state_digest"), field(batch.out, "state_digest"));

    const auto crash = cli("asmr " + q(dir / "s.jsonl") + " --ledger " + q(dir / "l.bin") + " --max-blocks 2");
    EXPECT_EQ(field(crash.out, "processed"), "2");
    const auto resumed = cli("asmr " + q(dir / "s.jsonl") + " --ledger " + q(dir / "l.bin") + " --resume");
    EXPECT_EQ(field(resumed.out, "resumed"), "2");
    EXPECT_EQ(field(resumed.out, "state_digest"), field(min.out, "state_digest"));

    spit(dir / "empty.jsonl", "");
    EXPECT_EQ(field(cli("asmr " + q(dir / "empty.jsonl")).out, "state_digest"), state_digest(GlobalState{}));
}

TEST(Cli, AsmrHaltsOnBrokenChain) {
    const auto dir = workdir();
    auto stream = gen_stream({WorkloadSpec{}, WorkloadSpec{}}, genesis_hash());
    stream[1].seq = 7;
    spit(dir / "s.jsonl", serialize_stream(stream));
    const auto r = cli("asmr " + q(dir / "s.jsonl"));
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, AnalyzeCsv) {
    const auto dir = workdir();
    const auto zero = cli("analyze --ns 10 --ps 0 --samples 4 --seed 9");
    ASSERT_EQ(zero.code, 0) << zero.err;
    EXPECT_EQ(zero.out, "n,p,samples,mean_ratio,min_ratio,max_ratio,seed\n10,0,4,1.000000,1.000000,1.000000,9\n");

    const std::string grid = "--ns 30,80 --ps 0.02,0.1 --samples 6 --seed 5";
    const auto serial = cli("analyze " + grid);
    const auto parallel = cli("analyze " + grid + " --threads 4");
    EXPECT_EQ(serial.out, parallel.out);
    ASSERT_EQ(cli("analyze " + grid + " --out " + q(dir / "r.csv")).code, 0);
    EXPECT_EQ(slurp(dir / "r.csv"), serial.out);
    EXPECT_EQ(serial.out, ratio_csv(vulnerability_study({30, 80}, {0.02, 0.1}, 6, 5)));
}

TEST(Cli, Counterexamples) {
    const auto hetero = cli("counterexamples --n-max 6 --trials 1500 --seed 2");
    ASSERT_EQ(hetero.code, 0) << hetero.err;
    EXPECT_EQ(hetero.out, format_report(hetero_counterexample_search(6, 1500, 2)));
    const auto homo = cli("counterexamples --n-max 6 --trials 300 --seed 2 --homogeneous");
    EXPECT_NE(homo.out.find("none found"), std::string::npos);
}
