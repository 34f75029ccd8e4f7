#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "agentcredit/cli.hpp"

namespace agentcredit::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kConfigs = AGENTCREDIT_CONFIG_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "agentcredit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string cfg(const char* name) { return (kConfigs / name).string(); }

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("agentcredit_cli_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Cli, ValidateReference) {
  const auto r = invoke({"validate", cfg("reference_331.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("3 layers, 3 sources, sink TRA, 12 edges"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("roles: ok"), std::string::npos);
}

TEST(Cli, ValidateErrorsMapToExitCodes) {
  const auto cyclic = invoke({"validate", cfg("cyclic.json")});
  EXPECT_EQ(cyclic.code, 1);
  EXPECT_NE(cyclic.err.find("CycleDetected"), std::string::npos) << cyclic.err;
  EXPECT_EQ(invoke({"validate", "/nonexistent/graph.json"}).code, 2);
  EXPECT_EQ(invoke({"validate"}).code, 1);
  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, Coalitions) {
  const auto r = invoke({"coalitions", cfg("reference_331.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("49/128 (61.7% pruned)"), std::string::npos) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 50);
  EXPECT_NE(invoke({"coalitions", cfg("layered_221.json")}).out.find("9/32"), std::string::npos);
  EXPECT_NE(invoke({"coalitions", cfg("single_agent.json")}).out.find("1/2"), std::string::npos);
}

TEST(Cli, Cost) {
  const auto ref = invoke({"cost", "--layers", "3,3,1"});
  EXPECT_EQ(ref.code, 0) << ref.err;
  EXPECT_NE(ref.out.find("U=[1,7,49]  total executions 73"), std::string::npos) << ref.out;
  EXPECT_NE(ref.out.find("reduction 83.7%"), std::string::npos) << ref.out;
  EXPECT_NE(invoke({"cost", "--layers", "4,2,1"}).out.find("U=[1,15,45]  total executions 79"), std::string::npos);
  EXPECT_NE(invoke({"cost", "--layers", "2,2,1"}).out.find("total executions 17"), std::string::npos);
  EXPECT_NE(invoke({"cost", "--layers", "3,3,1", "--mandatory", "1,0,1"}).out.find("U=[1,7,56]"),
            std::string::npos);
  EXPECT_NE(invoke({"cost", "--graph", cfg("layered_421.json")}).out.find("total executions 79"),
            std::string::npos);
  EXPECT_NE(invoke({"cost", "--layers", "3,0,1"}).code, 0);
}

TEST(Cli, ShapleyBothEnginesAgree) {
  const auto r = invoke({"shapley", "--engine", "both"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("max |phi_dag - phi_exact| 0.000e+00"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("61.7%"), std::string::npos);
  EXPECT_NE(r.out.find("83.7%"), std::string::npos);
  const auto missing = invoke({"shapley", "--window", "99"});
  EXPECT_EQ(missing.code, 1);
}

TEST(Cli, BacktestWritesReportsAndIsReproducible) {
  const auto a = scratch("bt_a");
  const auto b = scratch("bt_b");
  const auto ra = invoke({"--config", cfg("backtest_bull.json"), "--out", a.string(), "backtest"});
  const auto rb = invoke({"--config", cfg("backtest_bull.json"), "--out", b.string(), "backtest"});
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(rb.code, 0) << rb.err;
  for (const char* row : {"CG-OPO", "w/o CG-OPO", "Buy&Hold", "MACD", "SMA"}) {
    EXPECT_NE(ra.out.find(std::string("\n") + row + " "), std::string::npos) << row;
  }
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const char* f : {"summary.txt", "cycles.jsonl", "lessons.jsonl", "history.jsonl", "windows/window_011.txt"}) {
    EXPECT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(read(a / f), read(b / f)) << f;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, FlagsOverrideConfig) {
  const auto out = scratch("override");
  const auto r = invoke({"--config", cfg("backtest_bull.json"), "--out", out.string(), "backtest", "--window-len",
                         "10", "--engine", "both", "--regime", "bear"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("window_len 10  windows 6"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("engine both"), std::string::npos);
  EXPECT_NE(r.out.find("SYN-bear"), std::string::npos);
  fs::remove_all(out);
}

TEST(Cli, InvalidRunOptions) {
  EXPECT_EQ(invoke({"backtest", "--window-len", "1", "--out", scratch("bad").string()}).code, 1);
  EXPECT_EQ(invoke({"backtest", "--engine", "fast"}).code, 1);
  EXPECT_EQ(invoke({"backtest", "--signal-strength", "1.5"}).code, 1);
  EXPECT_EQ(invoke({"--config", "/nonexistent.json", "backtest"}).code, 2);
  EXPECT_EQ(invoke({"backtest", "--days", "3", "--out", scratch("short").string()}).code, 1);
}

TEST(Config, ParsesAndRejectsUnknownKeys) {
  const auto c = parse_run_config(
      R"({"graph": "g.json", "data": {"synth": {"days": 30, "regime": "sideways"}}, "window_len": 6,
          "engine": "both", "seed": 9, "out": "res"})",
      "/base");
  EXPECT_EQ(c.graph_path, fs::path("/base/g.json"));
  EXPECT_EQ(c.out_dir, fs::path("/base/res"));
  EXPECT_EQ(c.window_len, 6u);
  EXPECT_EQ(c.engine, Engine::Both);
  EXPECT_EQ(c.data.synth.days, 30u);
  EXPECT_EQ(c.data.synth.regime, Regime::Sideways);
  EXPECT_EQ(c.data.synth.seed, 9u);
  EXPECT_THROW(parse_run_config(R"({"windowlen": 5})", "."), Error);
  EXPECT_THROW(parse_run_config(R"({"data": {"synth": {"dayz": 5}}})", "."), Error);
  EXPECT_THROW(parse_run_config("{not json", "."), Error);
  RunConfig bad;
  bad.window_len = 1;
  EXPECT_THROW(validate_run_config(bad), Error);
  EXPECT_EQ(exit_code_for(Errc::IoError), 2);
  EXPECT_EQ(exit_code_for(Errc::ConfigError), 1);
  EXPECT_EQ(exit_code_for(Errc::ExecutorFailure), 3);
}

TEST(Config, GraphJsonShapes) {
  const auto f = parse_graph_json(R"({"layers": [{"agents": ["A", "B"]}, {"agents": ["C"]}], "edges": "full"})");
  EXPECT_EQ(f.graph.size(), 3u);
  EXPECT_FALSE(f.roles.has_value());
  EXPECT_THROW(parse_graph_json(R"({"layers": [{"agents": ["A"]}], "edges": [["A", "Z"]]})"), Error);
  EXPECT_THROW(parse_graph_json(R"({"layers": [], "edges": []})"), Error);
  EXPECT_THROW(
      parse_graph_json(R"({"layers": [{"agents": ["A"]}], "edges": [], "roles": {"A": "astrologer"}})"),
      Error);
}

}  // namespace
}  // namespace agentcredit::cli
