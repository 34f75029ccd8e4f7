#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "agentcredit/agents.hpp"
#include "agentcredit/backtest.hpp"
#include "agentcredit/error.hpp"
#include "agentcredit/graph.hpp"
#include "agentcredit/market.hpp"

namespace agentcredit::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kIoError = 2, kRuntimeError = 3 };

int exit_code_for(Errc code);

// A graph file plus the optional role assignment it carries.
struct GraphFile {
  WorkflowGraph graph;
  std::optional<std::vector<Role>> roles;
};

// JSON graph file:
//   {"layers": [{"agents": ["A", "B"], "mandatory": true}, ...],
//    "edges": [["A", "C"], ...] | "full",
//    "roles": {"A": "news_analyst", ...}}
// Throws IoError when unreadable, ParseError on malformed JSON, ConfigError
// on a bad shape, or the graph validation error.
GraphFile parse_graph_json(const std::string& text);
GraphFile load_graph_file(const std::filesystem::path& path);

struct DataSource {
  std::optional<std::filesystem::path> market_csv;
  std::optional<std::filesystem::path> features_csv;
  std::string symbol;  // empty keeps the loader's or generator's name
  SynthParams synth;
};

struct RunConfig {
  std::optional<std::filesystem::path> graph_path;  // built-in reference graph if unset
  DataSource data;
  std::size_t window_len = 5;
  double tau = 0.0;
  double rf_daily = 0.0;
  double trade_cost = 0.0;
  std::size_t lesson_cap = 5;
  Engine engine = Engine::Dag;
  std::filesystem::path out_dir = "out";
  std::size_t parallelism = 1;
  std::uint64_t seed = 42;  // mock agents; also the synthetic market unless set there
  std::size_t window_index = 0;  // window used by `shapley`
};

// Relative paths inside the file resolve against the file's directory.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);
void validate_run_config(const RunConfig& config);  // throws ConfigError

MarketData load_market_data(const DataSource& source);
BacktestConfig to_backtest_config(const RunConfig& config);

int cmd_validate(const std::filesystem::path& graph_path, std::ostream& out, std::ostream& err);
int cmd_coalitions(const std::filesystem::path& graph_path, std::ostream& out, std::ostream& err);
int cmd_shapley(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_cost(const std::vector<std::size_t>& layers, const std::vector<bool>& mandatory,
             std::ostream& out, std::ostream& err);
int cmd_cost(const std::filesystem::path& graph_path, std::ostream& out, std::ostream& err);
int cmd_backtest(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace agentcredit::cli
