#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agentcredit/agents.hpp"
#include "agentcredit/cgopo.hpp"
#include "agentcredit/ghm.hpp"
#include "agentcredit/graph.hpp"
#include "agentcredit/market.hpp"
#include "agentcredit/shapley.hpp"

namespace agentcredit {

struct MarketData {
  MarketSeries series;
  FeatureView features;
};

// Called for every agent execution: day, agent, the coalition's membership
// in earlier layers, and the upstream outputs actually handed over.
using ExecutionObserver =
    std::function<void(std::size_t day, AgentId agent, Coalition upstream, const UpstreamMap& inputs)>;

// A team of agents bound to a graph and one symbol's market data.
class TradingSystem {
 public:
  TradingSystem(const WorkflowGraph& graph, std::vector<AgentSpec> team, const MarketData& data);

  const WorkflowGraph& graph() const { return *graph_; }
  const MarketData& data() const { return *data_; }
  const std::vector<AgentSpec>& team() const { return team_; }
  std::vector<std::string> agent_names() const;

  std::vector<PromptState> prompts() const;
  void set_prompts(const std::vector<PromptState>& prompts);

  void set_observer(ExecutionObserver observer) { observer_ = std::move(observer); }

  MarketView view(std::size_t day) const;

  // One episode: every viable coalition evaluated on `day` through the memo
  // cache.
  GhmRun<AgentOutput> run_day(std::size_t day, std::span<const Coalition> viable,
                              const GhmOptions& options = {}) const;

  // Cache-free replay of one coalition on one day. Runs exactly the members
  // of `s` in topological order; returns the sink's decision if the sink is
  // a member. `executions` is incremented once per agent run.
  std::optional<TradeDecision> replay(std::size_t day, Coalition s, std::uint64_t& executions) const;

  // Upstream map for `agent` given the outputs of the coalition members.
  UpstreamMap upstream_for(AgentId agent, Coalition members,
                           const std::map<AgentId, AgentOutput>& outputs) const;

 private:
  AgentOutput run_agent(std::size_t day, AgentId agent, Coalition upstream,
                        const UpstreamMap& inputs) const;

  const WorkflowGraph* graph_;
  std::vector<AgentSpec> team_;
  const MarketData* data_;
  std::vector<double> closes_;
  ExecutionObserver observer_;
  std::shared_ptr<std::mutex> observer_mu_ = std::make_shared<std::mutex>();
};

// Decision days of a window are first..last-1; each earns the next day's return.
std::vector<std::size_t> decision_days(DayRange window);

struct TradingCosts {
  double rf_daily = 0.0;
  double trade_cost = 0.0;  // charged per unit of position change
};

// Positions held from each decision day to the next, applied to next-day
// returns, minus trading costs. Position before the first decision is flat.
std::vector<double> strategy_returns(const MarketSeries& series, std::span<const std::size_t> days,
                                     std::span<const int> positions, double trade_cost);

// Straight-line return series for one coalition over a window, with no cache.
std::vector<double> coalition_return_series(const TradingSystem& system, Coalition s,
                                            DayRange window, double trade_cost,
                                            std::uint64_t* executions = nullptr);

struct EpisodeCost {
  std::uint64_t agent_executions = 0;
  std::uint64_t cache_hits = 0;
};

// Pruned characteristic function for one window: one GHM episode per
// decision day, value = raw Sharpe of the coalition's replayed returns.
class WindowGame final : public ViableGame {
 public:
  WindowGame(const TradingSystem& system, DayRange window, TradingCosts costs,
             GhmOptions options = {});

  std::vector<double> values(std::span<const Coalition> viable) override;
  ExecutionCounters counters() const override { return counters_; }

  const std::map<Coalition, std::vector<double>>& returns() const { return returns_; }
  // Values from the most recent call to values().
  const std::vector<double>& last_values() const { return values_; }
  const std::vector<EpisodeCost>& episodes() const { return episodes_; }
  // Per-agent outputs and inputs of the grand coalition, by decision day.
  const std::vector<std::map<AgentId, AgentOutput>>& grand_outputs() const { return grand_outputs_; }
  const std::vector<std::size_t>& days() const { return days_; }

 private:
  const TradingSystem* system_;
  DayRange window_;
  TradingCosts costs_;
  GhmOptions options_;
  std::vector<std::size_t> days_;
  std::map<Coalition, std::vector<double>> returns_;
  std::vector<double> values_;
  std::vector<EpisodeCost> episodes_;
  std::vector<std::map<AgentId, AgentOutput>> grand_outputs_;
  ExecutionCounters counters_;
};

// Classical characteristic function for one window: every subset replayed
// without cache.
class ExactWindowGame final : public CoalitionEvaluator {
 public:
  ExactWindowGame(const TradingSystem& system, DayRange window, TradingCosts costs);
  double value(Coalition s) override;
  ExecutionCounters counters() const override { return counters_; }

 private:
  const TradingSystem* system_;
  DayRange window_;
  TradingCosts costs_;
  ExecutionCounters counters_;
};

enum class Engine { Exact, Dag, Both };

std::string_view engine_name(Engine e);
Engine parse_engine(std::string_view text);  // throws ConfigError

struct BaselineParams {
  std::size_t sma_fast = 20;
  std::size_t sma_slow = 50;
  std::size_t macd_fast = 12;
  std::size_t macd_slow = 26;
  std::size_t macd_signal = 9;
};

struct BacktestConfig {
  std::size_t window_len = 5;
  TradingCosts costs;
  CycleConfig cycle;
  Engine engine = Engine::Dag;
  std::size_t parallelism = 1;
  MockParams mock;
  BaselineParams baselines;
};

struct WindowMetrics {
  double total_return = 0.0;
  double sharpe = 0.0;  // raw, the characteristic-function value
  double max_drawdown = 0.0;
};

struct WindowReport {
  std::size_t index = 0;
  DayRange window;
  std::string first_date;
  std::string last_date;
  std::vector<Coalition> viable;
  std::vector<double> coalition_sharpe;  // aligned with `viable`
  std::vector<double> shapley;
  std::optional<std::vector<double>> shapley_exact;
  double grand_value = 0.0;
  std::vector<double> grand_returns;
  WindowMetrics metrics;
  std::uint64_t coalitions_total = 0;
  std::uint64_t coalitions_evaluated = 0;
  std::uint64_t agent_executions = 0;
  std::uint64_t cache_hits = 0;
  std::vector<std::uint64_t> executions_per_episode;
  std::uint64_t exact_agent_executions = 0;
  bool triggered = false;
  std::optional<AgentId> bottleneck;
};

struct StrategyMetrics {
  std::string name;
  std::vector<double> returns;
  double total_return = 0.0;
  double sharpe_annualized = 0.0;
  double max_drawdown = 0.0;
};

struct BacktestResult {
  std::vector<std::string> agent_names;
  std::string symbol;
  std::size_t total_days = 0;
  std::vector<std::string> dates;
  std::size_t window_len = 0;
  Engine engine = Engine::Dag;
  std::vector<WindowReport> windows;
  CycleStore cycles;
  // Per-window grand-coalition returns of the prompt-frozen pass.
  std::vector<std::vector<double>> frozen_window_returns;
  std::vector<StrategyMetrics> strategies;  // CG-OPO, frozen, buy&hold, MACD, SMA
  // Every prompt version produced, per agent, starting with version 0.
  std::vector<std::vector<PromptState>> prompt_lineage;
  std::vector<HistoryRecord> history;
  std::size_t unused_trailing_days = 0;
};

StrategyMetrics make_strategy(std::string name, std::vector<double> returns);

// Partitions the days into consecutive full windows and, per window:
// measures contributions, runs one optimization cycle, and carries the
// updated prompts into the next window. A second pass with frozen prompts
// and three rule-based baselines run over the same decision days.
// Throws InsufficientData if not even one window fits.
BacktestResult run_backtest(const WorkflowGraph& graph, const std::vector<Role>& roles,
                            const MarketData& data, const BacktestConfig& config,
                            const Reflector& reflector,
                            const ExecutionObserver& observer = nullptr);

// windows/window_NNN.txt, summary.txt, cycles.jsonl, lessons.jsonl,
// history.jsonl and prompts/<agent>/v<k>.txt under `out_dir`.
void write_backtest_reports(const BacktestResult& result, const WorkflowGraph& graph,
                            const std::filesystem::path& out_dir);

std::string format_summary(const BacktestResult& result);
std::string format_window_report(const WindowReport& report, const WorkflowGraph& graph);

}  // namespace agentcredit
