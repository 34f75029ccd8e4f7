#include "agentcredit/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "agentcredit/coalition.hpp"
#include "agentcredit/error.hpp"
#include "agentcredit/metrics.hpp"

namespace agentcredit {

namespace {

Coalition earlier_layers(const WorkflowGraph& graph, AgentId agent) {
  return detail::earlier_layers(graph, graph.layer_of(agent));
}

int sink_position(const AgentOutput& out) {
  const auto* decision = std::get_if<TradeDecision>(&out);
  if (decision == nullptr) fail(Errc::ExecutorFailure, "sink agent did not return a trade decision");
  return decision_to_position(decision->decision);
}

WindowMetrics window_metrics(std::span<const double> returns, double rf_daily) {
  const auto eq = equity_curve(returns);
  return {total_return(eq), returns.size() >= 2 ? sharpe(returns, rf_daily) : 0.0, max_drawdown(eq)};
}

std::string state_digest(const TradingSystem& system, std::size_t day, AgentId agent,
                         const std::map<AgentId, AgentOutput>& outputs) {
  const auto& graph = system.graph();
  std::string s;
  if (graph.is_source(agent)) {
    const auto v = system.view(day);
    s = fmt::format("sentiment={:+.4f} fundamental={:+.4f} close={:.4f}", v.sentiment,
                    v.fundamental, v.closes.back());
  }
  graph.predecessors(agent).for_each([&](AgentId p) {
    if (!s.empty()) s += "; ";
    s += graph.name(p) + ": " + describe_output(outputs.at(p));
  });
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

}  // namespace

// --- TradingSystem ----------------------------------------------------------

TradingSystem::TradingSystem(const WorkflowGraph& graph, std::vector<AgentSpec> team,
                             const MarketData& data)
    : graph_(&graph), team_(std::move(team)), data_(&data), closes_(data.series.closes()) {
  if (team_.size() != graph.size()) fail(Errc::ConfigError, "team size does not match graph");
  if (data.features.days.size() != data.series.size()) {
    fail(Errc::InsufficientData, "features do not cover every trading day");
  }
}

std::vector<std::string> TradingSystem::agent_names() const {
  std::vector<std::string> names;
  for (AgentId a = 0; a < graph_->size(); ++a) names.push_back(graph_->name(a));
  return names;
}

std::vector<PromptState> TradingSystem::prompts() const {
  std::vector<PromptState> out;
  for (const auto& spec : team_) out.push_back(spec.prompt);
  return out;
}

void TradingSystem::set_prompts(const std::vector<PromptState>& prompts) {
  if (prompts.size() != team_.size()) fail(Errc::InvalidSize, "prompt count does not match team");
  for (std::size_t a = 0; a < team_.size(); ++a) team_[a].prompt = prompts[a];
}

MarketView TradingSystem::view(std::size_t day) const {
  if (day >= closes_.size()) fail(Errc::InsufficientData, "day " + std::to_string(day) + " out of range");
  const auto& f = data_->features.days[day];
  return {day, f.sentiment, f.fundamental, std::span<const double>(closes_).first(day + 1)};
}

AgentOutput TradingSystem::run_agent(std::size_t day, AgentId agent, Coalition upstream,
                                     const UpstreamMap& inputs) const {
  if (observer_) {
    std::lock_guard lock(*observer_mu_);
    observer_(day, agent, upstream, inputs);
  }
  if (graph_->is_source(agent)) {
    const MarketView v = view(day);
    return execute_agent(team_[agent], inputs, &v);
  }
  return execute_agent(team_[agent], inputs, nullptr);
}

GhmRun<AgentOutput> TradingSystem::run_day(std::size_t day, std::span<const Coalition> viable,
                                           const GhmOptions& options) const {
  return ghm_execute<AgentOutput>(
      *graph_, viable,
      [&](AgentId agent, Coalition upstream, const UpstreamOutputs<AgentOutput>& in) {
        UpstreamMap inputs;
        for (const auto& [p, out] : in) inputs.emplace(p, *out);
        return run_agent(day, agent, upstream, inputs);
      },
      options);
}

UpstreamMap TradingSystem::upstream_for(AgentId agent, Coalition members,
                                        const std::map<AgentId, AgentOutput>& outputs) const {
  UpstreamMap inputs;
  (graph_->predecessors(agent) & members).for_each([&](AgentId p) { inputs.emplace(p, outputs.at(p)); });
  return inputs;
}

std::optional<TradeDecision> TradingSystem::replay(std::size_t day, Coalition s,
                                                   std::uint64_t& executions) const {
  std::map<AgentId, AgentOutput> outputs;
  for (AgentId a : topological_order(*graph_)) {
    if (!s.contains(a)) continue;
    outputs.emplace(a, run_agent(day, a, s & earlier_layers(*graph_, a),
                                 upstream_for(a, s, outputs)));
    ++executions;
  }
  auto it = outputs.find(graph_->sink());
  if (it == outputs.end()) return std::nullopt;
  const auto* decision = std::get_if<TradeDecision>(&it->second);
  if (decision == nullptr) fail(Errc::ExecutorFailure, "sink agent did not return a trade decision");
  return *decision;
}

// --- returns ----------------------------------------------------------------

std::vector<std::size_t> decision_days(DayRange window) {
  std::vector<std::size_t> days;
  for (std::size_t d = window.first; d < window.last; ++d) days.push_back(d);
  return days;
}

std::vector<double> strategy_returns(const MarketSeries& series, std::span<const std::size_t> days,
                                     std::span<const int> positions, double trade_cost) {
  if (days.size() != positions.size()) fail(Errc::InvalidSize, "one position per decision day");
  std::vector<double> out;
  out.reserve(days.size());
  int held = 0;
  for (std::size_t k = 0; k < days.size(); ++k) {
    const int pos = positions[k];
    out.push_back(pos * series.next_day_return(days[k]) - trade_cost * std::abs(pos - held));
    held = pos;
  }
  return out;
}

std::vector<double> coalition_return_series(const TradingSystem& system, Coalition s,
                                            DayRange window, double trade_cost,
                                            std::uint64_t* executions) {
  const auto days = decision_days(window);
  std::vector<int> positions;
  std::uint64_t runs = 0;
  for (std::size_t d : days) {
    const auto decision = system.replay(d, s, runs);
    positions.push_back(decision ? decision_to_position(decision->decision) : 0);
  }
  if (executions != nullptr) *executions += runs;
  return strategy_returns(system.data().series, days, positions, trade_cost);
}

// --- games ------------------------------------------------------------------

WindowGame::WindowGame(const TradingSystem& system, DayRange window, TradingCosts costs,
                       GhmOptions options)
    : system_(&system), window_(window), costs_(costs), options_(options),
      days_(decision_days(window)) {
  if (window.last < window.first || window.days() < 2) {
    fail(Errc::WindowTooShort, "a window needs at least two trading days");
  }
}

std::vector<double> WindowGame::values(std::span<const Coalition> viable) {
  const auto& graph = system_->graph();
  std::vector<std::vector<int>> positions(viable.size());
  grand_outputs_.clear();
  episodes_.clear();
  returns_.clear();
  const Coalition everyone = graph.everyone();
  for (std::size_t d : days_) {
    auto run = system_->run_day(d, viable, options_);
    episodes_.push_back({run.stats.agent_executions, run.stats.cache_hits});
    counters_.agent_executions += run.stats.agent_executions;
    counters_.cache_hits += run.stats.cache_hits;
    for (std::size_t k = 0; k < viable.size(); ++k) {
      positions[k].push_back(sink_position(run.sink_outputs[k]));
    }
    if (std::find(viable.begin(), viable.end(), everyone) != viable.end()) {
      std::map<AgentId, AgentOutput> outs;
      for (AgentId a = 0; a < graph.size(); ++a) {
        const Coalition up = detail::key_configuration(
            graph, a, everyone & earlier_layers(graph, a), options_);
        outs.emplace(a, run.cache.at({a, up}));
      }
      grand_outputs_.push_back(std::move(outs));
    }
  }
  std::vector<double> values;
  values.reserve(viable.size());
  for (std::size_t k = 0; k < viable.size(); ++k) {
    auto series = strategy_returns(system_->data().series, days_, positions[k], costs_.trade_cost);
    values.push_back(sharpe(series, costs_.rf_daily));
    returns_.emplace(viable[k], std::move(series));
  }
  values_ = values;
  return values;
}

ExactWindowGame::ExactWindowGame(const TradingSystem& system, DayRange window, TradingCosts costs)
    : system_(&system), window_(window), costs_(costs) {
  if (window.last < window.first || window.days() < 2) {
    fail(Errc::WindowTooShort, "a window needs at least two trading days");
  }
}

double ExactWindowGame::value(Coalition s) {
  std::uint64_t runs = 0;
  const auto series = coalition_return_series(*system_, s, window_, costs_.trade_cost, &runs);
  counters_.agent_executions += runs;
  return sharpe(series, costs_.rf_daily);
}

std::string_view engine_name(Engine e) {
  switch (e) {
    case Engine::Exact: return "exact";
    case Engine::Dag: return "dag";
    case Engine::Both: return "both";
  }
  return "dag";
}

Engine parse_engine(std::string_view text) {
  for (Engine e : {Engine::Exact, Engine::Dag, Engine::Both}) {
    if (engine_name(e) == text) return e;
  }
  fail(Errc::ConfigError, "unknown engine '" + std::string(text) + "' (exact|dag|both)");
}

// --- backtest driver ----------------------------------------------------------

StrategyMetrics make_strategy(std::string name, std::vector<double> returns) {
  StrategyMetrics m;
  m.name = std::move(name);
  const auto eq = equity_curve(returns);
  m.total_return = total_return(eq);
  m.sharpe_annualized = returns.size() >= 2 ? annualized_sharpe(returns) : 0.0;
  m.max_drawdown = max_drawdown(eq);
  m.returns = std::move(returns);
  return m;
}

BacktestResult run_backtest(const WorkflowGraph& graph, const std::vector<Role>& roles,
                            const MarketData& data, const BacktestConfig& config,
                            const Reflector& reflector, const ExecutionObserver& observer) {
  if (config.window_len < 2) fail(Errc::ConfigError, "window_len must be at least 2");
  const std::size_t total_days = data.series.size();
  const std::size_t window_count = total_days / config.window_len;
  if (window_count == 0) {
    fail(Errc::InsufficientData, fmt::format("{} trading days cannot fill a {}-day window",
                                             total_days, config.window_len));
  }

  BacktestResult result;
  result.symbol = data.series.symbol;
  result.total_days = total_days;
  result.window_len = config.window_len;
  result.engine = config.engine;
  result.unused_trailing_days = total_days - window_count * config.window_len;
  for (const auto& bar : data.series.rows) result.dates.push_back(format_date(bar.date));

  TradingSystem system(graph, make_mock_team(graph, roles, config.mock), data);
  if (observer) system.set_observer(observer);
  result.agent_names = system.agent_names();
  const auto viable = enumerate_viable(graph, config.parallelism);
  const Coalition everyone = graph.everyone();
  const auto grand_it = std::find(viable.begin(), viable.end(), everyone);
  if (grand_it == viable.end()) fail(Errc::ExecutorFailure, "grand coalition is not viable");
  const std::size_t grand_index = static_cast<std::size_t>(grand_it - viable.begin());

  auto prompts = system.prompts();
  for (const auto& p : prompts) result.prompt_lineage.push_back({p});

  GhmOptions ghm;
  ghm.parallelism = config.parallelism;
  std::vector<double> cgopo_returns;
  std::vector<std::size_t> all_days;

  for (std::size_t w = 0; w < window_count; ++w) {
    const DayRange window{w * config.window_len, w * config.window_len + config.window_len - 1};
    WindowReport report;
    report.index = w;
    report.window = window;
    report.first_date = result.dates[window.first];
    report.last_date = result.dates[window.last];
    report.viable = viable;

    WindowGame game(system, window, config.costs, ghm);
    AttributionResult attribution = shapley_dag(graph, game, config.parallelism);
    report.coalition_sharpe = game.last_values();
    report.grand_value = report.coalition_sharpe[grand_index];
    report.grand_returns = game.returns().at(everyone);
    report.metrics = window_metrics(report.grand_returns, config.costs.rf_daily);
    for (const auto& e : game.episodes()) report.executions_per_episode.push_back(e.agent_executions);
    report.shapley = attribution.values;
    report.coalitions_total = attribution.coalitions_total;
    report.coalitions_evaluated = attribution.coalition_evaluations;
    report.agent_executions = attribution.agent_executions;
    report.cache_hits = attribution.cache_hits;

    if (config.engine != Engine::Dag) {
      ExactWindowGame exact_game(system, window, config.costs);
      const auto exact = shapley_exact(exact_game, graph.size());
      report.shapley_exact = exact.values;
      report.exact_agent_executions = exact.agent_executions;
      if (config.engine == Engine::Exact) {
        attribution.values = exact.values;
        report.shapley = exact.values;
        report.coalitions_evaluated = exact.coalition_evaluations;
        report.agent_executions = exact.agent_executions;
        report.cache_hits = 0;
      }
    }

    const auto days = game.days();
    for (std::size_t k = 0; k < days.size(); ++k) {
      const auto& outs = game.grand_outputs()[k];
      for (AgentId a = 0; a < graph.size(); ++a) {
        result.history.push_back({days[k], a, state_digest(system, days[k], a, outs),
                                  describe_output(outs.at(a)), report.grand_returns[k]});
      }
    }

    auto record = run_cycle(w, window, result.agent_names, attribution, result.history, prompts,
                            reflector, config.cycle);
    report.triggered = record.triggered;
    report.bottleneck = record.bottleneck;
    if (record.triggered && record.lessons) {
      const AgentId target = record.lessons->target;
      result.prompt_lineage[target].push_back(prompts[target]);
      system.set_prompts(prompts);
    }
    result.cycles.append(std::move(record));

    cgopo_returns.insert(cgopo_returns.end(), report.grand_returns.begin(), report.grand_returns.end());
    all_days.insert(all_days.end(), days.begin(), days.end());
    result.windows.push_back(std::move(report));
  }

  // Prompt-frozen comparator: only the grand coalition is needed.
  TradingSystem frozen(graph, make_mock_team(graph, roles, config.mock), data);
  std::vector<double> frozen_returns;
  const std::vector<Coalition> grand_only{everyone};
  for (std::size_t w = 0; w < window_count; ++w) {
    const DayRange window{w * config.window_len, w * config.window_len + config.window_len - 1};
    WindowGame game(frozen, window, config.costs, ghm);
    game.values(grand_only);
    const auto& r = game.returns().at(everyone);
    result.frozen_window_returns.push_back(r);
    frozen_returns.insert(frozen_returns.end(), r.begin(), r.end());
  }

  const auto closes = data.series.closes();
  auto baseline = [&](const std::vector<int>& daily_positions) {
    std::vector<int> picked;
    for (std::size_t d : all_days) picked.push_back(daily_positions[d]);
    return strategy_returns(data.series, all_days, picked, config.costs.trade_cost);
  };
  const auto& bp = config.baselines;
  result.strategies.push_back(make_strategy("CG-OPO", std::move(cgopo_returns)));
  result.strategies.push_back(make_strategy("w/o CG-OPO", std::move(frozen_returns)));
  result.strategies.push_back(make_strategy("Buy&Hold", baseline(buy_and_hold_positions(total_days))));
  result.strategies.push_back(make_strategy(
      "MACD", baseline(macd_positions(closes, bp.macd_fast, bp.macd_slow, bp.macd_signal))));
  result.strategies.push_back(
      make_strategy("SMA", baseline(sma_crossover_positions(closes, bp.sma_fast, bp.sma_slow))));
  return result;
}

// --- reports ----------------------------------------------------------------

std::string format_summary(const BacktestResult& r) {
  std::string out = fmt::format(
      "symbol {}  days {}  window_len {}  windows {}  unused_trailing_days {}  engine {}\n",
      r.symbol, r.total_days, r.window_len, r.windows.size(), r.unused_trailing_days,
      engine_name(r.engine));
  std::size_t triggered = 0;
  for (const auto& rec : r.cycles.records()) triggered += rec.triggered ? 1 : 0;
  out += fmt::format("optimization cycles {}  triggered {}\n\n", r.cycles.records().size(), triggered);
  out += fmt::format("{:<12} {:>12} {:>12} {:>12}\n", "strategy", "return", "sharpe", "max_dd");
  for (const auto& s : r.strategies) {
    out += fmt::format("{:<12} {:>11.4f}% {:>12.4f} {:>11.4f}%\n", s.name, 100.0 * s.total_return,
                       s.sharpe_annualized, 100.0 * s.max_drawdown);
  }
  return out;
}

std::string format_window_report(const WindowReport& w, const WorkflowGraph& graph) {
  std::string out = fmt::format("window {}  days {}..{}  dates {}..{}\n", w.index, w.window.first,
                                w.window.last, w.first_date, w.last_date);
  out += fmt::format("grand coalition: sharpe_raw {:.10f}  total_return {:.10f}  max_drawdown {:.10f}\n",
                     w.grand_value, w.metrics.total_return, w.metrics.max_drawdown);
  out += fmt::format(
      "cost: coalitions_total {}  coalitions_evaluated {}  agent_executions {}  cache_hits {}  "
      "episodes {}\n",
      w.coalitions_total, w.coalitions_evaluated, w.agent_executions, w.cache_hits,
      w.executions_per_episode.size());
  if (w.shapley_exact) {
    double diff = 0.0;
    for (std::size_t a = 0; a < w.shapley.size(); ++a) {
      diff = std::max(diff, std::abs(w.shapley[a] - (*w.shapley_exact)[a]));
    }
    out += fmt::format("exact engine: agent_executions {}  max_abs_diff {:.3e}\n",
                       w.exact_agent_executions, diff);
  }
  out += "shapley:\n";
  for (std::size_t a = 0; a < w.shapley.size(); ++a) {
    out += fmt::format("  {:<8} {:+.10f}\n", graph.name(static_cast<AgentId>(a)), w.shapley[a]);
  }
  out += fmt::format("bottleneck: {} ({})\n",
                     w.bottleneck ? graph.name(*w.bottleneck) : std::string("none"),
                     w.triggered ? "triggered" : "not triggered");
  out += "coalitions:\n";
  for (std::size_t k = 0; k < w.viable.size(); ++k) {
    out += fmt::format("  {:<36} {:+.10f}\n", format_coalition(graph, w.viable[k]),
                       w.coalition_sharpe[k]);
  }
  return out;
}

void write_backtest_reports(const BacktestResult& result, const WorkflowGraph& graph,
                            const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "windows", ec);
  std::filesystem::create_directories(out_dir / "prompts", ec);
  if (ec) fail(Errc::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  for (const auto& w : result.windows) {
    write_file(out_dir / "windows" / fmt::format("window_{:03d}.txt", w.index),
               format_window_report(w, graph));
  }
  write_file(out_dir / "summary.txt", format_summary(result));
  write_file(out_dir / "cycles.jsonl", result.cycles.to_jsonl(result.agent_names));
  write_file(out_dir / "lessons.jsonl", result.cycles.lessons_jsonl(result.agent_names));

  std::string history;
  for (const auto& h : result.history) {
    history += nlohmann::json{{"day", h.day},
                              {"date", result.dates.at(h.day)},
                              {"agent", result.agent_names.at(h.agent)},
                              {"state", h.state},
                              {"action", h.action},
                              {"reward", h.reward}}
                   .dump() +
               "\n";
  }
  write_file(out_dir / "history.jsonl", history);

  for (std::size_t a = 0; a < result.prompt_lineage.size(); ++a) {
    const auto dir = out_dir / "prompts" / result.agent_names[a];
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(Errc::IoError, "cannot create " + dir.string());
    for (const auto& p : result.prompt_lineage[a]) {
      write_file(dir / fmt::format("v{}.txt", p.version), render_prompt(p) + "\n");
    }
  }
}

}  // namespace agentcredit
