#include "agentcredit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "agentcredit/coalition.hpp"
#include "agentcredit/shapley.hpp"

namespace agentcredit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::IoError:
      return kIoError;
    case Errc::CycleDetected:
    case Errc::MultipleSinks:
    case Errc::NoSource:
    case Errc::CrossLayerViolation:
    case Errc::LayerPartitionInvalid:
    case Errc::UnknownAgent:
    case Errc::DuplicateAgent:
    case Errc::TooManyAgents:
    case Errc::GraphTooLarge:
    case Errc::InvalidSize:
    case Errc::BadLayerIndex:
    case Errc::EmptyLayer:
    case Errc::WindowTooShort:
    case Errc::ParseError:
    case Errc::NonPositivePrice:
    case Errc::DuplicateDate:
    case Errc::UnsortedDates:
    case Errc::InsufficientData:
    case Errc::ConfigError:
      return kConfigError;
    default:
      return kRuntimeError;
  }
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::ParseError, fmt::format("{}: {}", what, e.what()));
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) fail(Errc::ConfigError, message);
}

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> known,
                         std::string_view where) {
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      fail(Errc::ConfigError, fmt::format("unknown key '{}' in {}", key, where));
    }
  }
}

template <typename T>
T get_as(const json& j, std::string_view key) {
  try {
    return j.at(std::string(key)).get<T>();
  } catch (const json::exception& e) {
    fail(Errc::ConfigError, fmt::format("bad value for '{}': {}", key, e.what()));
  }
}

// Runs `body`, maps library errors to exit codes and prints them.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

std::string sorted_members(const WorkflowGraph& graph, Coalition c) {
  std::vector<std::string> names;
  c.for_each([&](AgentId a) { names.push_back(graph.name(a)); });
  std::sort(names.begin(), names.end());
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ' ';
    out += n;
  }
  return out.empty() ? "(empty)" : out;
}

std::string join_counts(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (auto x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

double percent_reduction(double part, double whole) {
  return whole > 0.0 ? 100.0 * (1.0 - part / whole) : 0.0;
}

WorkflowGraph load_graph_or_reference(const RunConfig& config, std::vector<Role>& roles) {
  if (!config.graph_path) {
    auto graph = reference_trading_graph();
    roles = reference_roles(graph);
    return graph;
  }
  auto file = load_graph_file(*config.graph_path);
  roles = file.roles ? *file.roles : default_roles(file.graph);
  return std::move(file.graph);
}

}  // namespace

// --- files --------------------------------------------------------------------

GraphFile parse_graph_json(const std::string& text) {
  const json j = parse_json(text, "graph file");
  require(j.is_object(), "graph file must be a JSON object");
  reject_unknown_keys(j, {"layers", "edges", "roles"}, "graph file");
  require(j.contains("layers") && j["layers"].is_array(), "graph file needs a 'layers' array");

  std::vector<std::vector<std::string>> layers;
  std::vector<bool> mandatory;
  for (const auto& layer : j["layers"]) {
    require(layer.is_object() && layer.contains("agents"), "each layer needs an 'agents' list");
    reject_unknown_keys(layer, {"agents", "mandatory"}, "layer");
    layers.push_back(get_as<std::vector<std::string>>(layer, "agents"));
    mandatory.push_back(layer.contains("mandatory") ? get_as<bool>(layer, "mandatory") : true);
  }

  std::vector<std::pair<std::string, std::string>> edges;
  require(j.contains("edges"), "graph file needs 'edges' (a list of pairs or \"full\")");
  if (j["edges"].is_string()) {
    require(j["edges"] == "full", "the only edge shorthand is \"full\"");
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
      for (const auto& from : layers[l]) {
        for (const auto& to : layers[l + 1]) edges.emplace_back(from, to);
      }
    }
  } else {
    for (const auto& e : j["edges"]) {
      require(e.is_array() && e.size() == 2 && e[0].is_string() && e[1].is_string(),
              "each edge must be a pair of agent names");
      edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }

  GraphFile file{build_graph(layers, edges, mandatory), std::nullopt};
  if (j.contains("roles")) {
    require(j["roles"].is_object(), "'roles' must map agent names to roles");
    std::vector<std::optional<Role>> assigned(file.graph.size());
    for (const auto& [name, value] : j["roles"].items()) {
      const AgentId a = file.graph.id(name);
      require(value.is_string(), "role of '" + name + "' must be a string");
      const auto role = parse_role(value.get<std::string>());
      require(role.has_value(), "unknown role '" + value.get<std::string>() + "'");
      assigned[a] = *role;
    }
    std::vector<Role> roles;
    for (AgentId a = 0; a < file.graph.size(); ++a) {
      require(assigned[a].has_value(), "no role given for '" + file.graph.name(a) + "'");
      roles.push_back(*assigned[a]);
    }
    file.roles = std::move(roles);
  }
  return file;
}

GraphFile load_graph_file(const fs::path& path) { return parse_graph_json(read_file(path)); }

RunConfig parse_run_config(const std::string& text, const fs::path& base_dir) {
  const json j = parse_json(text, "run config");
  require(j.is_object(), "run config must be a JSON object");
  reject_unknown_keys(j,
                      {"graph", "data", "window_len", "tau", "rf_daily", "trade_cost",
                       "lesson_cap", "engine", "out", "parallel", "seed", "window"},
                      "run config");
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  RunConfig c;
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  c.data.synth.seed = c.seed;
  if (j.contains("graph")) c.graph_path = resolve(get_as<std::string>(j, "graph"));
  if (j.contains("window_len")) c.window_len = get_as<std::size_t>(j, "window_len");
  if (j.contains("tau")) c.tau = get_as<double>(j, "tau");
  if (j.contains("rf_daily")) c.rf_daily = get_as<double>(j, "rf_daily");
  if (j.contains("trade_cost")) c.trade_cost = get_as<double>(j, "trade_cost");
  if (j.contains("lesson_cap")) c.lesson_cap = get_as<std::size_t>(j, "lesson_cap");
  if (j.contains("engine")) c.engine = parse_engine(get_as<std::string>(j, "engine"));
  if (j.contains("out")) c.out_dir = resolve(get_as<std::string>(j, "out"));
  if (j.contains("parallel")) c.parallelism = get_as<std::size_t>(j, "parallel");
  if (j.contains("window")) c.window_index = get_as<std::size_t>(j, "window");

  if (j.contains("data")) {
    const json& d = j["data"];
    require(d.is_object(), "'data' must be an object");
    reject_unknown_keys(d, {"synth", "market_csv", "features_csv", "symbol"}, "data");
    if (d.contains("symbol")) c.data.symbol = get_as<std::string>(d, "symbol");
    if (d.contains("market_csv")) c.data.market_csv = resolve(get_as<std::string>(d, "market_csv"));
    if (d.contains("features_csv")) {
      c.data.features_csv = resolve(get_as<std::string>(d, "features_csv"));
    }
    if (d.contains("synth")) {
      const json& s = d["synth"];
      require(s.is_object(), "'synth' must be an object");
      reject_unknown_keys(s, {"seed", "days", "regime", "signal_strength", "volatility"}, "synth");
      if (s.contains("seed")) c.data.synth.seed = get_as<std::uint64_t>(s, "seed");
      if (s.contains("days")) c.data.synth.days = get_as<std::size_t>(s, "days");
      if (s.contains("regime")) c.data.synth.regime = parse_regime(get_as<std::string>(s, "regime"));
      if (s.contains("signal_strength")) {
        c.data.synth.signal_strength = get_as<double>(s, "signal_strength");
      }
      if (s.contains("volatility")) c.data.synth.volatility = get_as<double>(s, "volatility");
    }
  }
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  return parse_run_config(read_file(path), path.parent_path());
}

void validate_run_config(const RunConfig& c) {
  require(c.window_len >= 2, fmt::format("window_len must be at least 2 (got {})", c.window_len));
  require(c.parallelism >= 1, "parallel must be at least 1");
  require(c.data.market_csv.has_value() == c.data.features_csv.has_value(),
          "market_csv and features_csv must be given together");
  require(std::isfinite(c.tau) && std::isfinite(c.rf_daily) && std::isfinite(c.trade_cost),
          "tau, rf_daily and trade_cost must be finite");
  require(c.trade_cost >= 0.0, "trade_cost must be non-negative");
  require(c.data.synth.signal_strength >= 0.0 && c.data.synth.signal_strength <= 1.0,
          "signal_strength must lie in [0, 1]");
  require(c.data.synth.volatility > 0.0, "volatility must be positive");
}

MarketData load_market_data(const DataSource& source) {
  if (source.market_csv) {
    MarketData data;
    data.series = load_market_csv(*source.market_csv, source.symbol);
    data.features = load_feature_csv(*source.features_csv, data.series);
    return data;
  }
  auto [series, features] = synthesize_market(source.synth);
  if (!source.symbol.empty()) series.symbol = source.symbol;
  return {std::move(series), std::move(features)};
}

BacktestConfig to_backtest_config(const RunConfig& c) {
  BacktestConfig b;
  b.window_len = c.window_len;
  b.costs = {c.rf_daily, c.trade_cost};
  b.cycle = {c.tau, c.lesson_cap};
  b.engine = c.engine;
  b.parallelism = c.parallelism;
  b.mock.seed = c.seed;
  return b;
}

// --- subcommands ----------------------------------------------------------------

int cmd_validate(const fs::path& graph_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto file = load_graph_file(graph_path);
    const auto& g = file.graph;
    out << fmt::format("{} layers, {} sources, sink {}, {} edges\n", g.layer_count(),
                       g.sources().size(), g.name(g.sink()), g.edges().size());
    for (std::size_t l = 0; l < g.layer_count(); ++l) {
      std::string names;
      for (AgentId a : g.layer(l)) names += (names.empty() ? "" : " ") + g.name(a);
      out << fmt::format("layer {} ({}): {}\n", l + 1, g.mandatory(l) ? "mandatory" : "optional",
                         names);
    }
    if (file.roles) {
      // Roles are checked against the topology the same way a run would.
      make_mock_team(g, *file.roles, {});
      out << "roles: ok\n";
    }
    return static_cast<int>(kOk);
  });
}

int cmd_coalitions(const fs::path& graph_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto file = load_graph_file(graph_path);
    const auto& g = file.graph;
    const auto viable = enumerate_viable(g);
    for (Coalition c : viable) out << sorted_members(g, c) << "\n";
    const auto counts = coalition_counts(g);
    out << fmt::format("{}/{} ({:.1f}% pruned)\n", counts.viable, counts.total,
                       100.0 * counts.reduction_fraction);
    return static_cast<int>(kOk);
  });
}

int cmd_shapley(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_run_config(config);
    std::vector<Role> roles;
    const auto graph = load_graph_or_reference(config, roles);
    const auto data = load_market_data(config.data);
    const std::size_t windows = data.series.size() / config.window_len;
    require(config.window_index < windows,
            fmt::format("window {} does not exist ({} full windows of {} days)",
                        config.window_index, windows, config.window_len));
    const DayRange window{config.window_index * config.window_len,
                          (config.window_index + 1) * config.window_len - 1};

    MockParams mock;
    mock.seed = config.seed;
    TradingSystem system(graph, make_mock_team(graph, roles, mock), data);
    const TradingCosts costs{config.rf_daily, config.trade_cost};
    const std::size_t episodes = decision_days(window).size();
    const std::size_t n = graph.size();

    std::optional<AttributionResult> exact, dag;
    std::uint64_t dag_per_episode = 0;
    if (config.engine != Engine::Dag) {
      ExactWindowGame game(system, window, costs);
      exact = shapley_exact(game, n);
    }
    if (config.engine != Engine::Exact) {
      GhmOptions ghm;
      ghm.parallelism = config.parallelism;
      WindowGame game(system, window, costs, ghm);
      dag = shapley_dag(graph, game, config.parallelism);
      dag_per_episode = game.episodes().front().agent_executions;
    }

    out << fmt::format("window {}  days {}..{}  dates {}..{}  episodes {}\n", config.window_index,
                       window.first, window.last, format_date(data.series.rows[window.first].date),
                       format_date(data.series.rows[window.last].date), episodes);
    out << fmt::format("{:<10}", "agent");
    if (exact) out << fmt::format(" {:>18}", "phi_exact");
    if (dag) out << fmt::format(" {:>18}", "phi_dag");
    out << "\n";
    for (AgentId a = 0; a < n; ++a) {
      out << fmt::format("{:<10}", graph.name(a));
      if (exact) out << fmt::format(" {:>+18.12f}", exact->values[a]);
      if (dag) out << fmt::format(" {:>+18.12f}", dag->values[a]);
      out << "\n";
    }
    const AttributionResult& any = dag ? *dag : *exact;
    out << fmt::format("sum phi {:+.12f}\n", any.sum());
    if (exact && dag) {
      double diff = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        diff = std::max(diff, std::abs(exact->values[a] - dag->values[a]));
      }
      out << fmt::format("max |phi_dag - phi_exact| {:.3e}\n", diff);
    }

    out << fmt::format("\ncost per episode\n{:<22} {:>12} {:>12}\n", "method", "coalitions",
                       "executions");
    const auto classical = classical_cost(n);
    if (exact) {
      out << fmt::format("{:<22} {:>12} {:>12}\n", "classical (measured)",
                         exact->coalition_evaluations, exact->agent_executions / episodes);
    } else {
      out << fmt::format("{:<22} {:>12} {:>12}\n", "classical (formula)", classical.coalitions,
                         classical.executions);
    }
    if (dag) {
      out << fmt::format("{:<22} {:>12} {:>12}\n", "GHM (measured)", dag->coalition_evaluations,
                         dag_per_episode);
      const auto predicted = predicted_cost(graph);
      out << fmt::format("{:<22} {:>12} {:>12}  U=[{}]{}\n", "GHM (predicted)",
                         predicted.viable_coalitions, predicted.total_executions,
                         join_counts(predicted.unique_configs),
                         predicted.total_executions == dag_per_episode &&
                                 predicted.viable_coalitions == dag->coalition_evaluations
                             ? ""
                             : "  (differs: layers not fully connected)");
      out << fmt::format("{:<22} {:>11.1f}% {:>11.1f}%\n", "reduction",
                         percent_reduction(static_cast<double>(dag->coalition_evaluations),
                                           static_cast<double>(classical.coalitions)),
                         percent_reduction(static_cast<double>(dag_per_episode),
                                           static_cast<double>(classical.executions)));
    }
    return static_cast<int>(kOk);
  });
}

namespace {

void print_cost_table(const PredictedCost& p, std::span<const std::size_t> sizes,
                      const std::vector<bool>& flags, std::ostream& out) {
  out << fmt::format("{:<6} {:>5} {:>10} {:>10} {:>11}\n", "layer", "size", "mandatory",
                     "configs", "executions");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out << fmt::format("{:<6} {:>5} {:>10} {:>10} {:>11}\n", i + 1, sizes[i],
                       flags[i] ? "yes" : "no", p.unique_configs[i],
                       p.unique_configs[i] * sizes[i]);
  }
  std::size_t n = 0;
  for (auto s : sizes) n += s;
  out << fmt::format("U=[{}]  total executions {}  viable coalitions {}\n",
                     join_counts(p.unique_configs), p.total_executions, p.viable_coalitions);
  if (n <= 60) {
    const auto c = classical_cost(n);
    out << fmt::format("classical: coalitions {}  executions {}  reduction {:.1f}%\n",
                       c.coalitions, c.executions,
                       percent_reduction(static_cast<double>(p.total_executions),
                                         static_cast<double>(c.executions)));
  }
}

}  // namespace

int cmd_cost(const std::vector<std::size_t>& layers, const std::vector<bool>& mandatory,
             std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require(!layers.empty(), "need at least one layer size");
    std::vector<bool> flags = mandatory.empty() ? std::vector<bool>(layers.size(), true) : mandatory;
    require(flags.size() == layers.size(), "one mandatory flag per layer");
    print_cost_table(predicted_cost(layers, flags), layers, flags, out);
    return static_cast<int>(kOk);
  });
}

int cmd_cost(const fs::path& graph_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto file = load_graph_file(graph_path);
    std::vector<std::size_t> sizes;
    for (const auto& l : file.graph.layers()) sizes.push_back(l.size());
    print_cost_table(predicted_cost(file.graph), sizes, file.graph.mandatory_flags(), out);
    return static_cast<int>(kOk);
  });
}

int cmd_backtest(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_run_config(config);
    std::vector<Role> roles;
    const auto graph = load_graph_or_reference(config, roles);
    const auto data = load_market_data(config.data);
    MockReflector reflector;
    const auto result = run_backtest(graph, roles, data, to_backtest_config(config), reflector);
    write_backtest_reports(result, graph, config.out_dir);
    out << format_summary(result);
    out << "reports written to " << config.out_dir.string() << "\n";
    return static_cast<int>(kOk);
  });
}

// --- argument parsing -------------------------------------------------------------

namespace {

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> parallel;
  std::optional<std::string> graph;
  std::optional<std::string> engine;
  std::optional<std::size_t> window_len;
  std::optional<std::size_t> window;
  std::optional<double> tau;
  std::optional<std::size_t> lesson_cap;
  std::optional<double> rf_daily;
  std::optional<double> trade_cost;
  std::optional<std::string> regime;
  std::optional<std::size_t> days;
  std::optional<double> signal_strength;
  std::optional<std::string> market_csv;
  std::optional<std::string> features_csv;
};

RunConfig resolve_config(const Overrides& o) {
  RunConfig c = o.config ? load_run_config(*o.config) : RunConfig{};
  if (o.seed) {
    c.seed = *o.seed;
    c.data.synth.seed = *o.seed;
  }
  if (o.out) c.out_dir = *o.out;
  if (o.parallel) c.parallelism = *o.parallel;
  if (o.graph) c.graph_path = *o.graph;
  if (o.engine) c.engine = parse_engine(*o.engine);
  if (o.window_len) c.window_len = *o.window_len;
  if (o.window) c.window_index = *o.window;
  if (o.tau) c.tau = *o.tau;
  if (o.lesson_cap) c.lesson_cap = *o.lesson_cap;
  if (o.rf_daily) c.rf_daily = *o.rf_daily;
  if (o.trade_cost) c.trade_cost = *o.trade_cost;
  if (o.regime) c.data.synth.regime = parse_regime(*o.regime);
  if (o.days) c.data.synth.days = *o.days;
  if (o.signal_strength) c.data.synth.signal_strength = *o.signal_strength;
  if (o.market_csv) c.data.market_csv = *o.market_csv;
  if (o.features_csv) c.data.features_csv = *o.features_csv;
  return c;
}

void add_run_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--graph", o.graph, "graph JSON file (default: built-in [3,3,1] reference)");
  sub->add_option("--engine", o.engine, "exact | dag | both");
  sub->add_option("--window-len", o.window_len, "trading days per window");
  sub->add_option("--regime", o.regime, "synthetic regime: bull | bear | sideways");
  sub->add_option("--days", o.days, "synthetic trading days");
  sub->add_option("--signal-strength", o.signal_strength, "synthetic feature/return correlation");
  sub->add_option("--market-csv", o.market_csv, "OHLCV csv (date,open,high,low,close,volume)");
  sub->add_option("--features-csv", o.features_csv, "features csv (date,sentiment,fundamental)");
  sub->add_option("--rf-daily", o.rf_daily, "daily risk-free rate");
  sub->add_option("--trade-cost", o.trade_cost, "cost per unit of position change");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topology-aware credit assignment for layered multi-agent trading workflows"};
  app.name("agentcredit");
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "JSON run config");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--seed", o.seed, "seed for mock agents and synthetic data");
  app.add_option("--parallel", o.parallel, "parallelism degree");

  std::string graph_path;
  auto* validate = app.add_subcommand("validate", "validate a graph file");
  validate->add_option("graph", graph_path, "graph JSON file")->required();

  auto* coalitions = app.add_subcommand("coalitions", "list viable coalitions of a graph");
  coalitions->add_option("graph", graph_path, "graph JSON file")->required();

  auto* shapley = app.add_subcommand("shapley", "attribute one window with exact and/or pruned Shapley");
  add_run_options(shapley, o);
  shapley->add_option("--window", o.window, "zero-based window index");

  std::vector<std::size_t> layer_sizes;
  std::vector<int> mandatory_flags;
  auto* cost = app.add_subcommand("cost", "predicted execution cost of a layered topology");
  cost->add_option("--layers", layer_sizes, "layer sizes, e.g. 3,3,1")->delimiter(',');
  cost->add_option("--mandatory", mandatory_flags, "per-layer 1/0 flags")->delimiter(',');
  cost->add_option("--graph", o.graph, "graph JSON file instead of --layers");

  auto* backtest = app.add_subcommand("backtest", "windowed backtest with optimization cycles");
  add_run_options(backtest, o);
  backtest->add_option("--tau", o.tau, "trigger threshold on the lowest contribution");
  backtest->add_option("--lesson-cap", o.lesson_cap, "lesson blocks kept per prompt (0 = all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  if (*validate) return cmd_validate(graph_path, out, err);
  if (*coalitions) return cmd_coalitions(graph_path, out, err);
  if (*cost) {
    if (o.graph) return cmd_cost(*o.graph, out, err);
    std::vector<bool> flags;
    for (int f : mandatory_flags) flags.push_back(f != 0);
    return cmd_cost(layer_sizes, flags, out, err);
  }
  RunConfig config;
  const int status = guarded(err, [&] {
    config = resolve_config(o);
    return static_cast<int>(kOk);
  });
  if (status != kOk) return status;
  if (*shapley) return cmd_shapley(config, out, err);
  return cmd_backtest(config, out, err);
}

}  // namespace agentcredit::cli
