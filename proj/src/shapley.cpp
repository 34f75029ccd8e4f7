#include "agentcredit/shapley.hpp"

#include <cmath>
#include <string>

#include "agentcredit/coalition.hpp"
#include "agentcredit/error.hpp"

namespace agentcredit {

namespace {

constexpr std::size_t kMaxWeightAgents = 60;

std::int64_t binomial(std::size_t n, std::size_t k) {
  if (k > n - k) k = n - k;
  std::int64_t c = 1;
  // c holds C(n-k+i, i) after step i, so the division is exact.
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<std::int64_t>(n - k + i) / static_cast<std::int64_t>(i);
  }
  return c;
}

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

Rational shapley_weight(std::size_t s, std::size_t n) {
  if (n < 1 || s > n - 1 || n > kMaxWeightAgents) {
    fail(Errc::InvalidSize, "weight(" + std::to_string(s) + ", " + std::to_string(n) + ")");
  }
  // s!(n-s-1)!/n! = 1 / (n * C(n-1, s))
  return Rational(1, static_cast<std::int64_t>(n) * binomial(n - 1, s));
}

double AttributionResult::sum() const {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

std::vector<double> FunctionViableGame::values(std::span<const Coalition> viable) {
  std::vector<double> out;
  out.reserve(viable.size());
  for (Coalition s : viable) out.push_back(fn_(s));
  return out;
}

std::vector<double> shapley_from_table(std::span<const double> table, std::size_t n) {
  if (n == 0 || n > kMaxEnumerableAgents || table.size() != (std::size_t{1} << n)) {
    fail(Errc::InvalidSize, "value table does not match agent count");
  }
  std::vector<double> weights(n);
  for (std::size_t s = 0; s < n; ++s) weights[s] = boost::rational_cast<double>(shapley_weight(s, n));

  std::vector<std::vector<CompensatedSum>> by_size(n, std::vector<CompensatedSum>(n));
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    const Coalition s(bits);
    const std::size_t size = s.size();
    if (size == n) continue;
    const double base = table[bits];
    for (AgentId i = 0; i < n; ++i) {
      if (s.contains(i)) continue;
      by_size[i][size].add(table[bits | (std::uint64_t{1} << i)] - base);
    }
  }

  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum acc;
    for (std::size_t s = 0; s < n; ++s) acc.add(weights[s] * by_size[i][s].value());
    phi[i] = acc.value();
  }
  return phi;
}

AttributionResult shapley_exact(CoalitionEvaluator& v, std::size_t n) {
  if (n == 0 || n > kMaxEnumerableAgents) {
    fail(Errc::TooManyAgents, "exact Shapley supports 1.." + std::to_string(kMaxEnumerableAgents) +
                                  " agents, got " + std::to_string(n));
  }
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<double> table(total);
  for (std::uint64_t bits = 0; bits < total; ++bits) table[bits] = v.value(Coalition(bits));

  AttributionResult r;
  r.values = shapley_from_table(table, n);
  r.coalitions_total = total;
  r.coalition_evaluations = total;
  const auto counters = v.counters();
  r.agent_executions = counters.agent_executions;
  r.cache_hits = counters.cache_hits;
  r.elapsed = std::chrono::steady_clock::now() - start;
  return r;
}

AttributionResult shapley_dag(const WorkflowGraph& graph, ViableGame& game,
                              std::size_t parallelism) {
  const auto start = std::chrono::steady_clock::now();
  const auto viable = enumerate_viable(graph, parallelism);
  const auto values = game.values(viable);
  if (values.size() != viable.size()) {
    fail(Errc::ExecutorFailure, "game returned " + std::to_string(values.size()) +
                                    " values for " + std::to_string(viable.size()) +
                                    " viable coalitions");
  }
  const std::size_t n = graph.size();
  std::vector<double> table(std::size_t{1} << n, 0.0);
  for (std::size_t k = 0; k < viable.size(); ++k) table[viable[k].bits()] = values[k];

  AttributionResult r;
  r.values = shapley_from_table(table, n);
  r.coalitions_total = table.size();
  r.coalition_evaluations = viable.size();
  const auto counters = game.counters();
  r.agent_executions = counters.agent_executions;
  r.cache_hits = counters.cache_hits;
  r.elapsed = std::chrono::steady_clock::now() - start;
  return r;
}

Coalition upstream_configuration(const WorkflowGraph& graph, Coalition s, std::size_t layer_index) {
  if (layer_index < 1 || layer_index > graph.layer_count()) {
    fail(Errc::BadLayerIndex, "layer " + std::to_string(layer_index) + " of " +
                                  std::to_string(graph.layer_count()));
  }
  Coalition earlier;
  for (std::size_t j = 0; j + 1 < layer_index; ++j) earlier = earlier | graph.layer_mask(j);
  return s & earlier;
}

PredictedCost predicted_cost(std::span<const std::size_t> layer_sizes,
                             const std::vector<bool>& mandatory_flags) {
  if (layer_sizes.empty()) fail(Errc::EmptyLayer, "no layers");
  if (mandatory_flags.size() != layer_sizes.size()) {
    fail(Errc::InvalidSize, "mandatory flag count does not match layer count");
  }
  PredictedCost cost;
  std::uint64_t configs = 1;
  for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
    if (layer_sizes[i] == 0) fail(Errc::EmptyLayer, "layer " + std::to_string(i + 1) + " is empty");
    if (layer_sizes[i] >= 63) fail(Errc::InvalidSize, "layer too wide");
    cost.unique_configs.push_back(configs);
    cost.total_executions += configs * layer_sizes[i];
    configs *= (std::uint64_t{1} << layer_sizes[i]) - (mandatory_flags[i] ? 1 : 0);
  }
  cost.viable_coalitions = configs;
  return cost;
}

PredictedCost predicted_cost(const WorkflowGraph& graph) {
  std::vector<std::size_t> sizes;
  for (const auto& layer : graph.layers()) sizes.push_back(layer.size());
  return predicted_cost(sizes, graph.mandatory_flags());
}

ClassicalCost classical_cost(std::size_t n) {
  if (n < 1 || n > 62) fail(Errc::InvalidSize, "classical cost needs 1..62 agents");
  return {std::uint64_t{1} << n, static_cast<std::uint64_t>(n) << (n - 1)};
}

}  // namespace agentcredit
