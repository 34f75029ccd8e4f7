#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <boost/rational.hpp>

#include "agentcredit/coalition_set.hpp"
#include "agentcredit/graph.hpp"

namespace agentcredit {

using Rational = boost::rational<std::int64_t>;

// |S|!(n-|S|-1)!/n!, exact. Throws InvalidSize unless 0 <= s <= n-1.
Rational shapley_weight(std::size_t s, std::size_t n);

struct ExecutionCounters {
  std::uint64_t agent_executions = 0;
  std::uint64_t cache_hits = 0;
};

struct AttributionResult {
  std::vector<double> values;
  std::uint64_t coalitions_total = 0;
  std::uint64_t coalition_evaluations = 0;
  std::uint64_t agent_executions = 0;
  std::uint64_t cache_hits = 0;
  std::chrono::duration<double> elapsed{0};

  double sum() const;
};

// Characteristic function over all 2^n subsets. Must be deterministic.
class CoalitionEvaluator {
 public:
  virtual ~CoalitionEvaluator() = default;
  virtual double value(Coalition s) = 0;
  virtual ExecutionCounters counters() const { return {}; }
};

// Characteristic function that is only ever asked about viable coalitions;
// everything else is worth 0 by definition.
class ViableGame {
 public:
  virtual ~ViableGame() = default;
  // One value per entry of `viable`, same order.
  virtual std::vector<double> values(std::span<const Coalition> viable) = 0;
  virtual ExecutionCounters counters() const { return {}; }
};

class FunctionGame final : public CoalitionEvaluator {
 public:
  explicit FunctionGame(std::function<double(Coalition)> fn) : fn_(std::move(fn)) {}
  double value(Coalition s) override { return fn_(s); }

 private:
  std::function<double(Coalition)> fn_;
};

class FunctionViableGame final : public ViableGame {
 public:
  explicit FunctionViableGame(std::function<double(Coalition)> fn) : fn_(std::move(fn)) {}
  std::vector<double> values(std::span<const Coalition> viable) override;

 private:
  std::function<double(Coalition)> fn_;
};

// Shapley sum over a full value table indexed by bit pattern
// (table.size() == 2^n). Marginals are summed per coalition size with
// compensated summation, then weighted by the exact size weight.
std::vector<double> shapley_from_table(std::span<const double> table, std::size_t n);

// Classical Shapley: evaluates every subset exactly once.
AttributionResult shapley_exact(CoalitionEvaluator& v, std::size_t n);

// Pruned Shapley: asks `game` only about viable coalitions, non-viable
// coalitions enter the sum as 0 without evaluation.
AttributionResult shapley_dag(const WorkflowGraph& graph, ViableGame& game,
                              std::size_t parallelism = 1);

// S ∩ (L_1 ∪ ... ∪ L_{layer_index-1}); layer_index is 1-based.
Coalition upstream_configuration(const WorkflowGraph& graph, Coalition s, std::size_t layer_index);

struct PredictedCost {
  std::vector<std::uint64_t> unique_configs;
  std::uint64_t total_executions = 0;
  std::uint64_t viable_coalitions = 0;
};

// |U_i| = prod_{j<i} (2^|L_j| - delta_j); total = sum |U_i| |L_i|. Assumes
// full connectivity between consecutive layers.
PredictedCost predicted_cost(std::span<const std::size_t> layer_sizes,
                             const std::vector<bool>& mandatory_flags);

PredictedCost predicted_cost(const WorkflowGraph& graph);

struct ClassicalCost {
  std::uint64_t coalitions = 0;
  std::uint64_t executions = 0;
};

ClassicalCost classical_cost(std::size_t n);

}  // namespace agentcredit
