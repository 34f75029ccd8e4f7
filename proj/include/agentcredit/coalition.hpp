#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "agentcredit/coalition_set.hpp"
#include "agentcredit/graph.hpp"

namespace agentcredit {

// Exhaustive enumeration is capped at 2^24 subsets.
inline constexpr std::size_t kMaxEnumerableAgents = 24;

struct ViabilityReport {
  bool has_trader = false;
  bool has_source = false;
  bool connected = false;
  bool viable = false;
};

ViabilityReport check_viability(const WorkflowGraph& graph, Coalition s);

inline bool is_viable(const WorkflowGraph& graph, Coalition s) {
  return check_viability(graph, s).viable;
}

// Every viable coalition in ascending bit-pattern order. Throws GraphTooLarge
// above kMaxEnumerableAgents. With parallelism > 1 the subset counter is split
// into contiguous ranges and merged in order.
std::vector<Coalition> enumerate_viable(const WorkflowGraph& graph, std::size_t parallelism = 1);

struct CoalitionCounts {
  std::uint64_t total = 0;
  std::uint64_t viable = 0;
  double reduction_fraction = 0.0;
};

CoalitionCounts coalition_counts(const WorkflowGraph& graph);

}  // namespace agentcredit
