#include "agentcredit/coalition.hpp"

#include <algorithm>
#include <future>
#include <string>

#include "agentcredit/error.hpp"

namespace agentcredit {

ViabilityReport check_viability(const WorkflowGraph& graph, Coalition s) {
  ViabilityReport r;
  const AgentId sink = graph.sink();
  r.has_trader = s.contains(sink);
  const Coalition sources = s & graph.sources();
  r.has_source = !sources.empty();
  if (r.has_trader && r.has_source) {
    sources.for_each([&](AgentId src) {
      if (!r.connected && path_exists(graph, s, src, sink)) r.connected = true;
    });
  }
  r.viable = r.has_trader && r.has_source && r.connected;
  return r;
}

namespace {

void require_enumerable(const WorkflowGraph& graph) {
  if (graph.size() > kMaxEnumerableAgents) {
    fail(Errc::GraphTooLarge, std::to_string(graph.size()) + " agents; exhaustive enumeration "
                                                             "supports at most " +
                                  std::to_string(kMaxEnumerableAgents));
  }
}

std::vector<Coalition> scan(const WorkflowGraph& graph, std::uint64_t begin, std::uint64_t end) {
  std::vector<Coalition> out;
  for (std::uint64_t bits = begin; bits < end; ++bits) {
    const Coalition s(bits);
    if (is_viable(graph, s)) out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<Coalition> enumerate_viable(const WorkflowGraph& graph, std::size_t parallelism) {
  require_enumerable(graph);
  const std::uint64_t total = std::uint64_t{1} << graph.size();
  parallelism = std::clamp<std::size_t>(parallelism, 1, 64);
  if (parallelism == 1 || total < 1024) return scan(graph, 0, total);

  const std::uint64_t chunk = (total + parallelism - 1) / parallelism;
  std::vector<std::future<std::vector<Coalition>>> parts;
  for (std::uint64_t begin = 0; begin < total; begin += chunk) {
    parts.push_back(std::async(std::launch::async, scan, std::cref(graph), begin,
                               std::min(total, begin + chunk)));
  }
  std::vector<Coalition> out;
  for (auto& part : parts) {
    auto chunk_result = part.get();
    out.insert(out.end(), chunk_result.begin(), chunk_result.end());
  }
  return out;
}

CoalitionCounts coalition_counts(const WorkflowGraph& graph) {
  CoalitionCounts c;
  require_enumerable(graph);
  c.total = std::uint64_t{1} << graph.size();
  c.viable = enumerate_viable(graph).size();
  c.reduction_fraction = 1.0 - static_cast<double>(c.viable) / static_cast<double>(c.total);
  return c;
}

}  // namespace agentcredit
