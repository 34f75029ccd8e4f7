#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agentcredit/coalition_set.hpp"

namespace agentcredit {

using Edge = std::pair<AgentId, AgentId>;

// Raw description of a workflow, by agent index. Agent names index the
// agents densely in the order given.
struct GraphSpec {
  std::vector<std::string> agents;
  std::vector<Edge> edges;
  std::vector<std::vector<AgentId>> layers;
  std::vector<bool> mandatory;
};

// Validated layered DAG of agents. Immutable after construction.
class WorkflowGraph {
 public:
  std::size_t size() const { return names_.size(); }
  std::size_t layer_count() const { return layers_.size(); }

  const std::string& name(AgentId a) const { return names_.at(a); }
  std::optional<AgentId> find(std::string_view name) const;
  AgentId id(std::string_view name) const;  // throws UnknownAgent

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::vector<AgentId>>& layers() const { return layers_; }
  const std::vector<AgentId>& layer(std::size_t j) const { return layers_.at(j); }
  // Zero-based layer of an agent.
  std::size_t layer_of(AgentId a) const { return layer_of_.at(a); }
  Coalition layer_mask(std::size_t j) const { return layer_masks_.at(j); }
  bool mandatory(std::size_t j) const { return mandatory_.at(j); }
  const std::vector<bool>& mandatory_flags() const { return mandatory_; }

  Coalition predecessors(AgentId a) const { return preds_.at(a); }
  Coalition successors(AgentId a) const { return succs_.at(a); }
  // Transitive predecessors, excluding the agent itself.
  Coalition ancestors(AgentId a) const { return ancestors_.at(a); }

  Coalition sources() const { return sources_; }
  bool is_source(AgentId a) const { return sources_.contains(a); }
  AgentId sink() const { return sink_; }
  Coalition everyone() const { return Coalition::all(size()); }

 private:
  friend WorkflowGraph build_graph(GraphSpec spec);

  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<AgentId>> layers_;
  std::vector<Coalition> layer_masks_;
  std::vector<std::size_t> layer_of_;
  std::vector<bool> mandatory_;
  std::vector<Coalition> preds_;
  std::vector<Coalition> succs_;
  std::vector<Coalition> ancestors_;
  Coalition sources_;
  AgentId sink_ = 0;
};

// Validates and freezes a graph. Sources and the sink are derived from
// degrees. Throws Error with CycleDetected, MultipleSinks, NoSource,
// CrossLayerViolation, LayerPartitionInvalid, UnknownAgent, DuplicateAgent
// or TooManyAgents.
WorkflowGraph build_graph(GraphSpec spec);

// Name-based convenience form. Layers list agent names; agent indices follow
// the order of first appearance across layers.
WorkflowGraph build_graph(const std::vector<std::vector<std::string>>& layers,
                          const std::vector<std::pair<std::string, std::string>>& edges,
                          std::vector<bool> mandatory = {});

// Kahn's algorithm, ties broken by ascending index.
std::vector<AgentId> topological_order(const WorkflowGraph& graph);

// Direct predecessors of `agent` that are members of `coalition`.
Coalition information_set(const WorkflowGraph& graph, AgentId agent, Coalition coalition);

// All agents reachable from `from` using only edges inside `coalition`
// (includes `from`). `from` must be a member.
Coalition reachable_within(const WorkflowGraph& graph, Coalition coalition, AgentId from);

bool path_exists(const WorkflowGraph& graph, Coalition coalition, AgentId from, AgentId to);

// Visits agents in topological order and, for each, its outgoing edges.
// Returns the number of (agent, edge) visits performed.
struct ScheduleWalk {
  std::size_t agents_visited = 0;
  std::size_t edges_visited = 0;
};
template <typename OnAgent, typename OnEdge>
ScheduleWalk walk_schedule(const WorkflowGraph& graph, OnAgent&& on_agent, OnEdge&& on_edge) {
  ScheduleWalk walk;
  for (AgentId a : topological_order(graph)) {
    on_agent(a);
    ++walk.agents_visited;
    graph.successors(a).for_each([&](AgentId b) {
      on_edge(a, b);
      ++walk.edges_visited;
    });
  }
  return walk;
}

// The [3,3,1] trading topology: analysts, outlooks, trader, fully connected
// between consecutive layers.
WorkflowGraph reference_trading_graph();

// Fully connected layered graph with generated names (L<layer>A<k>); the
// last layer must have exactly one agent.
WorkflowGraph full_layered_graph(const std::vector<std::size_t>& layer_sizes,
                                 std::vector<bool> mandatory = {});

std::string format_coalition(const WorkflowGraph& graph, Coalition c);

}  // namespace agentcredit
