#include "agentcredit/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <unordered_map>

#include "agentcredit/error.hpp"

namespace agentcredit {

namespace {

std::vector<AgentId> kahn_order(std::size_t n, const std::vector<Coalition>& succs,
                                const std::vector<Coalition>& preds) {
  std::vector<std::size_t> indegree(n);
  for (std::size_t a = 0; a < n; ++a) indegree[a] = preds[a].size();
  std::priority_queue<AgentId, std::vector<AgentId>, std::greater<>> ready;
  for (std::size_t a = 0; a < n; ++a) {
    if (indegree[a] == 0) ready.push(static_cast<AgentId>(a));
  }
  std::vector<AgentId> order;
  order.reserve(n);
  while (!ready.empty()) {
    AgentId a = ready.top();
    ready.pop();
    order.push_back(a);
    succs[a].for_each([&](AgentId b) {
      if (--indegree[b] == 0) ready.push(b);
    });
  }
  return order;
}

}  // namespace

std::optional<AgentId> WorkflowGraph::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<AgentId>(i);
  }
  return std::nullopt;
}

AgentId WorkflowGraph::id(std::string_view name) const {
  if (auto a = find(name)) return *a;
  fail(Errc::UnknownAgent, "no agent named '" + std::string(name) + "'");
}

WorkflowGraph build_graph(GraphSpec spec) {
  const std::size_t n = spec.agents.size();
  if (n == 0) fail(Errc::LayerPartitionInvalid, "graph has no agents");
  if (n > kMaxAgents) {
    fail(Errc::TooManyAgents, std::to_string(n) + " agents exceeds " + std::to_string(kMaxAgents));
  }
  {
    std::set<std::string> seen;
    for (const auto& name : spec.agents) {
      if (name.empty()) fail(Errc::LayerPartitionInvalid, "empty agent name");
      if (!seen.insert(name).second) fail(Errc::DuplicateAgent, "duplicate agent '" + name + "'");
    }
  }

  WorkflowGraph g;
  g.names_ = std::move(spec.agents);

  // Layers must partition the agents.
  if (spec.layers.empty()) fail(Errc::LayerPartitionInvalid, "no layers declared");
  g.layer_of_.assign(n, static_cast<std::size_t>(-1));
  for (std::size_t j = 0; j < spec.layers.size(); ++j) {
    if (spec.layers[j].empty()) {
      fail(Errc::LayerPartitionInvalid, "layer " + std::to_string(j + 1) + " is empty");
    }
    Coalition mask;
    for (AgentId a : spec.layers[j]) {
      if (a >= n) fail(Errc::LayerPartitionInvalid, "layer member index out of range");
      if (g.layer_of_[a] != static_cast<std::size_t>(-1)) {
        fail(Errc::LayerPartitionInvalid, "agent '" + g.names_[a] + "' is in two layers");
      }
      g.layer_of_[a] = j;
      mask = mask.with(a);
    }
    g.layer_masks_.push_back(mask);
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (g.layer_of_[a] == static_cast<std::size_t>(-1)) {
      fail(Errc::LayerPartitionInvalid, "agent '" + g.names_[a] + "' is not in any layer");
    }
  }
  g.layers_ = std::move(spec.layers);
  for (auto& layer : g.layers_) std::sort(layer.begin(), layer.end());

  if (spec.mandatory.empty()) spec.mandatory.assign(g.layers_.size(), true);
  if (spec.mandatory.size() != g.layers_.size()) {
    fail(Errc::LayerPartitionInvalid, "mandatory flag count does not match layer count");
  }
  g.mandatory_ = std::move(spec.mandatory);

  // Edges, deduplicated.
  std::set<Edge> edge_set;
  for (const auto& [from, to] : spec.edges) {
    if (from >= n || to >= n) fail(Errc::UnknownAgent, "edge endpoint index out of range");
    if (from == to) fail(Errc::CycleDetected, "self-loop on '" + g.names_[from] + "'");
    edge_set.insert({from, to});
  }
  g.edges_.assign(edge_set.begin(), edge_set.end());
  g.preds_.assign(n, Coalition{});
  g.succs_.assign(n, Coalition{});
  for (const auto& [from, to] : g.edges_) {
    g.succs_[from] = g.succs_[from].with(to);
    g.preds_[to] = g.preds_[to].with(from);
  }

  const auto order = kahn_order(n, g.succs_, g.preds_);
  if (order.size() != n) fail(Errc::CycleDetected, "workflow graph contains a cycle");

  for (const auto& [from, to] : g.edges_) {
    if (g.layer_of_[from] >= g.layer_of_[to]) {
      fail(Errc::CrossLayerViolation, "edge " + g.names_[from] + "->" + g.names_[to] +
                                          " does not go to a strictly later layer");
    }
  }

  std::vector<AgentId> sinks;
  for (std::size_t a = 0; a < n; ++a) {
    if (g.succs_[a].empty()) sinks.push_back(static_cast<AgentId>(a));
    if (g.preds_[a].empty()) g.sources_ = g.sources_.with(static_cast<AgentId>(a));
  }
  if (sinks.size() != 1) {
    std::string names;
    for (AgentId s : sinks) names += (names.empty() ? "" : ",") + g.names_[s];
    fail(Errc::MultipleSinks, std::to_string(sinks.size()) + " agents with out-degree 0: " + names);
  }
  if (g.sources_.empty()) fail(Errc::NoSource, "no agent with in-degree 0");
  g.sink_ = sinks.front();

  g.ancestors_.assign(n, Coalition{});
  for (AgentId a : order) {
    Coalition anc = g.preds_[a];
    g.preds_[a].for_each([&](AgentId p) { anc = anc | g.ancestors_[p]; });
    g.ancestors_[a] = anc;
  }
  return g;
}

WorkflowGraph build_graph(const std::vector<std::vector<std::string>>& layers,
                          const std::vector<std::pair<std::string, std::string>>& edges,
                          std::vector<bool> mandatory) {
  GraphSpec spec;
  std::unordered_map<std::string, AgentId> index;
  for (const auto& layer : layers) {
    std::vector<AgentId> ids;
    for (const auto& name : layer) {
      auto [it, inserted] = index.emplace(name, static_cast<AgentId>(spec.agents.size()));
      if (inserted) {
        spec.agents.push_back(name);
      }
      ids.push_back(it->second);
    }
    spec.layers.push_back(std::move(ids));
  }
  auto lookup = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) fail(Errc::UnknownAgent, "edge refers to unknown agent '" + name + "'");
    return it->second;
  };
  for (const auto& [from, to] : edges) spec.edges.emplace_back(lookup(from), lookup(to));
  spec.mandatory = std::move(mandatory);
  return build_graph(std::move(spec));
}

std::vector<AgentId> topological_order(const WorkflowGraph& graph) {
  std::vector<Coalition> preds, succs;
  for (AgentId a = 0; a < graph.size(); ++a) {
    preds.push_back(graph.predecessors(a));
    succs.push_back(graph.successors(a));
  }
  return kahn_order(graph.size(), succs, preds);
}

Coalition information_set(const WorkflowGraph& graph, AgentId agent, Coalition coalition) {
  if (agent >= graph.size() || !coalition.contains(agent)) {
    fail(Errc::AgentNotInCoalition, "agent index " + std::to_string(agent) + " is not a member");
  }
  return graph.predecessors(agent) & coalition;
}

Coalition reachable_within(const WorkflowGraph& graph, Coalition coalition, AgentId from) {
  if (from >= graph.size() || !coalition.contains(from)) {
    fail(Errc::EndpointNotInCoalition, "path start is not a member");
  }
  Coalition seen = Coalition::single(from);
  Coalition frontier = seen;
  while (!frontier.empty()) {
    Coalition next;
    frontier.for_each([&](AgentId a) { next = next | (graph.successors(a) & coalition); });
    frontier = next.minus(seen);
    seen = seen | frontier;
  }
  return seen;
}

bool path_exists(const WorkflowGraph& graph, Coalition coalition, AgentId from, AgentId to) {
  if (to >= graph.size() || !coalition.contains(to)) {
    fail(Errc::EndpointNotInCoalition, "path end is not a member");
  }
  return reachable_within(graph, coalition, from).contains(to);
}

WorkflowGraph reference_trading_graph() {
  const std::vector<std::string> analysts = {"NAA", "TAA", "FAA"};
  const std::vector<std::string> outlooks = {"BOA", "BeOA", "NOA"};
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& a : analysts) {
    for (const auto& o : outlooks) edges.emplace_back(a, o);
  }
  for (const auto& o : outlooks) edges.emplace_back(o, "TRA");
  return build_graph({analysts, outlooks, {"TRA"}}, edges);
}

WorkflowGraph full_layered_graph(const std::vector<std::size_t>& layer_sizes,
                                 std::vector<bool> mandatory) {
  std::vector<std::vector<std::string>> layers;
  for (std::size_t j = 0; j < layer_sizes.size(); ++j) {
    std::vector<std::string> names;
    for (std::size_t k = 0; k < layer_sizes[j]; ++k) {
      names.push_back("L" + std::to_string(j + 1) + "A" + std::to_string(k + 1));
    }
    layers.push_back(std::move(names));
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t j = 0; j + 1 < layers.size(); ++j) {
    for (const auto& a : layers[j]) {
      for (const auto& b : layers[j + 1]) edges.emplace_back(a, b);
    }
  }
  return build_graph(layers, edges, std::move(mandatory));
}

std::string format_coalition(const WorkflowGraph& graph, Coalition c) {
  std::string out = "{";
  bool first = true;
  c.for_each([&](AgentId a) {
    if (!first) out += ",";
    out += graph.name(a);
    first = false;
  });
  return out + "}";
}

}  // namespace agentcredit
