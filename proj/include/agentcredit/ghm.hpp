#pragma once

// Generalized hierarchical memoization: every agent output is cached under
// (agent, participating members of all earlier layers), so coalitions that
// share an upstream composition share the execution.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "agentcredit/coalition_set.hpp"
#include "agentcredit/error.hpp"
#include "agentcredit/graph.hpp"

namespace agentcredit {

struct MemoKey {
  AgentId agent = 0;
  Coalition configuration;

  friend auto operator<=>(const MemoKey&, const MemoKey&) = default;
};

// Write-once cache. Inserting a key twice with a different value throws
// NonDeterminismDetected.
template <typename Output>
class MemoCache {
 public:
  MemoCache() : mu_(std::make_unique<std::mutex>()) {}

  const Output* find(const MemoKey& key) const {
    std::lock_guard lock(*mu_);
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const Output& at(const MemoKey& key) const {
    if (const Output* out = find(key)) return *out;
    fail(Errc::ExecutorFailure, "memo cache has no entry for agent " + std::to_string(key.agent));
  }

  // Returns the stored value, which is `value` unless the key was present.
  const Output& insert_if_absent(const MemoKey& key, Output value) {
    std::lock_guard lock(*mu_);
    auto [it, inserted] = entries_.try_emplace(key, std::move(value));
    if (!inserted && !(it->second == value)) {
      fail(Errc::NonDeterminismDetected,
           "conflicting outputs for agent " + std::to_string(key.agent));
    }
    return it->second;
  }

  std::size_t size() const {
    std::lock_guard lock(*mu_);
    return entries_.size();
  }

  const std::map<MemoKey, Output>& entries() const { return entries_; }

 private:
  std::unique_ptr<std::mutex> mu_;
  std::map<MemoKey, Output> entries_;
};

struct GhmOptions {
  // Key on (agent, ancestors ∩ S) instead of all earlier layers. Never
  // executes more than the layer key; off by default.
  bool ancestor_keys = false;
  // Re-execute every k-th key and compare (0 disables).
  std::size_t verify_stride = 0;
  std::size_t parallelism = 1;
};

struct GhmStats {
  std::vector<std::uint64_t> unique_configs;  // |U_i| per layer
  std::uint64_t agent_executions = 0;
  std::uint64_t cache_hits = 0;
};

template <typename Output>
struct GhmRun {
  MemoCache<Output> cache;
  std::vector<Output> sink_outputs;  // one per viable coalition, same order
  GhmStats stats;
};

template <typename Output>
using UpstreamOutputs = std::vector<std::pair<AgentId, const Output*>>;

namespace detail {

inline Coalition earlier_layers(const WorkflowGraph& graph, std::size_t layer) {
  Coalition m;
  for (std::size_t j = 0; j < layer; ++j) m = m | graph.layer_mask(j);
  return m;
}

inline Coalition key_configuration(const WorkflowGraph& graph, AgentId agent, Coalition upstream,
                                   const GhmOptions& options) {
  return options.ancestor_keys ? upstream & graph.ancestors(agent) : upstream;
}

}  // namespace detail

// Executes every agent required by the viable coalitions once per distinct
// cache key, layer by layer. `exec` is called as
//   Output exec(AgentId agent, Coalition upstream, const UpstreamOutputs<Output>& inputs)
// where `upstream` is the coalition's membership in earlier layers and
// `inputs` holds the outputs of the agent's direct predecessors present in it.
// Layers act as barriers; within a layer keys may run concurrently.
template <typename Output, typename Exec>
GhmRun<Output> ghm_execute(const WorkflowGraph& graph, std::span<const Coalition> viable,
                           Exec&& exec, const GhmOptions& options = {}) {
  GhmRun<Output> run;
  std::uint64_t member_slots = 0;
  for (Coalition s : viable) member_slots += s.size();

  std::size_t executed_keys = 0;
  for (std::size_t layer = 0; layer < graph.layer_count(); ++layer) {
    const Coalition before = detail::earlier_layers(graph, layer);
    const Coalition here = graph.layer_mask(layer);

    // Unique upstream configurations, each with the agents of this layer
    // that appear alongside it in some viable coalition.
    std::map<Coalition, Coalition> active_by_config;
    for (Coalition s : viable) {
      Coalition& active = active_by_config[s & before];
      active = active | (s & here);
    }
    run.stats.unique_configs.push_back(active_by_config.size());

    struct Job {
      MemoKey key;
      Coalition upstream;
    };
    std::vector<Job> jobs;
    {
      std::map<MemoKey, bool> queued;
      for (const auto& [config, active] : active_by_config) {
        active.for_each([&](AgentId a) {
          MemoKey key{a, detail::key_configuration(graph, a, config, options)};
          if (run.cache.find(key) == nullptr && queued.emplace(key, true).second) {
            jobs.push_back({key, config});
          }
        });
      }
    }

    auto run_job = [&](const Job& job) -> Output {
      UpstreamOutputs<Output> inputs;
      (graph.predecessors(job.key.agent) & job.upstream).for_each([&](AgentId p) {
        const Coalition p_upstream = job.upstream & detail::earlier_layers(graph, graph.layer_of(p));
        MemoKey pk{p, detail::key_configuration(graph, p, p_upstream, options)};
        inputs.emplace_back(p, &run.cache.at(pk));
      });
      try {
        return exec(job.key.agent, job.upstream, inputs);
      } catch (const std::exception& e) {
        fail(Errc::ExecutorFailure, "agent '" + graph.name(job.key.agent) + "' under " +
                                        format_coalition(graph, job.upstream) + ": " + e.what());
      }
    };

    std::vector<Output> results;
    results.reserve(jobs.size());
    const std::size_t workers = std::max<std::size_t>(1, options.parallelism);
    if (workers == 1 || jobs.size() < 2) {
      for (const Job& job : jobs) results.push_back(run_job(job));
    } else {
      std::vector<std::future<Output>> pending;
      pending.reserve(jobs.size());
      for (std::size_t begin = 0; begin < jobs.size(); begin += workers) {
        const std::size_t end = std::min(jobs.size(), begin + workers);
        for (std::size_t k = begin; k < end; ++k) {
          pending.push_back(std::async(std::launch::async, run_job, std::cref(jobs[k])));
        }
        for (std::size_t k = begin; k < end; ++k) results.push_back(pending[k].get());
      }
    }

    for (std::size_t k = 0; k < jobs.size(); ++k) {
      run.cache.insert_if_absent(jobs[k].key, results[k]);
      ++executed_keys;
      if (options.verify_stride != 0 && executed_keys % options.verify_stride == 0) {
        if (!(run_job(jobs[k]) == results[k])) {
          fail(Errc::NonDeterminismDetected,
               "agent '" + graph.name(jobs[k].key.agent) + "' returned a different output under " +
                   format_coalition(graph, jobs[k].upstream));
        }
      }
    }
    run.stats.agent_executions += jobs.size();
  }

  const AgentId sink = graph.sink();
  const Coalition before_sink = detail::earlier_layers(graph, graph.layer_of(sink));
  run.sink_outputs.reserve(viable.size());
  for (Coalition s : viable) {
    const MemoKey key{sink, detail::key_configuration(graph, sink, s & before_sink, options)};
    run.sink_outputs.push_back(run.cache.at(key));
  }
  run.stats.cache_hits = member_slots - run.stats.agent_executions;
  return run;
}

}  // namespace agentcredit
