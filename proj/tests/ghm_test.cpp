#include <gtest/gtest.h>

#include <atomic>
#include <random>

#include "agentcredit/coalition.hpp"
#include "agentcredit/error.hpp"
#include "agentcredit/ghm.hpp"
#include "agentcredit/shapley.hpp"
#include "test_support.hpp"

namespace agentcredit {
namespace {

// Hash executor over GHM's interface; ignores the configuration argument so
// its output depends only on the direct inputs.
struct HashExec {
  std::uint64_t seed;
  std::atomic<std::uint64_t>* calls = nullptr;
  std::uint64_t operator()(AgentId a, Coalition, const UpstreamOutputs<std::uint64_t>& in) const {
    if (calls != nullptr) ++*calls;
    std::vector<std::pair<AgentId, std::uint64_t>> inputs;
    for (const auto& [p, out] : in) inputs.emplace_back(p, *out);
    std::sort(inputs.begin(), inputs.end());
    return testing::hash_agent(seed, a, inputs);
  }
};

std::uint64_t member_slots(const std::vector<Coalition>& viable) {
  std::uint64_t n = 0;
  for (Coalition s : viable) n += s.size();
  return n;
}

TEST(Ghm, ReferenceGraphExecutes73) {
  const auto g = reference_trading_graph();
  const auto viable = enumerate_viable(g);
  std::atomic<std::uint64_t> calls{0};
  const auto run = ghm_execute<std::uint64_t>(g, viable, HashExec{5, &calls});
  EXPECT_EQ(run.stats.agent_executions, 73u);
  EXPECT_EQ(calls.load(), 73u);
  EXPECT_EQ(run.stats.unique_configs, (std::vector<std::uint64_t>{1, 7, 49}));
  EXPECT_EQ(run.stats.cache_hits, member_slots(viable) - 73u);
  EXPECT_EQ(run.cache.size(), 73u);
  ASSERT_EQ(run.sink_outputs.size(), 49u);
}

TEST(Ghm, SmallTopologies) {
  const auto single = build_graph({{"A"}}, {});
  EXPECT_EQ(ghm_execute<std::uint64_t>(single, enumerate_viable(single), HashExec{1}).stats.agent_executions, 1u);
  const auto g221 = full_layered_graph({2, 2, 1});
  const auto run = ghm_execute<std::uint64_t>(g221, enumerate_viable(g221), HashExec{1});
  EXPECT_EQ(run.stats.agent_executions, 17u);
  EXPECT_EQ(run.stats.unique_configs, (std::vector<std::uint64_t>{1, 3, 9}));
  const auto g421 = full_layered_graph({4, 2, 1});
  EXPECT_EQ(ghm_execute<std::uint64_t>(g421, enumerate_viable(g421), HashExec{1}).stats.agent_executions, 79u);
}

TEST(Ghm, CacheKeysOnlyUseEarlierLayers) {
  const auto g = reference_trading_graph();
  const auto run = ghm_execute<std::uint64_t>(g, enumerate_viable(g), HashExec{9});
  for (const auto& [key, _] : run.cache.entries()) {
    const std::size_t layer = g.layer_of(key.agent);
    key.configuration.for_each([&](AgentId a) { EXPECT_LT(g.layer_of(a), layer); });
  }
}

TEST(Ghm, ExecutorFailureCarriesAgentAndConfiguration) {
  const auto g = reference_trading_graph();
  const auto viable = enumerate_viable(g);
  auto exec = [](AgentId a, Coalition, const UpstreamOutputs<int>&) -> int {
    if (a == 4) throw std::runtime_error("boom");
    return 1;
  };
  try {
    ghm_execute<int>(g, viable, exec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ExecutorFailure);
    EXPECT_NE(std::string(e.what()).find("BeOA"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

TEST(Ghm, VerifyStrideCatchesNonDeterminism) {
  const auto g = reference_trading_graph();
  const auto viable = enumerate_viable(g);
  std::uint64_t counter = 0;
  auto flaky = [&](AgentId, Coalition, const UpstreamOutputs<std::uint64_t>&) { return counter++; };
  GhmOptions opt;
  opt.verify_stride = 5;
  try {
    ghm_execute<std::uint64_t>(g, viable, flaky, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonDeterminismDetected);
  }
  // A deterministic executor passes with every key re-checked.
  opt.verify_stride = 1;
  EXPECT_NO_THROW(ghm_execute<std::uint64_t>(g, viable, HashExec{3}, opt));
}

TEST(Ghm, MemoCacheWriteOnce) {
  MemoCache<int> cache;
  const MemoKey k{1, Coalition::of({0})};
  EXPECT_EQ(cache.insert_if_absent(k, 3), 3);
  EXPECT_EQ(cache.insert_if_absent(k, 3), 3);
  EXPECT_THROW(cache.insert_if_absent(k, 4), Error);
  EXPECT_EQ(cache.at(k), 3);
  EXPECT_EQ(cache.find({2, Coalition{}}), nullptr);
  EXPECT_THROW(cache.at({2, Coalition{}}), Error);
}

// --- properties -------------------------------------------------------------

TEST(GhmProperty, SinkOutputsMatchStraightLineReplay) {
  std::mt19937_64 rng(4001);
  for (int trial = 0; trial < 80; ++trial) {
    const auto g = testing::random_layered_graph(rng);
    const auto viable = enumerate_viable(g);
    const std::uint64_t seed = rng();
    for (bool ancestor_keys : {false, true}) {
      GhmOptions opt;
      opt.ancestor_keys = ancestor_keys;
      opt.verify_stride = 3;
      const auto run = ghm_execute<std::uint64_t>(g, viable, HashExec{seed}, opt);
      std::uint64_t straight_executions = 0;
      for (std::size_t k = 0; k < viable.size(); ++k) {
        std::size_t e = 0;
        EXPECT_EQ(run.sink_outputs[k], *testing::straight_line_sink(g, viable[k], seed, &e));
        straight_executions += e;
      }
      EXPECT_EQ(straight_executions, member_slots(viable));
      EXPECT_LE(run.stats.agent_executions, straight_executions);
      EXPECT_EQ(run.stats.cache_hits, straight_executions - run.stats.agent_executions);
    }
  }
}

TEST(GhmProperty, AncestorKeysNeverExecuteMore) {
  std::mt19937_64 rng(4002);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = testing::random_layered_graph(rng);
    const auto viable = enumerate_viable(g);
    GhmOptions fine;
    fine.ancestor_keys = true;
    const auto a = ghm_execute<std::uint64_t>(g, viable, HashExec{1});
    const auto b = ghm_execute<std::uint64_t>(g, viable, HashExec{1}, fine);
    EXPECT_LE(b.stats.agent_executions, a.stats.agent_executions);
    EXPECT_EQ(a.sink_outputs, b.sink_outputs);
  }
}

TEST(GhmProperty, ParallelMatchesSerial) {
  std::mt19937_64 rng(4003);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = testing::random_layered_graph(rng);
    const auto viable = enumerate_viable(g);
    GhmOptions par;
    par.parallelism = 4;
    const auto a = ghm_execute<std::uint64_t>(g, viable, HashExec{2});
    const auto b = ghm_execute<std::uint64_t>(g, viable, HashExec{2}, par);
    EXPECT_EQ(a.sink_outputs, b.sink_outputs);
    EXPECT_EQ(a.stats.agent_executions, b.stats.agent_executions);
    EXPECT_EQ(a.cache.entries(), b.cache.entries());
  }
}

TEST(GhmProperty, MeasuredEqualsPredictedOnFullLayeredGraphs) {
  const std::vector<std::vector<std::size_t>> shapes = {
      {1}, {2, 1}, {2, 2, 1}, {3, 3, 1}, {4, 2, 1}, {3, 4, 1}, {2, 3, 2, 1}, {1, 1, 1}, {5, 1}, {2, 2, 2, 1}};
  for (const auto& shape : shapes) {
    const auto g = full_layered_graph(shape);
    const auto run = ghm_execute<std::uint64_t>(g, enumerate_viable(g), HashExec{4});
    const auto predicted = predicted_cost(shape, std::vector<bool>(shape.size(), true));
    EXPECT_EQ(run.stats.agent_executions, predicted.total_executions);
    EXPECT_EQ(run.stats.unique_configs, predicted.unique_configs);
    EXPECT_EQ(enumerate_viable(g).size(), predicted.viable_coalitions);
  }
}

}  // namespace
}  // namespace agentcredit
