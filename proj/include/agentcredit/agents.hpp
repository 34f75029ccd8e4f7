#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "agentcredit/coalition_set.hpp"
#include "agentcredit/graph.hpp"

namespace agentcredit {

enum class Role {
  NewsAnalyst,
  TechnicalAnalyst,
  FundamentalAnalyst,
  BullishOutlook,
  BearishOutlook,
  NeutralOutlook,
  Trader,
};

std::string_view role_name(Role role);
std::optional<Role> parse_role(std::string_view text);
bool is_analyst(Role role);

// Prompt = base text followed by appended lesson blocks.
struct PromptState {
  std::string base_text;
  std::vector<std::string> lesson_blocks;
  std::uint32_t version = 0;

  friend bool operator==(const PromptState&, const PromptState&) = default;
};

inline constexpr std::string_view kLessonDelimiter = "\n\n### Lesson\n";

std::string render_prompt(const PromptState& prompt);

// Signal from an analyst, score in [-1, 1].
struct AnalystSignal {
  double score = 0.0;
  std::string rationale;
  friend bool operator==(const AnalystSignal&, const AnalystSignal&) = default;
};

// Aggregated outlook, score in [-1, 1].
struct OutlookScore {
  double score = 0.0;
  friend bool operator==(const OutlookScore&, const OutlookScore&) = default;
};

enum class Decision { Buy, Hold, Sell };

std::string_view decision_name(Decision d);

struct TradeDecision {
  Decision decision = Decision::Hold;
  double confidence = 0.0;  // [0, 1]
  friend bool operator==(const TradeDecision&, const TradeDecision&) = default;
};

using AgentOutput = std::variant<AnalystSignal, OutlookScore, TradeDecision>;

// Score carried by any payload; trader decisions map to +1/0/-1 times confidence.
double output_score(const AgentOutput& out);
std::string describe_output(const AgentOutput& out);

// One day of external data as seen by a source agent.
struct MarketView {
  std::size_t day = 0;
  double sentiment = 0.0;
  double fundamental = 0.0;
  std::span<const double> closes;  // history through `day`, inclusive
};

using UpstreamMap = std::map<AgentId, AgentOutput>;

// Must be deterministic: identical arguments give bit-identical output.
class AgentExecutor {
 public:
  virtual ~AgentExecutor() = default;
  virtual AgentOutput execute(std::string_view prompt, const UpstreamMap& upstream,
                              const MarketView* external) const = 0;
};

struct AgentSpec {
  AgentId id = 0;
  std::string name;
  Role role = Role::Trader;
  bool external_access = false;  // true for graph sources
  PromptState prompt;
  std::shared_ptr<const AgentExecutor> executor;
};

// Enforces the information-flow contract around spec.executor: sources must
// receive market data, everyone else must not. Executor exceptions surface
// as ExecutorError.
AgentOutput execute_agent(const AgentSpec& spec, const UpstreamMap& upstream,
                          const MarketView* external);

// --- Mock agents -----------------------------------------------------------

inline constexpr std::string_view kDampenDirective = "[[calibrate:dampen]]";
inline constexpr std::string_view kAmplifyDirective = "[[calibrate:amplify]]";
inline constexpr double kSensitivityStep = 0.25;

struct MockParams {
  std::uint64_t seed = 42;
  double trade_threshold = 0.25;  // trader Buy/Sell cutoff on summed outlooks
  double analyst_jitter = 0.05;   // amplitude of per-(agent, day) uniform jitter
  std::size_t sma_short = 3;
  std::size_t sma_long = 8;
};

// Seeded baseline in [0.5, 1.0] per (seed, agent), shifted by
// kSensitivityStep for each calibration directive found in the prompt and
// clamped to [0, 1].
double mock_sensitivity(std::uint64_t seed, AgentId agent, std::string_view rendered_prompt);
double mock_sensitivity(const AgentSpec& spec, std::uint64_t seed);

// Deterministic uniform in [0, 1) from (seed, stream, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

std::shared_ptr<const AgentExecutor> make_mock_executor(Role role, AgentId agent,
                                                        const MockParams& params);

std::string default_base_prompt(Role role);

// Builds one spec per graph agent using `roles` (indexed by agent) and mock
// executors. Source status comes from the graph.
std::vector<AgentSpec> make_mock_team(const WorkflowGraph& graph, const std::vector<Role>& roles,
                                      const MockParams& params);

// Roles for the reference graph, by agent name.
std::vector<Role> reference_roles(const WorkflowGraph& graph);

// Reference roles when every name is known; otherwise sources cycle through
// the analyst roles, the sink trades and the rest cycle through outlooks.
std::vector<Role> default_roles(const WorkflowGraph& graph);

}  // namespace agentcredit
