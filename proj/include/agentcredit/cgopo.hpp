#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentcredit/agents.hpp"
#include "agentcredit/market.hpp"
#include "agentcredit/shapley.hpp"

namespace agentcredit {

// Inclusive range of trading-day indices.
struct DayRange {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t days() const { return last - first + 1; }
  bool contains(std::size_t d) const { return d >= first && d <= last; }
};

// One (state, action, reward) triple for one agent on one day. The reward
// is the system-level return of that day's decision, shared by all agents.
struct HistoryRecord {
  std::size_t day = 0;
  AgentId agent = 0;
  std::string state;
  std::string action;
  double reward = 0.0;
};

struct CaseSplit {
  std::vector<HistoryRecord> failures;   // reward < 0
  std::vector<HistoryRecord> successes;  // reward >= 0
};

struct LessonSet {
  std::size_t cycle = 0;
  AgentId target = 0;
  std::vector<std::string> text_blocks;
  std::size_t failure_count = 0;
  std::size_t success_count = 0;
};

struct OptimizationCycleRecord {
  std::size_t cycle = 0;
  DayRange window;
  std::vector<double> shapley;
  std::optional<AgentId> bottleneck;  // argmin of shapley
  bool triggered = false;
  std::optional<LessonSet> lessons;
  std::vector<std::uint32_t> prompt_versions_after;
};

// Lowest-index agent with minimum value.
AgentId argmin_agent(std::span<const double> values);

// argmin if its value is below the threshold, otherwise nothing.
std::optional<AgentId> identify_bottleneck(std::span<const double> values, double threshold);

CaseSplit extract_cases(std::span<const HistoryRecord> history, AgentId agent, DayRange window);

struct ReflectionRequest {
  AgentId target = 0;
  std::string_view agent_name;
  double phi = 0.0;
  std::span<const HistoryRecord> failures;
  std::span<const HistoryRecord> successes;
  std::string prompt;  // template followed by the formatted context
};

// Produces lesson text blocks from a reflection request.
class Reflector {
 public:
  virtual ~Reflector() = default;
  virtual std::vector<std::string> optimize(const ReflectionRequest& request) const = 0;
};

// Emits a statistics block and, when there is at least one failure, a
// dampening calibration directive the mock agents understand.
class MockReflector final : public Reflector {
 public:
  std::vector<std::string> optimize(const ReflectionRequest& request) const override;
};

extern const std::string_view kReflectionTemplate;

std::string format_reflection_context(std::string_view agent_name, double phi,
                                      std::span<const HistoryRecord> failures,
                                      std::span<const HistoryRecord> successes);

// Throws ReflectorError if the reflector fails.
LessonSet reflect(std::size_t cycle, AgentId target, std::string_view agent_name, double phi,
                  std::span<const HistoryRecord> failures, std::span<const HistoryRecord> successes,
                  const Reflector& reflector);

// Appends the lesson blocks and bumps the version. lesson_cap > 0 keeps
// only the newest lesson_cap blocks.
PromptState metamorphose(const PromptState& prompt, const LessonSet& lessons,
                         std::size_t lesson_cap = 0);

struct CycleConfig {
  double tau = 0.0;
  std::size_t lesson_cap = 5;
};

using ContributionMeasure = std::function<AttributionResult()>;

// Contribution measurement, bottleneck identification, reflection and prompt
// metamorphosis for one window. Only the bottleneck's prompt can change.
OptimizationCycleRecord run_cycle(std::size_t cycle, DayRange window,
                                  const std::vector<std::string>& agent_names,
                                  const ContributionMeasure& measure,
                                  std::span<const HistoryRecord> history,
                                  std::vector<PromptState>& prompts, const Reflector& reflector,
                                  const CycleConfig& config);

// Same, with the contribution scores already measured.
OptimizationCycleRecord run_cycle(std::size_t cycle, DayRange window,
                                  const std::vector<std::string>& agent_names,
                                  const AttributionResult& attribution,
                                  std::span<const HistoryRecord> history,
                                  std::vector<PromptState>& prompts, const Reflector& reflector,
                                  const CycleConfig& config);

nlohmann::json to_json(const LessonSet& lessons, const std::vector<std::string>& agent_names);
nlohmann::json to_json(const OptimizationCycleRecord& record,
                       const std::vector<std::string>& agent_names);

// Append-only store of cycle records.
class CycleStore {
 public:
  void append(OptimizationCycleRecord record) { records_.push_back(std::move(record)); }
  const std::vector<OptimizationCycleRecord>& records() const { return records_; }
  std::string to_jsonl(const std::vector<std::string>& agent_names) const;
  std::string lessons_jsonl(const std::vector<std::string>& agent_names) const;

 private:
  std::vector<OptimizationCycleRecord> records_;
};

}  // namespace agentcredit
