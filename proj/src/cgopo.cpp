#include "agentcredit/cgopo.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "agentcredit/error.hpp"

namespace agentcredit {

const std::string_view kReflectionTemplate =
    "You are reviewing one agent of a multi-agent trading team. Its contribution to the team's "
    "risk-adjusted return was the lowest this period. Study the failure and success cases below "
    "and write short, concrete lessons that the agent should follow from now on. Keep the "
    "agent's original role intact.\n";

AgentId argmin_agent(std::span<const double> values) {
  if (values.empty()) fail(Errc::InvalidSize, "no contribution values");
  // min_element returns the first minimum, i.e. the lowest index on ties.
  return static_cast<AgentId>(std::min_element(values.begin(), values.end()) - values.begin());
}

std::optional<AgentId> identify_bottleneck(std::span<const double> values, double threshold) {
  const AgentId a = argmin_agent(values);
  if (values[a] < threshold) return a;
  return std::nullopt;
}

CaseSplit extract_cases(std::span<const HistoryRecord> history, AgentId agent, DayRange window) {
  CaseSplit split;
  for (const auto& rec : history) {
    if (rec.agent != agent || !window.contains(rec.day)) continue;
    (rec.reward < 0.0 ? split.failures : split.successes).push_back(rec);
  }
  return split;
}

std::string format_reflection_context(std::string_view agent_name, double phi,
                                      std::span<const HistoryRecord> failures,
                                      std::span<const HistoryRecord> successes) {
  std::string out = fmt::format("agent: {}\ncontribution: {:+.6f}\n", agent_name, phi);
  auto cases = [&](std::string_view title, std::span<const HistoryRecord> records) {
    out += fmt::format("{} ({}):\n", title, records.size());
    for (const auto& r : records) {
      out += fmt::format("- day {} | input: {} | action: {} | reward: {:+.6f}\n", r.day, r.state,
                         r.action, r.reward);
    }
  };
  cases("failures", failures);
  cases("successes", successes);
  return out;
}

std::vector<std::string> MockReflector::optimize(const ReflectionRequest& request) const {
  const std::size_t total = request.failures.size() + request.successes.size();
  const double failure_rate =
      total == 0 ? 0.0 : static_cast<double>(request.failures.size()) / static_cast<double>(total);
  double mean_negative = 0.0;
  if (!request.failures.empty()) {
    for (const auto& f : request.failures) mean_negative += f.reward;
    mean_negative /= static_cast<double>(request.failures.size());
  }
  std::vector<std::string> blocks;
  blocks.push_back(fmt::format(
      "Review of {}: failure_rate={:.3f} mean_negative_reward={:+.6f} contribution={:+.6f} "
      "cases={}",
      request.agent_name, failure_rate, mean_negative, request.phi, total));
  if (!request.failures.empty()) {
    blocks.push_back(fmt::format("{} Your signals preceded losing days; scale down conviction "
                                 "when evidence is mixed.",
                                 kDampenDirective));
  }
  return blocks;
}

LessonSet reflect(std::size_t cycle, AgentId target, std::string_view agent_name, double phi,
                  std::span<const HistoryRecord> failures, std::span<const HistoryRecord> successes,
                  const Reflector& reflector) {
  ReflectionRequest request;
  request.target = target;
  request.agent_name = agent_name;
  request.phi = phi;
  request.failures = failures;
  request.successes = successes;
  request.prompt = std::string(kReflectionTemplate) +
                   format_reflection_context(agent_name, phi, failures, successes);
  LessonSet lessons;
  lessons.cycle = cycle;
  lessons.target = target;
  lessons.failure_count = failures.size();
  lessons.success_count = successes.size();
  try {
    lessons.text_blocks = reflector.optimize(request);
  } catch (const std::exception& e) {
    fail(Errc::ReflectorError, e.what());
  }
  return lessons;
}

PromptState metamorphose(const PromptState& prompt, const LessonSet& lessons,
                         std::size_t lesson_cap) {
  PromptState next = prompt;
  for (const auto& block : lessons.text_blocks) {
    if (!block.empty()) next.lesson_blocks.push_back(block);
  }
  if (lesson_cap > 0 && next.lesson_blocks.size() > lesson_cap) {
    next.lesson_blocks.erase(next.lesson_blocks.begin(),
                             next.lesson_blocks.end() - static_cast<std::ptrdiff_t>(lesson_cap));
  }
  ++next.version;
  return next;
}

OptimizationCycleRecord run_cycle(std::size_t cycle, DayRange window,
                                  const std::vector<std::string>& agent_names,
                                  const ContributionMeasure& measure,
                                  std::span<const HistoryRecord> history,
                                  std::vector<PromptState>& prompts, const Reflector& reflector,
                                  const CycleConfig& config) {
  if (window.last < window.first || window.days() < 2) {
    fail(Errc::WindowTooShort, "an optimization window needs at least two trading days");
  }
  return run_cycle(cycle, window, agent_names, measure(), history, prompts, reflector, config);
}

OptimizationCycleRecord run_cycle(std::size_t cycle, DayRange window,
                                  const std::vector<std::string>& agent_names,
                                  const AttributionResult& attribution,
                                  std::span<const HistoryRecord> history,
                                  std::vector<PromptState>& prompts, const Reflector& reflector,
                                  const CycleConfig& config) {
  if (window.last < window.first || window.days() < 2) {
    fail(Errc::WindowTooShort, "an optimization window needs at least two trading days");
  }
  if (attribution.values.size() != prompts.size() || agent_names.size() != prompts.size()) {
    fail(Errc::InvalidSize, "contribution, name and prompt counts differ");
  }
  OptimizationCycleRecord record;
  record.cycle = cycle;
  record.window = window;
  record.shapley = attribution.values;
  record.bottleneck = argmin_agent(record.shapley);

  if (auto target = identify_bottleneck(record.shapley, config.tau)) {
    record.triggered = true;
    const auto cases = extract_cases(history, *target, window);
    LessonSet lessons = reflect(cycle, *target, agent_names[*target], record.shapley[*target],
                                cases.failures, cases.successes, reflector);
    prompts[*target] = metamorphose(prompts[*target], lessons, config.lesson_cap);
    record.lessons = std::move(lessons);
  }
  for (const auto& p : prompts) record.prompt_versions_after.push_back(p.version);
  return record;
}

nlohmann::json to_json(const LessonSet& lessons, const std::vector<std::string>& agent_names) {
  return {{"cycle", lessons.cycle},
          {"target", agent_names.at(lessons.target)},
          {"failure_count", lessons.failure_count},
          {"success_count", lessons.success_count},
          {"text_blocks", lessons.text_blocks}};
}

nlohmann::json to_json(const OptimizationCycleRecord& record,
                       const std::vector<std::string>& agent_names) {
  nlohmann::json shapley = nlohmann::json::object();
  nlohmann::json versions = nlohmann::json::object();
  for (std::size_t a = 0; a < agent_names.size(); ++a) {
    shapley[agent_names[a]] = record.shapley.at(a);
    versions[agent_names[a]] = record.prompt_versions_after.at(a);
  }
  nlohmann::json j = {{"cycle", record.cycle},
                      {"window", {{"first_day", record.window.first}, {"last_day", record.window.last}}},
                      {"shapley", shapley},
                      {"bottleneck", record.bottleneck ? nlohmann::json(agent_names.at(*record.bottleneck))
                                                       : nlohmann::json(nullptr)},
                      {"triggered", record.triggered},
                      {"prompt_versions_after", versions}};
  j["lessons"] = record.lessons ? to_json(*record.lessons, agent_names) : nlohmann::json(nullptr);
  return j;
}

std::string CycleStore::to_jsonl(const std::vector<std::string>& agent_names) const {
  std::string out;
  for (const auto& r : records_) out += to_json(r, agent_names).dump() + "\n";
  return out;
}

std::string CycleStore::lessons_jsonl(const std::vector<std::string>& agent_names) const {
  std::string out;
  for (const auto& r : records_) {
    if (r.lessons) out += to_json(*r.lessons, agent_names).dump() + "\n";
  }
  return out;
}

}  // namespace agentcredit
