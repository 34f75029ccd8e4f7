#include "agentcredit/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "agentcredit/error.hpp"

namespace agentcredit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::size_t count_occurrences(std::string_view text, std::string_view token) {
  std::size_t n = 0;
  for (auto pos = text.find(token); pos != std::string_view::npos;
       pos = text.find(token, pos + token.size())) {
    ++n;
  }
  return n;
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

constexpr std::uint64_t kSensitivityStream = 0x5E45ULL;
constexpr std::uint64_t kJitterStream = 0x717EULL;

class AnalystMock final : public AgentExecutor {
 public:
  AnalystMock(Role role, AgentId agent, MockParams params)
      : role_(role), agent_(agent), params_(params) {}

  AgentOutput execute(std::string_view prompt, const UpstreamMap&,
                      const MarketView* external) const override {
    if (external == nullptr) fail(Errc::MissingExternalData, "analyst mock needs market data");
    const double sens = mock_sensitivity(params_.seed, agent_, prompt);
    const double u = counter_uniform(params_.seed, kJitterStream + agent_, external->day);
    const double jitter = params_.analyst_jitter * (2.0 * u - 1.0);
    AnalystSignal out;
    switch (role_) {
      case Role::NewsAnalyst:
        out.score = sens * std::tanh(2.0 * external->sentiment + jitter);
        out.rationale = "sentiment";
        break;
      case Role::FundamentalAnalyst:
        out.score = sens * std::tanh(2.0 * external->fundamental + jitter);
        out.rationale = "valuation";
        break;
      case Role::TechnicalAnalyst: {
        const auto closes = external->closes;
        double spread = 0.0;
        if (closes.size() >= 2) {
          auto tail_mean = [&](std::size_t k) {
            k = std::min(k, closes.size());
            return std::accumulate(closes.end() - static_cast<std::ptrdiff_t>(k), closes.end(), 0.0) /
                   static_cast<double>(k);
          };
          const double fast = tail_mean(params_.sma_short);
          const double slow = tail_mean(params_.sma_long);
          spread = (fast - slow) / slow;
        }
        out.score = sens * std::tanh(40.0 * spread + jitter);
        out.rationale = "sma_crossover";
        break;
      }
      default:
        fail(Errc::ExecutorError, "analyst mock built with a non-analyst role");
    }
    out.score = clamp_unit(out.score);
    return out;
  }

 private:
  Role role_;
  AgentId agent_;
  MockParams params_;
};

class OutlookMock final : public AgentExecutor {
 public:
  OutlookMock(Role role, AgentId agent, MockParams params)
      : role_(role), agent_(agent), params_(params) {}

  AgentOutput execute(std::string_view prompt, const UpstreamMap& upstream,
                      const MarketView*) const override {
    const double sens = mock_sensitivity(params_.seed, agent_, prompt);
    // Absent analysts drop out of the mean; no analysts at all gives 0.
    double mean = 0.0;
    if (!upstream.empty()) {
      for (const auto& [id, out] : upstream) mean += output_score(out);
      mean /= static_cast<double>(upstream.size());
    }
    OutlookScore out;
    switch (role_) {
      case Role::BullishOutlook: out.score = sens * std::max(0.0, mean); break;
      case Role::BearishOutlook: out.score = sens * std::min(0.0, mean); break;
      case Role::NeutralOutlook: out.score = sens * 0.5 * mean; break;
      default: fail(Errc::ExecutorError, "outlook mock built with a non-outlook role");
    }
    out.score = clamp_unit(out.score);
    return out;
  }

 private:
  Role role_;
  AgentId agent_;
  MockParams params_;
};

class TraderMock final : public AgentExecutor {
 public:
  TraderMock(AgentId agent, MockParams params) : agent_(agent), params_(params) {}

  AgentOutput execute(std::string_view prompt, const UpstreamMap& upstream,
                      const MarketView*) const override {
    const double gain = 2.0 * mock_sensitivity(params_.seed, agent_, prompt);
    double total = 0.0;
    for (const auto& [id, out] : upstream) total += output_score(out);
    const double conviction = gain * total;
    TradeDecision out;
    if (conviction > params_.trade_threshold) {
      out.decision = Decision::Buy;
    } else if (conviction < -params_.trade_threshold) {
      out.decision = Decision::Sell;
    }
    out.confidence = std::min(1.0, std::abs(conviction));
    return out;
  }

 private:
  AgentId agent_;
  MockParams params_;
};

}  // namespace

std::string_view role_name(Role role) {
  switch (role) {
    case Role::NewsAnalyst: return "news_analyst";
    case Role::TechnicalAnalyst: return "technical_analyst";
    case Role::FundamentalAnalyst: return "fundamental_analyst";
    case Role::BullishOutlook: return "bullish_outlook";
    case Role::BearishOutlook: return "bearish_outlook";
    case Role::NeutralOutlook: return "neutral_outlook";
    case Role::Trader: return "trader";
  }
  return "unknown";
}

std::optional<Role> parse_role(std::string_view text) {
  for (Role r : {Role::NewsAnalyst, Role::TechnicalAnalyst, Role::FundamentalAnalyst,
                 Role::BullishOutlook, Role::BearishOutlook, Role::NeutralOutlook, Role::Trader}) {
    if (role_name(r) == text) return r;
  }
  return std::nullopt;
}

bool is_analyst(Role role) {
  return role == Role::NewsAnalyst || role == Role::TechnicalAnalyst ||
         role == Role::FundamentalAnalyst;
}

std::string render_prompt(const PromptState& prompt) {
  std::string out = prompt.base_text;
  for (const auto& block : prompt.lesson_blocks) {
    if (block.empty()) continue;
    out += kLessonDelimiter;
    out += block;
  }
  return out;
}

std::string_view decision_name(Decision d) {
  switch (d) {
    case Decision::Buy: return "Buy";
    case Decision::Hold: return "Hold";
    case Decision::Sell: return "Sell";
  }
  return "Hold";
}

double output_score(const AgentOutput& out) {
  struct Visitor {
    double operator()(const AnalystSignal& s) const { return s.score; }
    double operator()(const OutlookScore& s) const { return s.score; }
    double operator()(const TradeDecision& d) const {
      switch (d.decision) {
        case Decision::Buy: return d.confidence;
        case Decision::Sell: return -d.confidence;
        case Decision::Hold: return 0.0;
      }
      return 0.0;
    }
  };
  return std::visit(Visitor{}, out);
}

std::string describe_output(const AgentOutput& out) {
  struct Visitor {
    std::string operator()(const AnalystSignal& s) const {
      return fmt::format("signal {:+.6f} ({})", s.score, s.rationale);
    }
    std::string operator()(const OutlookScore& s) const {
      return fmt::format("outlook {:+.6f}", s.score);
    }
    std::string operator()(const TradeDecision& d) const {
      return fmt::format("{} conf {:.6f}", decision_name(d.decision), d.confidence);
    }
  };
  return std::visit(Visitor{}, out);
}

AgentOutput execute_agent(const AgentSpec& spec, const UpstreamMap& upstream,
                          const MarketView* external) {
  if (spec.external_access && external == nullptr) {
    fail(Errc::MissingExternalData, "source agent '" + spec.name + "' needs market data");
  }
  if (!spec.external_access && external != nullptr) {
    fail(Errc::ForbiddenExternalAccess,
         "agent '" + spec.name + "' is not a source and may not read market data");
  }
  if (!spec.executor) fail(Errc::ExecutorError, "agent '" + spec.name + "' has no executor");
  try {
    return spec.executor->execute(render_prompt(spec.prompt), upstream, external);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(Errc::ExecutorError, "agent '" + spec.name + "': " + e.what());
  }
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t x = splitmix64(splitmix64(seed ^ splitmix64(stream)) + counter);
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

double mock_sensitivity(std::uint64_t seed, AgentId agent, std::string_view rendered_prompt) {
  const double baseline = 0.5 + 0.5 * counter_uniform(seed, kSensitivityStream, agent);
  const auto dampen = static_cast<double>(count_occurrences(rendered_prompt, kDampenDirective));
  const auto amplify = static_cast<double>(count_occurrences(rendered_prompt, kAmplifyDirective));
  return std::clamp(baseline + kSensitivityStep * (amplify - dampen), 0.0, 1.0);
}

double mock_sensitivity(const AgentSpec& spec, std::uint64_t seed) {
  return mock_sensitivity(seed, spec.id, render_prompt(spec.prompt));
}

std::shared_ptr<const AgentExecutor> make_mock_executor(Role role, AgentId agent,
                                                        const MockParams& params) {
  if (is_analyst(role)) return std::make_shared<AnalystMock>(role, agent, params);
  if (role == Role::Trader) return std::make_shared<TraderMock>(agent, params);
  return std::make_shared<OutlookMock>(role, agent, params);
}

std::string default_base_prompt(Role role) {
  switch (role) {
    case Role::NewsAnalyst:
      return "You are the news analyst. Read today's news and sentiment feed and rate the "
             "outlook for the stock from -1 (very negative) to +1 (very positive).";
    case Role::TechnicalAnalyst:
      return "You are the technical analyst. Study recent price history and moving-average "
             "structure and rate the trend from -1 to +1.";
    case Role::FundamentalAnalyst:
      return "You are the fundamental analyst. Assess valuation and company metrics and rate "
             "the stock from -1 to +1.";
    case Role::BullishOutlook:
      return "You are the bullish outlook agent. Using only the analyst reports, make the "
             "strongest case for upside.";
    case Role::BearishOutlook:
      return "You are the bearish outlook agent. Using only the analyst reports, make the "
             "strongest case for downside.";
    case Role::NeutralOutlook:
      return "You are the neutral outlook agent. Using only the analyst reports, weigh the "
             "conflicting signals without bias.";
    case Role::Trader:
      return "You are the trader. Weigh the competing outlooks and decide to Buy, Hold or Sell.";
  }
  return {};
}

std::vector<AgentSpec> make_mock_team(const WorkflowGraph& graph, const std::vector<Role>& roles,
                                      const MockParams& params) {
  if (roles.size() != graph.size()) {
    fail(Errc::ConfigError, "need one role per agent (" + std::to_string(graph.size()) + ")");
  }
  std::vector<AgentSpec> team;
  for (AgentId a = 0; a < graph.size(); ++a) {
    const Role role = roles[a];
    if (is_analyst(role) != graph.is_source(a)) {
      fail(Errc::ConfigError, "agent '" + graph.name(a) + "' has role " +
                                  std::string(role_name(role)) +
                                  " but analysts must be exactly the graph sources");
    }
    if ((role == Role::Trader) != (a == graph.sink())) {
      fail(Errc::ConfigError, "the trader role must be held by the sink agent only");
    }
    AgentSpec spec;
    spec.id = a;
    spec.name = graph.name(a);
    spec.role = role;
    spec.external_access = graph.is_source(a);
    spec.prompt.base_text = default_base_prompt(role);
    spec.executor = make_mock_executor(role, a, params);
    team.push_back(std::move(spec));
  }
  return team;
}

std::vector<Role> reference_roles(const WorkflowGraph& graph) {
  static const std::map<std::string, Role> by_name = {
      {"NAA", Role::NewsAnalyst},     {"TAA", Role::TechnicalAnalyst},
      {"FAA", Role::FundamentalAnalyst}, {"BOA", Role::BullishOutlook},
      {"BeOA", Role::BearishOutlook}, {"NOA", Role::NeutralOutlook},
      {"TRA", Role::Trader}};
  std::vector<Role> roles;
  for (AgentId a = 0; a < graph.size(); ++a) {
    auto it = by_name.find(graph.name(a));
    if (it == by_name.end()) fail(Errc::ConfigError, "no reference role for '" + graph.name(a) + "'");
    roles.push_back(it->second);
  }
  return roles;
}

std::vector<Role> default_roles(const WorkflowGraph& graph) {
  try {
    return reference_roles(graph);
  } catch (const Error&) {
  }
  static constexpr Role kAnalysts[] = {Role::NewsAnalyst, Role::TechnicalAnalyst,
                                       Role::FundamentalAnalyst};
  static constexpr Role kOutlooks[] = {Role::BullishOutlook, Role::BearishOutlook,
                                       Role::NeutralOutlook};
  std::vector<Role> roles;
  std::size_t analysts = 0, outlooks = 0;
  for (AgentId a = 0; a < graph.size(); ++a) {
    if (a == graph.sink()) {
      roles.push_back(Role::Trader);
    } else if (graph.is_source(a)) {
      roles.push_back(kAnalysts[analysts++ % 3]);
    } else {
      roles.push_back(kOutlooks[outlooks++ % 3]);
    }
  }
  return roles;
}

}  // namespace agentcredit
