#include "agentcredit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agentcredit/error.hpp"

namespace agentcredit {

double sharpe(std::span<const double> returns, double rf_daily) {
  if (returns.size() < 2) fail(Errc::TooFewReturns, "Sharpe needs at least two returns");
  const auto [lo, hi] = std::minmax_element(returns.begin(), returns.end());
  if (*lo == *hi) return 0.0;
  const double n = static_cast<double>(returns.size());
  const double mean = std::accumulate(returns.begin(), returns.end(), 0.0) / n;
  double ss = 0.0;
  for (double r : returns) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (sd == 0.0) return 0.0;
  return (mean - rf_daily) / sd;
}

double annualized_sharpe(std::span<const double> returns, double rf_daily) {
  return sharpe(returns, rf_daily) * std::sqrt(kTradingDaysPerYear);
}

std::vector<double> equity_curve(std::span<const double> returns) {
  std::vector<double> eq{1.0};
  eq.reserve(returns.size() + 1);
  for (double r : returns) eq.push_back(eq.back() * (1.0 + r));
  return eq;
}

double max_drawdown(std::span<const double> equity) {
  double peak = 0.0;
  double worst = 0.0;
  for (double e : equity) {
    peak = std::max(peak, e);
    if (peak > 0.0) worst = std::max(worst, 1.0 - e / peak);
  }
  return worst;
}

double total_return(std::span<const double> equity) {
  if (equity.empty()) fail(Errc::InsufficientData, "empty equity curve");
  return equity.back() / equity.front() - 1.0;
}

int decision_to_position(Decision d) {
  switch (d) {
    case Decision::Buy: return 1;
    case Decision::Sell: return -1;
    case Decision::Hold: return 0;
  }
  return 0;
}

std::vector<int> buy_and_hold_positions(std::size_t days) { return std::vector<int>(days, 1); }

std::vector<int> sma_crossover_positions(std::span<const double> closes, std::size_t fast,
                                         std::size_t slow) {
  std::vector<int> pos(closes.size(), 0);
  for (std::size_t d = 0; d < closes.size(); ++d) {
    if (d + 1 < slow) continue;
    auto mean_to = [&](std::size_t k) {
      return std::accumulate(closes.begin() + static_cast<std::ptrdiff_t>(d + 1 - k),
                             closes.begin() + static_cast<std::ptrdiff_t>(d + 1), 0.0) /
             static_cast<double>(k);
    };
    pos[d] = mean_to(fast) > mean_to(slow) ? 1 : 0;
  }
  return pos;
}

std::vector<int> macd_positions(std::span<const double> closes, std::size_t fast,
                                std::size_t slow, std::size_t signal) {
  std::vector<int> pos(closes.size(), 0);
  if (closes.empty()) return pos;
  const double af = 2.0 / (static_cast<double>(fast) + 1.0);
  const double as = 2.0 / (static_cast<double>(slow) + 1.0);
  const double ag = 2.0 / (static_cast<double>(signal) + 1.0);
  double ema_fast = closes[0], ema_slow = closes[0], ema_signal = 0.0;
  for (std::size_t d = 0; d < closes.size(); ++d) {
    ema_fast += af * (closes[d] - ema_fast);
    ema_slow += as * (closes[d] - ema_slow);
    const double macd = ema_fast - ema_slow;
    ema_signal = d == 0 ? macd : ema_signal + ag * (macd - ema_signal);
    if (d + 1 >= slow) pos[d] = macd > ema_signal ? 1 : 0;
  }
  return pos;
}

}  // namespace agentcredit
