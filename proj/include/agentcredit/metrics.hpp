#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "agentcredit/agents.hpp"

namespace agentcredit {

inline constexpr double kTradingDaysPerYear = 252.0;

// (mean - rf) / sample stddev. Constant series give 0. Throws TooFewReturns
// for fewer than two returns.
double sharpe(std::span<const double> returns, double rf_daily = 0.0);
double annualized_sharpe(std::span<const double> returns, double rf_daily = 0.0);

// Equity curve starting at 1.0, one extra point per return.
std::vector<double> equity_curve(std::span<const double> returns);

// Largest peak-to-trough decline relative to the running peak, in [0, 1].
double max_drawdown(std::span<const double> equity);

double total_return(std::span<const double> equity);

// Buy -> +1, Hold -> 0, Sell -> -1.
int decision_to_position(Decision d);

// Baseline position rules over closes; position[d] is held from d to d+1.
std::vector<int> buy_and_hold_positions(std::size_t days);
// Long while the fast SMA is above the slow one, flat otherwise or while
// history is shorter than the slow window.
std::vector<int> sma_crossover_positions(std::span<const double> closes, std::size_t fast = 20,
                                         std::size_t slow = 50);
// Long while MACD is above its signal line, flat during the slow-EMA warmup.
std::vector<int> macd_positions(std::span<const double> closes, std::size_t fast = 12,
                                std::size_t slow = 26, std::size_t signal = 9);

}  // namespace agentcredit
