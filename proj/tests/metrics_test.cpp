#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "agentcredit/error.hpp"
#include "agentcredit/metrics.hpp"

namespace agentcredit {
namespace {

TEST(Metrics, MaxDrawdownExample) {
  const std::vector<double> eq = {1.0, 1.2, 0.9, 1.1};
  EXPECT_DOUBLE_EQ(max_drawdown(eq), 0.25);
  EXPECT_EQ(max_drawdown(std::vector<double>{1.0, 1.1, 1.2}), 0.0);
  EXPECT_EQ(max_drawdown(std::vector<double>{1.0}), 0.0);
  EXPECT_DOUBLE_EQ(max_drawdown(std::vector<double>{1.0, 0.5, 2.0, 1.0}), 0.5);
}

TEST(Metrics, SharpeExamples) {
  EXPECT_NEAR(sharpe(std::vector<double>{0.02, 0.00}), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(sharpe(std::vector<double>{0.02, 0.00}), 0.70711, 1e-5);
  EXPECT_EQ(sharpe(std::vector<double>{0.01, 0.01, 0.01}), 0.0);
  EXPECT_EQ(sharpe(std::vector<double>{0.0, 0.0}), 0.0);
  EXPECT_NEAR(sharpe(std::vector<double>{0.02, 0.00}, 0.01), 0.0, 1e-15);
  EXPECT_NEAR(annualized_sharpe(std::vector<double>{0.02, 0.00}), std::sqrt(252.0 / 2.0), 1e-9);
  try {
    sharpe(std::vector<double>{0.01});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TooFewReturns);
  }
  EXPECT_THROW(sharpe(std::vector<double>{}), Error);
}

TEST(Metrics, TotalReturnCompounds) {
  const auto eq = equity_curve(std::vector<double>{0.10, -0.10});
  ASSERT_EQ(eq.size(), 3u);
  EXPECT_NEAR(total_return(eq), -0.01, 1e-15);
  EXPECT_EQ(total_return(equity_curve(std::vector<double>{})), 0.0);
  EXPECT_THROW(total_return(std::vector<double>{}), Error);
}

TEST(Metrics, Positions) {
  EXPECT_EQ(decision_to_position(Decision::Buy), 1);
  EXPECT_EQ(decision_to_position(Decision::Hold), 0);
  EXPECT_EQ(decision_to_position(Decision::Sell), -1);
  EXPECT_EQ(buy_and_hold_positions(3), (std::vector<int>{1, 1, 1}));
}

TEST(Metrics, SmaCrossover) {
  std::vector<double> up(60), down(60);
  for (std::size_t d = 0; d < 60; ++d) {
    up[d] = 100.0 + static_cast<double>(d);
    down[d] = 200.0 - static_cast<double>(d);
  }
  const auto pu = sma_crossover_positions(up);
  const auto pd = sma_crossover_positions(down);
  for (std::size_t d = 0; d < 49; ++d) EXPECT_EQ(pu[d], 0) << d;
  for (std::size_t d = 49; d < 60; ++d) {
    EXPECT_EQ(pu[d], 1) << d;
    EXPECT_EQ(pd[d], 0) << d;
  }
  // Small windows on a hand-checked series.
  EXPECT_EQ(sma_crossover_positions(std::vector<double>{3, 1, 2, 4}, 1, 2), (std::vector<int>{0, 0, 1, 1}));
}

TEST(Metrics, MacdWarmupAndTrend) {
  std::vector<double> up(40);
  for (std::size_t d = 0; d < 40; ++d) up[d] = 100.0 * std::pow(1.01, static_cast<double>(d) * d / 40.0);
  const auto p = macd_positions(up);
  for (std::size_t d = 0; d < 25; ++d) EXPECT_EQ(p[d], 0) << d;
  EXPECT_EQ(p.back(), 1);
  EXPECT_TRUE(macd_positions(std::vector<double>{}).empty());
}

// --- properties -------------------------------------------------------------

TEST(MetricsProperty, CompoundingAndDrawdownBounds) {
  std::mt19937_64 rng(6001);
  std::uniform_real_distribution<double> r(-0.2, 0.2);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> rets(2 + rng() % 40);
    for (double& x : rets) x = r(rng);
    const auto eq = equity_curve(rets);
    double prod = 1.0;
    for (double x : rets) prod *= 1.0 + x;
    EXPECT_NEAR(total_return(eq), prod - 1.0, 1e-12);
    const double dd = max_drawdown(eq);
    EXPECT_GE(dd, 0.0);
    EXPECT_LE(dd, 1.0);
    // Sharpe is scale invariant.
    const double s = sharpe(rets);
    std::vector<double> scaled(rets);
    for (double& x : scaled) x *= 3.0;
    EXPECT_NEAR(sharpe(scaled), s, 1e-9);
  }
}

}  // namespace
}  // namespace agentcredit
