#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace agentcredit {

using Date = std::chrono::year_month_day;

Date parse_date(std::string_view text);  // ISO-8601 YYYY-MM-DD, throws ParseError
std::string format_date(Date d);

struct Bar {
  Date date;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double volume = 0.0;
};

struct MarketSeries {
  std::string symbol;
  std::vector<Bar> rows;

  std::size_t size() const { return rows.size(); }
  std::vector<double> closes() const;
  // r_t = close_t / close_{t-1} - 1 for t >= 1; size() - 1 entries.
  std::vector<double> returns() const;
  // Return earned by holding from day d to day d+1.
  double next_day_return(std::size_t day) const;
};

struct DayFeatures {
  Date date;
  double sentiment = 0.0;
  double fundamental = 0.0;
};

// External features aligned row-for-row with a MarketSeries.
struct FeatureView {
  std::vector<DayFeatures> days;
};

// Checks ordering, uniqueness and positivity; throws NonPositivePrice,
// DuplicateDate or UnsortedDates.
void validate_series(const MarketSeries& series);

// Header `date,open,high,low,close,volume`. Throws IoError, ParseError
// (with line number) or a validation error.
MarketSeries load_market_csv(const std::filesystem::path& path, std::string symbol = "");

// Header `date,sentiment,fundamental`; every series date must be present.
FeatureView load_feature_csv(const std::filesystem::path& path, const MarketSeries& series);

void write_market_csv(const std::filesystem::path& path, const MarketSeries& series);

enum class Regime { Bull, Bear, Sideways };

std::string_view regime_name(Regime r);
Regime parse_regime(std::string_view text);  // throws ConfigError

struct SynthParams {
  std::uint64_t seed = 42;
  std::size_t days = 60;
  Regime regime = Regime::Bull;
  double signal_strength = 0.3;  // correlation of sentiment with next-day shock
  double volatility = 0.015;
};

double regime_drift(Regime r);

// Seeded geometric random walk on business days from 2024-10-01, plus
// features that lead next-day returns by `signal_strength`.
std::pair<MarketSeries, FeatureView> synthesize_market(const SynthParams& params);

}  // namespace agentcredit
