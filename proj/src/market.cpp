#include "agentcredit/market.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "agentcredit/error.hpp"

namespace agentcredit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty() || !std::isfinite(value)) {
    fail(Errc::ParseError, fmt::format("line {}: bad number '{}'", line_no, text));
  }
  return value;
}

std::ifstream open_or_fail(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  return in;
}

bool is_business_day(Date d) {
  const std::chrono::weekday wd{std::chrono::sys_days{d}};
  return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

}  // namespace

Date parse_date(std::string_view text) {
  text = trim(text);
  int y = 0;
  unsigned m = 0, d = 0;
  auto field = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc{} && ptr == text.data() + pos + len;
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !field(0, 4, y) ||
      !field(5, 2, m) || !field(8, 2, d)) {
    fail(Errc::ParseError, "bad date '" + std::string(text) + "'");
  }
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) fail(Errc::ParseError, "invalid date '" + std::string(text) + "'");
  return date;
}

std::string format_date(Date d) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(d.year()),
                     static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
}

std::vector<double> MarketSeries::closes() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.close);
  return out;
}

std::vector<double> MarketSeries::returns() const {
  std::vector<double> out;
  for (std::size_t t = 1; t < rows.size(); ++t) out.push_back(rows[t].close / rows[t - 1].close - 1.0);
  return out;
}

double MarketSeries::next_day_return(std::size_t day) const {
  if (day + 1 >= rows.size()) fail(Errc::InsufficientData, "no price after day " + std::to_string(day));
  return rows[day + 1].close / rows[day].close - 1.0;
}

void validate_series(const MarketSeries& series) {
  for (std::size_t i = 0; i < series.rows.size(); ++i) {
    const Bar& b = series.rows[i];
    if (!(b.open > 0 && b.high > 0 && b.low > 0 && b.close > 0)) {
      fail(Errc::NonPositivePrice, "non-positive price on " + format_date(b.date));
    }
    if (i > 0) {
      const Date prev = series.rows[i - 1].date;
      if (b.date == prev) fail(Errc::DuplicateDate, "duplicate date " + format_date(b.date));
      if (b.date < prev) fail(Errc::UnsortedDates, "date " + format_date(b.date) + " out of order");
    }
  }
}

MarketSeries load_market_csv(const std::filesystem::path& path, std::string symbol) {
  auto in = open_or_fail(path);
  MarketSeries series;
  series.symbol = symbol.empty() ? path.stem().string() : std::move(symbol);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (!header_seen) {
      static const std::vector<std::string_view> expected = {"date", "open", "high",
                                                             "low",  "close", "volume"};
      if (cells != expected) {
        fail(Errc::ParseError, fmt::format("line {}: expected header date,open,high,low,close,volume", line_no));
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 6) {
      fail(Errc::ParseError, fmt::format("line {}: expected 6 fields, got {}", line_no, cells.size()));
    }
    Bar bar;
    try {
      bar.date = parse_date(cells[0]);
    } catch (const Error& e) {
      fail(Errc::ParseError, fmt::format("line {}: {}", line_no, e.what()));
    }
    bar.open = parse_number(cells[1], line_no);
    bar.high = parse_number(cells[2], line_no);
    bar.low = parse_number(cells[3], line_no);
    bar.close = parse_number(cells[4], line_no);
    bar.volume = parse_number(cells[5], line_no);
    series.rows.push_back(bar);
  }
  if (!header_seen) fail(Errc::ParseError, "empty file " + path.string());
  validate_series(series);
  return series;
}

FeatureView load_feature_csv(const std::filesystem::path& path, const MarketSeries& series) {
  auto in = open_or_fail(path);
  std::map<Date, DayFeatures> by_date;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (!header_seen) {
      static const std::vector<std::string_view> expected = {"date", "sentiment", "fundamental"};
      if (cells != expected) {
        fail(Errc::ParseError, fmt::format("line {}: expected header date,sentiment,fundamental", line_no));
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 3) fail(Errc::ParseError, fmt::format("line {}: expected 3 fields", line_no));
    DayFeatures f;
    try {
      f.date = parse_date(cells[0]);
    } catch (const Error& e) {
      fail(Errc::ParseError, fmt::format("line {}: {}", line_no, e.what()));
    }
    f.sentiment = parse_number(cells[1], line_no);
    f.fundamental = parse_number(cells[2], line_no);
    if (!by_date.emplace(f.date, f).second) {
      fail(Errc::DuplicateDate, "duplicate feature date " + format_date(f.date));
    }
  }
  FeatureView view;
  for (const auto& bar : series.rows) {
    auto it = by_date.find(bar.date);
    if (it == by_date.end()) {
      fail(Errc::InsufficientData, "no features for " + format_date(bar.date));
    }
    view.days.push_back(it->second);
  }
  return view;
}

void write_market_csv(const std::filesystem::path& path, const MarketSeries& series) {
  std::ofstream out(path);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out << "date,open,high,low,close,volume\n";
  for (const auto& b : series.rows) {
    out << fmt::format("{},{},{},{},{},{:.0f}\n", format_date(b.date), b.open,
                       b.high, b.low, b.close, b.volume);
  }
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::Bull: return "bull";
    case Regime::Bear: return "bear";
    case Regime::Sideways: return "sideways";
  }
  return "sideways";
}

Regime parse_regime(std::string_view text) {
  for (Regime r : {Regime::Bull, Regime::Bear, Regime::Sideways}) {
    if (regime_name(r) == text) return r;
  }
  fail(Errc::ConfigError, "unknown regime '" + std::string(text) + "'");
}

double regime_drift(Regime r) {
  switch (r) {
    case Regime::Bull: return 0.0015;
    case Regime::Bear: return -0.0015;
    case Regime::Sideways: return 0.0;
  }
  return 0.0;
}

std::pair<MarketSeries, FeatureView> synthesize_market(const SynthParams& params) {
  if (params.days < 2) fail(Errc::InsufficientData, "need at least 2 days");
  const double s = std::clamp(params.signal_strength, 0.0, 1.0);
  const double noise_weight = std::sqrt(1.0 - s * s);
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // shocks[t] drives the return from day t-1 to day t.
  std::vector<double> shocks(params.days + 1);
  for (auto& z : shocks) z = normal(rng);

  MarketSeries series;
  series.symbol = "SYN-" + std::string(regime_name(params.regime));
  FeatureView features;
  Date date{std::chrono::year{2024}, std::chrono::October, std::chrono::day{1}};
  double close = 100.0;
  double value_state = 0.0;
  const double drift = regime_drift(params.regime);
  for (std::size_t t = 0; t < params.days; ++t) {
    while (!is_business_day(date)) date = std::chrono::sys_days{date} + std::chrono::days{1};
    const double open = close;
    if (t > 0) {
      const double r = std::max(-0.5, drift + params.volatility * shocks[t]);
      close = close * (1.0 + r);
    }
    Bar bar{date, open, std::max(open, close) * 1.002, std::min(open, close) * 0.998, close,
            1.0e6 * (1.0 + 0.25 * std::abs(shocks[t]))};
    series.rows.push_back(bar);

    // Features observed on day t lead the day t -> t+1 shock.
    const double next = shocks[t + 1];
    const double sentiment = 0.5 * (s * next + noise_weight * normal(rng));
    value_state = 0.8 * value_state + 0.2 * (0.5 * s * next + normal(rng));
    features.days.push_back({date, sentiment, 0.5 * value_state});
    date = std::chrono::sys_days{date} + std::chrono::days{1};
  }
  return {std::move(series), std::move(features)};
}

}  // namespace agentcredit
