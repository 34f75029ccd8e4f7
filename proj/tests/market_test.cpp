#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "agentcredit/error.hpp"
#include "agentcredit/market.hpp"

namespace agentcredit {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("agentcredit_market_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return path_ / name;
  }

 private:
  fs::path path_;
};

Errc load_error(const fs::path& path) {
  try {
    load_market_csv(path);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "loaded " << path;
  return Errc::IoError;
}

const char* kHeader = "date,open,high,low,close,volume\n";

TEST(MarketCsv, ThreeRowsAndReturns) {
  TempDir dir;
  const auto path = dir.write("AAA.csv", std::string(kHeader) +
                                             "2024-10-01,100,101,99,100,1000\n"
                                             "2024-10-02,100,111,99,110,1000\n"
                                             "2024-10-03,110,111,98,99,1000\n");
  const auto s = load_market_csv(path);
  EXPECT_EQ(s.symbol, "AAA");
  ASSERT_EQ(s.size(), 3u);
  const auto r = s.returns();
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], 0.10, 1e-15);
  EXPECT_NEAR(r[1], -0.10, 1e-15);
  EXPECT_NEAR(s.next_day_return(0), 0.10, 1e-15);
  EXPECT_THROW(s.next_day_return(2), Error);
  EXPECT_EQ(format_date(s.rows[2].date), "2024-10-03");
}

TEST(MarketCsv, Errors) {
  TempDir dir;
  EXPECT_EQ(load_error(dir.write("zero.csv", std::string(kHeader) + "2024-10-01,1,1,1,0,1\n")),
            Errc::NonPositivePrice);
  EXPECT_EQ(load_error(dir.write("dup.csv", std::string(kHeader) + "2024-10-01,1,1,1,1,1\n2024-10-01,1,1,1,1,1\n")),
            Errc::DuplicateDate);
  EXPECT_EQ(load_error(dir.write("unsorted.csv",
                                 std::string(kHeader) + "2024-10-02,1,1,1,1,1\n2024-10-01,1,1,1,1,1\n")),
            Errc::UnsortedDates);
  EXPECT_EQ(load_error(dir.write("header.csv", "date,close\n2024-10-01,1\n")), Errc::ParseError);
  EXPECT_EQ(load_error(dir.write("number.csv", std::string(kHeader) + "2024-10-01,1,1,1,abc,1\n")),
            Errc::ParseError);
  EXPECT_EQ(load_error(dir.write("date.csv", std::string(kHeader) + "2024-13-01,1,1,1,1,1\n")), Errc::ParseError);
  EXPECT_EQ(load_error(dir.write("empty.csv", "")), Errc::ParseError);
  EXPECT_EQ(load_error(fs::path("/nonexistent/dir/file.csv")), Errc::IoError);
  try {
    load_market_csv(dir.write("line.csv", std::string(kHeader) + "2024-10-01,1,1,1,1,1\n2024-10-02,1,1\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(MarketCsv, RoundTripWithFeatures) {
  TempDir dir;
  const auto [series, features] = synthesize_market({3, 12, Regime::Sideways, 0.3, 0.015});
  const auto path = dir.write("round.csv", "");
  write_market_csv(path, series);
  const auto back = load_market_csv(path, "X");
  EXPECT_EQ(back.symbol, "X");
  ASSERT_EQ(back.size(), series.size());
  for (std::size_t d = 0; d < series.size(); ++d) {
    EXPECT_EQ(back.rows[d].date, series.rows[d].date);
    EXPECT_EQ(back.rows[d].close, series.rows[d].close);
  }

  std::string text = "date,sentiment,fundamental\n";
  for (const auto& f : features.days) {
    text += format_date(f.date) + "," + std::to_string(f.sentiment) + "," + std::to_string(f.fundamental) + "\n";
  }
  const auto loaded = load_feature_csv(dir.write("features.csv", text), back);
  ASSERT_EQ(loaded.days.size(), series.size());
  EXPECT_NEAR(loaded.days[4].sentiment, features.days[4].sentiment, 1e-6);

  // A missing date is an error.
  const auto cut = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
  EXPECT_THROW(load_feature_csv(dir.write("short.csv", cut), back), Error);
}

TEST(Synth, DeterministicAndBusinessDays) {
  const SynthParams p{11, 60, Regime::Bull, 0.3, 0.015};
  const auto [a, fa] = synthesize_market(p);
  const auto [b, fb] = synthesize_market(p);
  ASSERT_EQ(a.size(), 60u);
  EXPECT_EQ(a.closes(), b.closes());
  for (std::size_t d = 0; d < 60; ++d) {
    EXPECT_EQ(fa.days[d].sentiment, fb.days[d].sentiment);
    EXPECT_EQ(fa.days[d].date, a.rows[d].date);
    const std::chrono::weekday wd{std::chrono::sys_days{a.rows[d].date}};
    EXPECT_NE(wd, std::chrono::Saturday);
    EXPECT_NE(wd, std::chrono::Sunday);
  }
  EXPECT_EQ(format_date(a.rows[0].date), "2024-10-01");
  EXPECT_NO_THROW(validate_series(a));
  auto q = p;
  q.seed = 12;
  EXPECT_NE(synthesize_market(q).first.closes(), a.closes());
  EXPECT_THROW(synthesize_market({1, 1, Regime::Bull, 0.3, 0.015}), Error);
}

TEST(Synth, RegimeNames) {
  EXPECT_EQ(parse_regime("bull"), Regime::Bull);
  EXPECT_EQ(parse_regime("bear"), Regime::Bear);
  EXPECT_EQ(parse_regime("sideways"), Regime::Sideways);
  EXPECT_THROW(parse_regime("crab"), Error);
  EXPECT_GT(regime_drift(Regime::Bull), 0.0);
  EXPECT_LT(regime_drift(Regime::Bear), 0.0);
  EXPECT_EQ(regime_drift(Regime::Sideways), 0.0);
}

TEST(SynthMonteCarlo, BullDriftExceedsBearOver1000Days) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto bull = synthesize_market({seed, 1000, Regime::Bull, 0.3, 0.015}).first.returns();
    const auto bear = synthesize_market({seed, 1000, Regime::Bear, 0.3, 0.015}).first.returns();
    const double mb = std::accumulate(bull.begin(), bull.end(), 0.0) / static_cast<double>(bull.size());
    const double me = std::accumulate(bear.begin(), bear.end(), 0.0) / static_cast<double>(bear.size());
    EXPECT_GT(mb, me) << seed;
  }
}

TEST(SynthMonteCarlo, SentimentLeadsNextReturnAtSignalStrength) {
  // Correlation of day-t sentiment with the t -> t+1 return, pooled over seeds.
  auto corr = [](double s) {
    double sxy = 0, sxx = 0, syy = 0, sx = 0, sy = 0;
    std::size_t n = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto [series, f] = synthesize_market({seed, 500, Regime::Sideways, s, 0.015});
      for (std::size_t d = 0; d + 1 < series.size(); ++d) {
        const double x = f.days[d].sentiment, y = series.next_day_return(d);
        sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
        ++n;
      }
    }
    const double dn = static_cast<double>(n);
    return (sxy - sx * sy / dn) / std::sqrt((sxx - sx * sx / dn) * (syy - sy * sy / dn));
  };
  EXPECT_NEAR(corr(0.0), 0.0, 0.03);
  EXPECT_NEAR(corr(0.3), 0.3, 0.03);
}

}  // namespace
}  // namespace agentcredit
