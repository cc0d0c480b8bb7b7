#include <doctest.h>

#include <cmath>

#include "stlf/error.hpp"
#include "stlf/features.hpp"
#include "support.hpp"

using namespace stlf;

namespace {
FeatureColumn col(std::initializer_list<double> v) {
  FeatureColumn c{"c", FeatureAspect::Geographical, "", Eigen::VectorXd(static_cast<Eigen::Index>(v.size())), 0, {}};
  Eigen::Index i = 0;
  for (double x : v) c.values(i++) = x;
  return c;
}
}  // namespace

TEST_CASE("lag_series shifts and marks warm-up") {
  const FeatureColumn l = lag_series(col({1, 2, 3, 4}), 1);
  CHECK(l.warmup == 1);
  CHECK(std::isnan(l.values(0)));
  CHECK(l.values.tail(3) == Eigen::Vector3d(1, 2, 3));
  CHECK_THROWS_AS(lag_series(col({1, 2, 3, 4}), 0), ParameterError);
  CHECK_THROWS_AS(lag_series(col({1, 2, 3, 4}), 4), ParameterError);
}

TEST_CASE("moving_average is a trailing mean") {
  const FeatureColumn m = moving_average(col({1, 2, 3, 4}), 2);
  CHECK(m.warmup == 1);
  CHECK(m.values.tail(3) == Eigen::Vector3d(1.5, 2.5, 3.5));
  const FeatureColumn c = moving_average(col({7, 7, 7, 7, 7}), 3);
  CHECK(c.values.tail(3) == Eigen::Vector3d::Constant(7));

  Rng rng(8);
  FeatureColumn t{"t", FeatureAspect::Geographical, "f", stlf::test::random_vector(40, rng), 0, {}};
  const FeatureColumn w = moving_average(t, 7);
  for (Eigen::Index i = 6; i < 40; ++i) CHECK(w.values(i) == doctest::Approx(t.values.segment(i - 6, 7).mean()).epsilon(1e-12));
}

TEST_CASE("load lags are named and shifted") {
  const LoadSeries load = stlf::test::daily_load(Eigen::Vector3d(10, 20, 30));
  const auto lags = make_load_lags(load, 1);
  REQUIRE(lags.size() == 1);
  CHECK(lags[0].name == "load_lag_1");
  CHECK(lags[0].aspect == FeatureAspect::HistoricalLoad);
  CHECK(lags[0].values.tail(2) == Eigen::Vector2d(10, 20));
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(20, 1, 20);
  const auto seven = make_load_lags(stlf::test::daily_load(y), 7);
  REQUIRE(seven.size() == 7);
  CHECK(seven[6].name == "load_lag_7");
}

TEST_CASE("calendar features") {
  const auto start = Timestamp::local_midnight(parse_date("2015-01-01"), -5 * 3600);
  std::vector<Timestamp> ts;
  for (int i = 0; i < 365; ++i) ts.push_back(start.shifted(i * 86400));
  HolidayCalendar hol;
  for (const Date& d : us_federal_holidays(2015)) hol.insert(d);
  const auto cols = make_calendar_features(ts, hol);
  REQUIRE(cols.size() == 9);
  for (const auto& c : cols) CHECK(c.aspect == FeatureAspect::Social);
  // 2015-01-03 is a Saturday.
  CHECK(cols[5].name == "saturday");
  for (int d = 0; d < 7; ++d) CHECK(cols[static_cast<std::size_t>(d)].values(2) == (d == 5 ? 1.0 : 0.0));
  for (Eigen::Index r = 0; r < 365; ++r) {
    double sum = 0;
    for (int d = 0; d < 7; ++d) sum += cols[static_cast<std::size_t>(d)].values(r);
    CHECK(sum == 1.0);
  }
  CHECK(cols[7].values(0) == 1.0);  // New Year's Day
  CHECK(cols[7].values.sum() == 10.0);
  CHECK(cols[8].values(0) == 0.0);
  CHECK(cols[8].values(364) == 1.0);
}

TEST_CASE("US federal holidays") {
  const auto h = us_federal_holidays(2015);
  REQUIRE(h.size() == 10);
  CHECK(format_date(h[1]) == "2015-01-19");  // third Monday of January
  CHECK(format_date(h[8]) == "2015-11-26");  // fourth Thursday of November
  CHECK(us_federal_holiday_names()[8] == "Thanksgiving Day");
}
