#include <doctest.h>

#include <cmath>

#include "solar_refs.hpp"
#include "stlf/astro.hpp"
#include "stlf/error.hpp"
#include "stlf/timeseries.hpp"

using namespace stlf;

TEST_CASE("zenith matches the SPA reference table") {
  for (const auto& r : test::kZenithRefs) {
    const GeoLocation loc{r.latitude, r.longitude, 0.0, 0.0};
    const double z = solar_position(loc, Timestamp::parse(r.utc)).zenith;
    INFO(r.utc << " at " << r.latitude << "," << r.longitude);
    CHECK(std::abs(z - r.zenith_deg) < 0.5);
  }
}

TEST_CASE("civil twilight matches the almanac table") {
  for (const auto& r : test::kTwilightRefs) {
    const GeoLocation loc{r.latitude, r.longitude, 0.0, r.utc_offset_hours};
    INFO(r.date << " at " << r.latitude);
    CHECK(std::abs(civil_twilight_duration(loc, parse_date(r.date)) - r.minutes) < 5.0);
  }
}

TEST_CASE("geometry edge cases") {
  const GeoLocation pole{90.0, 0.0, 0.0, 0.0};
  for (int h = 0; h < 24; ++h) {
    const auto t = Timestamp::parse("2015-12-21T00:00:00Z").shifted(h * 3600);
    CHECK(solar_position(pole, t).zenith > 90.0);
  }
  CHECK(civil_twilight_duration({80.0, 0.0, 0.0, 0.0}, parse_date("2015-12-21")) == 0.0);
  CHECK(civil_twilight_duration({80.0, 0.0, 0.0, 0.0}, parse_date("2015-06-21")) == 1440.0);
  CHECK_THROWS_AS((GeoLocation{91.0, 0.0, 0.0, 0.0}.validate()), ParameterError);
}

TEST_CASE("zenith is continuous minute to minute") {
  const GeoLocation loc{43.66, -70.26, 0.0, -5.0};
  double prev = solar_position(loc, Timestamp::parse("2015-05-01T00:00:00Z")).zenith;
  for (int m = 1; m <= 1440; ++m) {
    const double z = solar_position(loc, Timestamp::parse("2015-05-01T00:00:00Z").shifted(60 * m)).zenith;
    CHECK(std::abs(z - prev) < 0.3);
    prev = z;
  }
}

TEST_CASE("Haurwitz clear-sky irradiance") {
  CHECK(haurwitz_ghi(0.0) == doctest::Approx(1098.0 * std::exp(-0.057)).epsilon(1e-12));
  CHECK(haurwitz_ghi(90.0) == 0.0);
  CHECK(haurwitz_ghi(120.0) == 0.0);
  const GeoLocation loc{43.66, -70.26, 0.0, -5.0};
  CHECK(clear_sky_ghi(loc, Timestamp::parse("2015-06-21T06:00:00Z")) == 0.0);
}

TEST_CASE("daily clear-sky GHI has an annual cycle peaking near the solstice") {
  const GeoLocation loc{44.0, -70.0, 0.0, -5.0};
  const auto start = parse_date("2015-01-01");
  std::int64_t best = 0, worst = 0;
  double hi = -1, lo = 1e9;
  for (std::int64_t d = 0; d < 365; ++d) {
    const double v = daily_astro(loc, date_from_days(days_since_epoch(start) + d), 10.0).clear_sky_ghi_daily;
    if (v > hi) hi = v, best = d;
    if (v < lo) lo = v, worst = d;
  }
  CHECK(std::abs(best - 171) <= 10);
  CHECK((std::abs(worst - 354) <= 10 || worst <= 5));
  CHECK(hi > 2.5 * lo);
}

TEST_CASE("twilight duration at 44N passes 820 minutes twice a year") {
  const GeoLocation loc{44.0, -70.0, 0.0, -5.0};
  const auto start = parse_date("2015-01-01");
  int crossings = 0;
  double prev = civil_twilight_duration(loc, start);
  for (std::int64_t d = 1; d < 365; ++d) {
    const double v = civil_twilight_duration(loc, date_from_days(days_since_epoch(start) + d));
    if ((prev - 820.0) * (v - 820.0) < 0) ++crossings;
    prev = v;
  }
  CHECK(crossings == 2);
}

TEST_CASE("sunshine duration threshold rule") {
  const std::vector<double> clear{0, 100, 400, 800, 400, 100, 0};
  std::vector<double> same = clear, overcast, dark(clear.size(), 0.0);
  for (double c : clear) overcast.push_back(0.3 * c);
  CHECK(*sunshine_duration(same, clear, 30.0) == 150.0);
  CHECK(*sunshine_duration(overcast, clear, 30.0) == 0.0);
  CHECK(*sunshine_duration(dark, clear, 30.0) == 0.0);
  CHECK_FALSE(sunshine_duration({}, {}, 30.0).has_value());
}

TEST_CASE("moon phase cycle") {
  CHECK(moon_phase(kNewMoonEpochUnix) == doctest::Approx(0.0));
  CHECK(moon_phase(kNewMoonEpochUnix + 14.765294 * 86400) == doctest::Approx(0.5));
  const double wrap = moon_phase(kNewMoonEpochUnix + kSynodicMonthDays * 86400);
  CHECK((wrap < 1e-9 || wrap > 1 - 1e-9));
}

TEST_CASE("daily aggregates agree with per-instant evaluation") {
  for (const GeoLocation loc : {GeoLocation{43.66, -70.26, 0.0, -5.0}, GeoLocation{-33.87, 151.21, 0.0, 10.0},
                                GeoLocation{69.65, 18.96, 0.0, 1.0}}) {
    for (const char* day : {"2015-01-15", "2015-03-20", "2015-06-21", "2015-10-01"}) {
      const Date d = parse_date(day);
      const DailyAstroRecord rec = daily_astro(loc, d, 2.0);
      // Same sample instants, full ephemeris at each one.
      const double noon = solar_noon(loc, d);
      double energy = 0.0, zsum = 0.0;
      int up = 0;
      for (int i = 0; i < 720; ++i) {
        const double t = noon + (-720.0 + (i + 0.5) * 2.0) * 60.0;
        const double z = solar_position(loc, t).zenith;
        if (z < 90.0) energy += clear_sky_ghi(loc, t) * 2.0 / 60.0, zsum += z, ++up;
      }
      INFO(day << " at " << loc.latitude);
      CHECK(std::abs(rec.clear_sky_ghi_daily - energy) < 1e-3 * std::max(1.0, energy));
      if (up > 0) CHECK(std::abs(rec.mean_daytime_sza - zsum / up) < 1e-4);
    }
  }
}
