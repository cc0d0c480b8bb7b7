#pragma once

// Seeded synthetic daily-peak load with known drivers:
//   load = base + weekday offset + holiday offset
//        + s_below·max(0, T_bal − T) + s_above·max(0, T − T_bal)
//        + w·CKGHI(t − lag) + w_ghi·(GHI(t) − E[clear fraction]·CKGHI(t)) + noise
// where T is the daily maximum temperature. T itself follows the lagged
// clear-sky signal plus AR(1) weather noise.

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "stlf/astro.hpp"
#include "stlf/features.hpp"
#include "stlf/timeseries.hpp"

namespace stlf {

struct SynthConfig {
  Eigen::Index n_days = 4748;  // 2003-01-01 through 2015-12-31
  std::uint64_t seed = 1;
  Date start{std::chrono::year{2003}, std::chrono::January, std::chrono::day{1}};

  double base_load = 1200.0;      // MW
  double balance_point = 70.0;    // °F
  double slope_below = 8.0;       // MW per °F under the balance point
  double slope_above = 20.0;      // MW per °F over it
  Eigen::Index solar_lag = 50;    // days
  double solar_weight = -0.04;    // MW per Wh/m² of lagged daily clear-sky GHI
  double ghi_weight = -0.03;      // MW per Wh/m² of cloud-driven GHI anomaly; 0 disables
  std::array<double, 7> weekday_offsets{0.0, 15.0, 15.0, 15.0, 5.0, -90.0, -120.0};  // Monday first
  double holiday_offset = -100.0;
  double noise_std = 15.0;        // MW

  double temp_mean = 55.0;        // °F
  double temp_amplitude = 25.0;   // °F, half the seasonal swing
  double temp_noise_std = 7.0;    // °F, stationary AR(1) deviation
  double temp_ar = 0.65;

  int decimals = 2;  // rounding of emitted values; negative keeps full precision

  void validate() const;
};

struct SynthTruth {
  double balance_point = 0.0;
  Eigen::Index solar_lag = 0;
  std::array<double, 7> weekday_offsets{};
  double holiday_offset = 0.0;
  // Per-day driver values on the load dates.
  Eigen::VectorXd temperature;     // daily maximum, as emitted
  Eigen::VectorXd ckghi;           // daily clear-sky GHI, Wh/m²
  Eigen::VectorXd ckghi_lagged;    // CKGHI(t − lag)
  Eigen::VectorXd ghi_anomaly;     // GHI(t) − E[clear fraction]·CKGHI(t)
  Eigen::VectorXd holiday;         // 1 on holidays
  std::vector<int> weekday;        // 0 = Monday
};

struct SynthData {
  LoadSeries load;
  std::vector<FeatureColumn> weather;  // named name_unit; ghi_whm2 included
  HolidayCalendar holidays;
  SynthTruth truth;
};

/// Weather columns in emission order.
const std::vector<std::string>& synth_weather_columns();

SynthData generate(const SynthConfig& config, const GeoLocation& location);

/// Portland, Maine (UTC-5), the default synthetic site.
GeoLocation default_synth_location();

}  // namespace stlf
