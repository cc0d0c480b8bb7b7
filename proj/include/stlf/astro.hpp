#pragma once

// Astronomical candidate features: solar geometry, twilight and day length,
// clear-sky irradiance, sunshine duration and lunar phase.
//
// Solar position uses the NOAA Julian-century series for the sun's apparent
// longitude, obliquity and the equation of time; zenith angles are geometric,
// with no refraction. Clear-sky GHI is the Haurwitz model.

#include <optional>
#include <span>

#include "stlf/timeseries.hpp"

namespace stlf {

struct GeoLocation {
  double latitude = 0.0;   // degrees, [-90, 90]
  double longitude = 0.0;  // degrees east, [-180, 180]
  double elevation = 0.0;  // metres
  double utc_offset_hours = 0.0;

  /// Throws ParameterError when a coordinate is out of range.
  void validate() const;
  std::int32_t utc_offset_seconds() const;
};

struct SolarPosition {
  double zenith = 0.0;   // degrees, [0, 180]
  double azimuth = 0.0;  // degrees clockwise from north, [0, 360)
  double altitude() const { return 90.0 - zenith; }
};

SolarPosition solar_position(const GeoLocation& loc, double unix_seconds);
inline SolarPosition solar_position(const GeoLocation& loc, const Timestamp& t) {
  return solar_position(loc, static_cast<double>(t.unix_seconds()));
}

/// Haurwitz clear-sky GHI in W/m² for a zenith angle in degrees; 0 at or below
/// the horizon.
double haurwitz_ghi(double zenith_deg);

double clear_sky_ghi(const GeoLocation& loc, double unix_seconds);
inline double clear_sky_ghi(const GeoLocation& loc, const Timestamp& t) {
  return clear_sky_ghi(loc, static_cast<double>(t.unix_seconds()));
}

/// Minutes between the sun's centre rising through `altitude_deg` and setting
/// through it, for the solar day around local noon of `date`. Clamps to 0 when
/// the sun never reaches the altitude and to 1440 when it never drops below.
double time_above_altitude(const GeoLocation& loc, const Date& date, double altitude_deg);

/// Civil dawn (-6°) to civil dusk, in minutes.
double civil_twilight_duration(const GeoLocation& loc, const Date& date);

/// Sunrise to sunset with the conventional -0.833° horizon, in minutes.
double daylight_duration(const GeoLocation& loc, const Date& date);

/// Unix time of the solar noon nearest local noon of `date`.
double solar_noon(const GeoLocation& loc, const Date& date);

struct DailyAstroRecord {
  Date date;
  double mean_daytime_sza = 0.0;         // degrees; noon zenith on polar-night days
  double noon_sza = 0.0;                 // degrees
  double civil_twilight_duration = 0.0;  // minutes
  double daylight_duration = 0.0;        // minutes
  double clear_sky_ghi_daily = 0.0;      // Wh/m²
  double moon_phase = 0.0;               // [0, 1) at local noon
};

/// Daily aggregates over the solar day (solar noon ± 12 h) sampled every
/// `step_minutes`: SZA averaged over sun-up samples, CKGHI integrated.
DailyAstroRecord daily_astro(const GeoLocation& loc, const Date& date, double step_minutes = 2.0);

/// Minutes on the profile grid where observed GHI exceeds `ratio` times the
/// clear-sky GHI (clear-sky > 0 only). An empty observed profile means the
/// feature is unavailable.
std::optional<double> sunshine_duration(std::span<const double> observed, std::span<const double> clear_sky,
                                        double step_minutes, double ratio = 0.4);

inline constexpr double kSynodicMonthDays = 29.530588;
/// Reference new moon, 2000-01-06 18:14 UTC.
inline constexpr double kNewMoonEpochUnix = 947182440.0;

/// 0 = new moon, 0.5 = full moon.
double moon_phase(double unix_seconds);
inline double moon_phase(const Timestamp& t) { return moon_phase(static_cast<double>(t.unix_seconds())); }

}  // namespace stlf
