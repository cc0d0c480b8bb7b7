#include "stlf/astro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stlf/error.hpp"

namespace stlf {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct SunTerms {
  double declination;  // radians
  double eqtime;       // minutes
};

SunTerms sun_terms(double unix_seconds) {
  const double jd = unix_seconds / 86400.0 + 2440587.5;
  const double t = (jd - 2451545.0) / 36525.0;
  const double l0 = std::fmod(280.46646 + t * (36000.76983 + t * 0.0003032), 360.0) * kDeg;
  const double m = (357.52911 + t * (35999.05029 - 0.0001537 * t)) * kDeg;
  const double e = 0.016708634 - t * (0.000042037 + 0.0000001267 * t);
  const double center = std::sin(m) * (1.914602 - t * (0.004817 + 0.000014 * t)) +
                        std::sin(2 * m) * (0.019993 - 0.000101 * t) + std::sin(3 * m) * 0.000289;
  const double omega = (125.04 - 1934.136 * t) * kDeg;
  const double lambda = l0 + (center - 0.00569 - 0.00478 * std::sin(omega)) * kDeg;
  const double eps0 = 23.0 + (26.0 + (21.448 - t * (46.815 + t * (0.00059 - t * 0.001813))) / 60.0) / 60.0;
  const double eps = (eps0 + 0.00256 * std::cos(omega)) * kDeg;
  const double y = std::pow(std::tan(eps / 2.0), 2);

  SunTerms s;
  s.declination = std::asin(std::sin(eps) * std::sin(lambda));
  s.eqtime = 4.0 / kDeg *
             (y * std::sin(2 * l0) - 2 * e * std::sin(m) + 4 * e * y * std::sin(m) * std::cos(2 * l0) -
              0.5 * y * y * std::sin(4 * l0) - 1.25 * e * e * std::sin(2 * m));
  return s;
}

double utc_midnight(const Date& date) { return static_cast<double>(days_since_epoch(date)) * 86400.0; }

// Hour angle (degrees) at which the sun's centre sits at `altitude_deg`;
// 0 means it never gets there, 180 means it never drops below.
double event_hour_angle(double lat_rad, double decl, double altitude_deg) {
  const double denom = std::cos(lat_rad) * std::cos(decl);
  const double num = std::sin(altitude_deg * kDeg) - std::sin(lat_rad) * std::sin(decl);
  if (std::abs(denom) < 1e-12) return num < 0.0 ? 180.0 : 0.0;
  const double c = num / denom;
  if (c >= 1.0) return 0.0;
  if (c <= -1.0) return 180.0;
  return std::acos(c) / kDeg;
}

}  // namespace

double solar_noon(const GeoLocation& loc, const Date& date) {
  const double base = utc_midnight(date);
  double noon = base + (720.0 - 4.0 * loc.longitude) * 60.0;
  for (int i = 0; i < 2; ++i) noon = base + (720.0 - 4.0 * loc.longitude - sun_terms(noon).eqtime) * 60.0;
  return noon;
}

void GeoLocation::validate() const {
  if (!(latitude >= -90.0 && latitude <= 90.0)) throw ParameterError("latitude must lie in [-90, 90]");
  if (!(longitude >= -180.0 && longitude <= 180.0)) throw ParameterError("longitude must lie in [-180, 180]");
  if (!std::isfinite(elevation)) throw ParameterError("elevation must be finite");
  if (!(utc_offset_hours >= -14.0 && utc_offset_hours <= 14.0))
    throw ParameterError("utc_offset must lie in [-14, 14] hours");
}

std::int32_t GeoLocation::utc_offset_seconds() const {
  return static_cast<std::int32_t>(std::lround(utc_offset_hours * 3600.0));
}

SolarPosition solar_position(const GeoLocation& loc, double unix_seconds) {
  const SunTerms s = sun_terms(unix_seconds);
  const double day = std::floor(unix_seconds / 86400.0);
  const double minutes_utc = (unix_seconds - day * 86400.0) / 60.0;
  const double true_solar_time = minutes_utc + s.eqtime + 4.0 * loc.longitude;
  const double ha = (true_solar_time / 4.0 - 180.0) * kDeg;
  const double lat = loc.latitude * kDeg;

  const double cos_z = std::clamp(
      std::sin(lat) * std::sin(s.declination) + std::cos(lat) * std::cos(s.declination) * std::cos(ha), -1.0, 1.0);
  SolarPosition p;
  p.zenith = std::acos(cos_z) / kDeg;
  const double az = std::atan2(std::sin(ha), std::cos(ha) * std::sin(lat) - std::tan(s.declination) * std::cos(lat));
  p.azimuth = std::fmod(az / kDeg + 180.0 + 360.0, 360.0);
  if (p.azimuth >= 360.0) p.azimuth -= 360.0;
  return p;
}

double haurwitz_ghi(double zenith_deg) {
  if (zenith_deg >= 90.0) return 0.0;
  const double c = std::cos(zenith_deg * kDeg);
  if (c <= 0.0) return 0.0;
  return 1098.0 * c * std::exp(-0.057 / c);
}

double clear_sky_ghi(const GeoLocation& loc, double unix_seconds) {
  return haurwitz_ghi(solar_position(loc, unix_seconds).zenith);
}

double time_above_altitude(const GeoLocation& loc, const Date& date, double altitude_deg) {
  const double lat = loc.latitude * kDeg;
  const double base = utc_midnight(date);
  const double noon = solar_noon(loc, date);
  const double h_noon = event_hour_angle(lat, sun_terms(noon).declination, altitude_deg);
  if (h_noon <= 0.0) return 0.0;
  if (h_noon >= 180.0) return 1440.0;

  // Refine each event with the declination and equation of time at the event.
  auto refine = [&](double sign) {
    double t = noon + sign * 4.0 * h_noon * 60.0;
    for (int i = 0; i < 4; ++i) {
      const SunTerms s = sun_terms(t);
      const double local_noon = base + (720.0 - 4.0 * loc.longitude - s.eqtime) * 60.0;
      t = local_noon + sign * 4.0 * event_hour_angle(lat, s.declination, altitude_deg) * 60.0;
    }
    return t;
  };
  const double rise = refine(-1.0);
  const double set = refine(+1.0);
  return std::clamp((set - rise) / 60.0, 0.0, 1440.0);
}

double civil_twilight_duration(const GeoLocation& loc, const Date& date) {
  return time_above_altitude(loc, date, -6.0);
}

double daylight_duration(const GeoLocation& loc, const Date& date) {
  return time_above_altitude(loc, date, -0.833);
}

DailyAstroRecord daily_astro(const GeoLocation& loc, const Date& date, double step_minutes) {
  if (!(step_minutes > 0.0 && step_minutes <= 60.0)) throw ParameterError("daily_astro: step must lie in (0, 60] minutes");
  DailyAstroRecord rec;
  rec.date = date;
  const double noon = solar_noon(loc, date);
  rec.noon_sza = solar_position(loc, noon).zenith;

  // Declination and the equation of time barely move within a day, so the
  // ephemeris is evaluated at noon and noon ± 12 h and interpolated
  // quadratically (error ~1e-7 rad).
  const SunTerms a = sun_terms(noon - 43200.0), b = sun_terms(noon), c = sun_terms(noon + 43200.0);
  auto quad = [](double fa, double fb, double fc, double u) {
    return fb + u * (fc - fa) / 2.0 + u * u * ((fa + fc) / 2.0 - fb);
  };
  const double lat = loc.latitude * kDeg;
  const double sin_lat = std::sin(lat), cos_lat = std::cos(lat);

  const auto samples = static_cast<int>(std::lround(1440.0 / step_minutes));
  const double step = 1440.0 / samples;
  double zenith_sum = 0.0;
  int daylight_samples = 0;
  double energy = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double offset_min = -720.0 + (i + 0.5) * step;
    const double t = noon + offset_min * 60.0;
    const double u = offset_min / 720.0;
    const double decl = quad(a.declination, b.declination, c.declination, u);
    const double eqtime = quad(a.eqtime, b.eqtime, c.eqtime, u);
    const double minutes_utc = (t - std::floor(t / 86400.0) * 86400.0) / 60.0;
    const double ha = ((minutes_utc + eqtime + 4.0 * loc.longitude) / 4.0 - 180.0) * kDeg;
    const double cos_z =
        std::clamp(sin_lat * std::sin(decl) + cos_lat * std::cos(decl) * std::cos(ha), -1.0, 1.0);
    if (cos_z > 0.0) {
      zenith_sum += std::acos(cos_z) / kDeg;
      ++daylight_samples;
      energy += 1098.0 * cos_z * std::exp(-0.057 / cos_z) * step / 60.0;
    }
  }
  rec.mean_daytime_sza = daylight_samples > 0 ? zenith_sum / daylight_samples : rec.noon_sza;
  rec.clear_sky_ghi_daily = energy;
  rec.civil_twilight_duration = civil_twilight_duration(loc, date);
  rec.daylight_duration = daylight_duration(loc, date);
  rec.moon_phase = moon_phase(noon);
  return rec;
}

std::optional<double> sunshine_duration(std::span<const double> observed, std::span<const double> clear_sky,
                                        double step_minutes, double ratio) {
  if (observed.empty()) return std::nullopt;
  if (observed.size() != clear_sky.size())
    throw ParameterError("sunshine_duration: observed and clear-sky profiles differ in length");
  if (!(step_minutes > 0.0)) throw ParameterError("sunshine_duration: step must be positive");
  double minutes = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (clear_sky[i] > 0.0 && observed[i] > ratio * clear_sky[i]) minutes += step_minutes;
  }
  return minutes;
}

double moon_phase(double unix_seconds) {
  const double cycles = (unix_seconds - kNewMoonEpochUnix) / (kSynodicMonthDays * 86400.0);
  double frac = cycles - std::floor(cycles);
  if (frac >= 1.0) frac = 0.0;
  return frac;
}

}  // namespace stlf
