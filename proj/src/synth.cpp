#include "stlf/synth.hpp"

#include <algorithm>
#include <cmath>

#include "stlf/error.hpp"
#include "stlf/random.hpp"

namespace stlf {

void SynthConfig::validate() const {
  if (n_days < 400) throw ParameterError("synth: n_days must be at least 400");
  if (!(noise_std >= 0.0)) throw ParameterError("synth: noise_std must be non-negative");
  if (!(temp_noise_std >= 0.0)) throw ParameterError("synth: temp_noise_std must be non-negative");
  if (!(std::abs(temp_ar) < 1.0)) throw ParameterError("synth: temp_ar must be in (-1, 1)");
  if (solar_lag < 0) throw ParameterError("synth: solar_lag must be non-negative");
  if (!start.ok()) throw ParameterError("synth: invalid start date");
}

const std::vector<std::string>& synth_weather_columns() {
  static const std::vector<std::string> names{
      "temp_max_f",   "temp_mean_f",     "temp_min_f",    "dewpoint_f", "humidity_pct", "pressure_inhg", "wind_mph",
      "gust_mph",     "precip_in",       "snow_in",       "visibility_mi", "cloud_cover_pct", "no2_ppb",  "so2_ppb",
      "nox_ppb",      "co_ppm",          "o3_ppb",        "pm25_ugm3",  "pm10_ugm3",    "aqi_index",     "ghi_whm2"};
  return names;
}

GeoLocation default_synth_location() { return {43.66, -70.26, 10.0, -5.0}; }

namespace {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser over (seed, stream)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stationary AR(1) with marginal standard deviation `sd`.
Eigen::VectorXd ar1(Eigen::Index n, double phi, double sd, Rng& rng) {
  Eigen::VectorXd out(n);
  const double innov = sd * std::sqrt(1.0 - phi * phi);
  double a = sd * rng.normal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) a = phi * a + innov * rng.normal();
    out(i) = a;
  }
  return out;
}

double round_to(double v, int decimals) {
  if (decimals < 0) return v;
  const double s = std::pow(10.0, decimals);
  const double r = std::round(v * s) / s;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

}  // namespace

SynthData generate(const SynthConfig& cfg, const GeoLocation& loc) {
  cfg.validate();
  loc.validate();
  const Eigen::Index n = cfg.n_days;
  const Eigen::Index lag = cfg.solar_lag;
  const std::int64_t day0 = days_since_epoch(cfg.start);

  // Daily clear-sky GHI from `lag` days before the start through the end.
  Eigen::VectorXd ck(n + lag);
  for (Eigen::Index i = 0; i < n + lag; ++i) ck(i) = daily_astro(loc, date_from_days(day0 - lag + i)).clear_sky_ghi_daily;
  const double ck_lo = ck.minCoeff(), ck_hi = ck.maxCoeff();
  const double ck_mid = (ck_lo + ck_hi) / 2.0, ck_half = std::max((ck_hi - ck_lo) / 2.0, 1e-9);

  SynthData out;
  std::vector<Timestamp> ts;
  ts.reserve(static_cast<std::size_t>(n));
  const int first_year = static_cast<int>(cfg.start.year());
  const int last_year = static_cast<int>(date_from_days(day0 + n - 1).year());
  for (int y = first_year; y <= last_year; ++y)
    for (const Date& d : us_federal_holidays(y)) out.holidays.insert(d);

  auto& truth = out.truth;
  truth.balance_point = cfg.balance_point;
  truth.solar_lag = lag;
  truth.weekday_offsets = cfg.weekday_offsets;
  truth.holiday_offset = cfg.holiday_offset;
  truth.temperature.resize(n);
  truth.ckghi.resize(n);
  truth.ckghi_lagged.resize(n);
  truth.ghi_anomaly.resize(n);
  truth.holiday.resize(n);
  truth.weekday.resize(static_cast<std::size_t>(n));

  Rng temp_rng(stream_seed(cfg.seed, 0)), cloud_rng(stream_seed(cfg.seed, 1)), wx_rng(stream_seed(cfg.seed, 2)),
      air_rng(stream_seed(cfg.seed, 3)), load_rng(stream_seed(cfg.seed, 4));
  const Eigen::VectorXd temp_dev = ar1(n, cfg.temp_ar, cfg.temp_noise_std, temp_rng);
  const Eigen::VectorXd cloud_latent = ar1(n, 0.5, 1.2, cloud_rng);
  const Eigen::VectorXd pressure_dev = ar1(n, 0.7, 0.2, wx_rng);
  const Eigen::VectorXd wind_dev = ar1(n, 0.4, 4.0, wx_rng);

  // The cloud fraction is a logistic of a zero-mean symmetric process, so its
  // mean is 1/2 and the mean clear fraction 1 - 0.75/2.
  const double mean_clear = 0.625;

  const auto& names = synth_weather_columns();
  Eigen::MatrixXd wx(n, static_cast<Eigen::Index>(names.size()));
  Eigen::VectorXd load(n);
  const int dec = cfg.decimals;

  for (Eigen::Index i = 0; i < n; ++i) {
    const Date date = date_from_days(day0 + i);
    ts.push_back(Timestamp::local_midnight(date, loc.utc_offset_seconds()));
    const double ck_now = ck(i + lag);
    const double ck_lagged = ck(i);
    const double t_max = round_to(cfg.temp_mean + cfg.temp_amplitude * (ck_lagged - ck_mid) / ck_half + temp_dev(i), dec);

    const double cloud = 1.0 / (1.0 + std::exp(-cloud_latent(i)));
    const double clear = 1.0 - 0.75 * cloud;
    const double ghi = round_to(std::max(0.0, ck_now * clear * (1.0 + 0.03 * cloud_rng.normal())), dec);
    const double ghi_anom = ghi - mean_clear * ck_now;

    const double t_mean = t_max - 9.0 + 2.0 * wx_rng.normal();
    const double t_min = t_mean - 9.0 + 3.0 * wx_rng.normal();
    const double dew = t_mean - wx_rng.uniform(2.0, 20.0) * (1.2 - cloud);
    const double humidity = std::clamp(100.0 - 2.5 * (t_mean - dew) + 5.0 * wx_rng.normal(), 10.0, 100.0);
    const double wind = std::max(0.0, 8.0 + wind_dev(i));
    const double gust = wind * wx_rng.uniform(1.3, 1.8);
    const double wet = std::max(0.0, cloud - 0.7);
    const double precip = wet > 0.0 ? wet * 3.0 * -std::log(1.0 - wx_rng.uniform()) : 0.0;
    const double snow = t_mean < 32.0 ? precip * 10.0 : 0.0;
    const double visibility = std::clamp(10.0 - 12.0 * precip - 2.0 * cloud, 0.5, 10.0);
    const double cover = std::clamp(100.0 * cloud + 8.0 * wx_rng.normal(), 0.0, 100.0);
    const double no2 = std::max(1.0, 18.0 + 6.0 * air_rng.normal() - 0.1 * wind);
    const double so2 = std::max(0.2, 3.0 + 1.2 * air_rng.normal());
    const double nox = no2 + std::max(0.0, 8.0 + 4.0 * air_rng.normal());
    const double co = std::max(0.05, 0.4 + 0.12 * air_rng.normal());
    const double o3 = std::max(2.0, 12.0 + 0.35 * t_max + 5.0 * air_rng.normal());
    const double pm25 = std::max(1.0, 8.0 + 3.5 * air_rng.normal());
    const double pm10 = pm25 + std::max(0.0, 7.0 + 4.0 * air_rng.normal());
    const double aqi = std::max({o3 * 0.9, pm25 * 4.0, no2 * 0.8});

    const double row[] = {t_max, t_mean, t_min, dew, humidity, 30.0 + pressure_dev(i), wind, gust, precip, snow,
                          visibility, cover, no2, so2, nox, co, o3, pm25, pm10, aqi, ghi};
    for (Eigen::Index j = 0; j < wx.cols(); ++j) wx(i, j) = round_to(row[j], dec);

    const auto wd = std::chrono::weekday{std::chrono::sys_days{date}};
    const int dow = static_cast<int>((wd.c_encoding() + 6) % 7);
    const bool hol = out.holidays.count(date) > 0;
    const double value = cfg.base_load + cfg.weekday_offsets[static_cast<std::size_t>(dow)] +
                         (hol ? cfg.holiday_offset : 0.0) + cfg.slope_below * std::max(0.0, cfg.balance_point - t_max) +
                         cfg.slope_above * std::max(0.0, t_max - cfg.balance_point) + cfg.solar_weight * ck_lagged +
                         cfg.ghi_weight * ghi_anom + cfg.noise_std * load_rng.normal();
    load(i) = round_to(value, dec);

    truth.temperature(i) = t_max;
    truth.ckghi(i) = ck_now;
    truth.ckghi_lagged(i) = ck_lagged;
    truth.ghi_anomaly(i) = ghi_anom;
    truth.holiday(i) = hol ? 1.0 : 0.0;
    truth.weekday[static_cast<std::size_t>(i)] = dow;
  }
  if ((load.array() <= 0.0).any()) throw ParameterError("synth: configuration produced a non-positive load");

  for (Eigen::Index j = 0; j < wx.cols(); ++j) {
    const std::string& name = names[static_cast<std::size_t>(j)];
    FeatureColumn c;
    c.name = name;
    c.aspect = FeatureAspect::Geographical;
    c.units = name.substr(name.rfind('_') + 1);
    c.values = wx.col(j);
    c.timestamps = ts;
    out.weather.push_back(std::move(c));
  }
  out.load = LoadSeries(std::move(ts), std::move(load), Frequency::DailyPeak);
  return out;
}

}  // namespace stlf
