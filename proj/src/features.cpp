#include "stlf/features.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "stlf/error.hpp"

namespace stlf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::string_view, 9> kCalendarNames = {
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday", "holiday", "day_of_year"};

Date nth_weekday(int year, std::chrono::month m, std::chrono::weekday wd, unsigned n) {
  return Date{std::chrono::year_month_weekday{std::chrono::year{year}, m, wd[n]}};
}

Date last_weekday(int year, std::chrono::month m, std::chrono::weekday wd) {
  return Date{std::chrono::year_month_weekday_last{std::chrono::year{year}, m, wd[std::chrono::last]}};
}

}  // namespace

FeatureColumn lag_series(const FeatureColumn& column, Eigen::Index lag_steps) {
  const Eigen::Index n = column.values.size();
  if (lag_steps < 1) throw ParameterError("lag of '" + column.name + "' must be at least 1");
  if (lag_steps >= n)
    throw ParameterError("lag " + std::to_string(lag_steps) + " of '" + column.name + "' is not shorter than the series (" +
                         std::to_string(n) + ")");
  FeatureColumn out = column;
  out.name = column.name + "_lag_" + std::to_string(lag_steps);
  out.values.head(lag_steps).setConstant(kNaN);
  out.values.tail(n - lag_steps) = column.values.head(n - lag_steps);
  out.warmup = column.warmup + lag_steps;
  return out;
}

FeatureColumn moving_average(const FeatureColumn& column, Eigen::Index window) {
  const Eigen::Index n = column.values.size();
  if (window < 2 || window >= n)
    throw ParameterError("moving-average window " + std::to_string(window) + " for '" + column.name +
                         "' must lie in [2, " + std::to_string(n - 1) + "]");
  FeatureColumn out = column;
  out.name = column.name + "_ma_" + std::to_string(window);
  out.values.setConstant(kNaN);
  for (Eigen::Index t = window - 1; t < n; ++t) out.values(t) = column.values.segment(t - window + 1, window).mean();
  out.warmup = column.warmup + window - 1;
  return out;
}

std::vector<FeatureColumn> make_load_lags(const LoadSeries& load, Eigen::Index depth) {
  if (depth < 1) throw ParameterError("load lag depth must be at least 1");
  if (depth >= load.size())
    throw ParameterError("load lag depth " + std::to_string(depth) + " is not shorter than the load series");
  FeatureColumn base{"load", FeatureAspect::HistoricalLoad, "MW", load.values(), 0, {}};
  std::vector<FeatureColumn> out;
  out.reserve(static_cast<std::size_t>(depth));
  for (Eigen::Index k = 1; k <= depth; ++k) {
    FeatureColumn c = lag_series(base, k);
    c.name = "load_lag_" + std::to_string(k);
    out.push_back(std::move(c));
  }
  return out;
}

std::string_view to_string(CalendarKind k) noexcept { return kCalendarNames[static_cast<std::size_t>(k)]; }

CalendarKind parse_calendar_kind(std::string_view text) {
  for (std::size_t i = 0; i < kCalendarNames.size(); ++i)
    if (kCalendarNames[i] == text) return static_cast<CalendarKind>(i);
  throw ParameterError("unknown calendar feature kind '" + std::string(text) + "'");
}

FeatureColumn make_calendar_feature(std::span<const Timestamp> timestamps, const HolidayCalendar& holidays,
                                    CalendarKind kind) {
  FeatureColumn col;
  col.name = std::string(to_string(kind));
  col.aspect = FeatureAspect::Social;
  col.units = kind == CalendarKind::DayOfYear ? "fraction" : "indicator";
  col.values.resize(static_cast<Eigen::Index>(timestamps.size()));
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    const Date d = timestamps[i].local_date();
    double v = 0.0;
    if (kind == CalendarKind::Holiday) {
      v = holidays.contains(d) ? 1.0 : 0.0;
    } else if (kind == CalendarKind::DayOfYear) {
      const Date jan1{d.year(), std::chrono::January, std::chrono::day{1}};
      const double doy = static_cast<double>(days_since_epoch(d) - days_since_epoch(jan1));
      const double len = d.year().is_leap() ? 366.0 : 365.0;
      v = doy / (len - 1.0);
    } else {
      // CalendarKind::Monday == 0; iso_encoding() runs Monday = 1 .. Sunday = 7.
      const unsigned iso = std::chrono::weekday{std::chrono::sys_days{d}}.iso_encoding();
      v = (iso - 1 == static_cast<unsigned>(kind)) ? 1.0 : 0.0;
    }
    col.values(static_cast<Eigen::Index>(i)) = v;
  }
  return col;
}

std::vector<FeatureColumn> make_calendar_features(std::span<const Timestamp> timestamps,
                                                  const HolidayCalendar& holidays) {
  std::vector<FeatureColumn> out;
  for (std::size_t k = 0; k < kCalendarNames.size(); ++k)
    out.push_back(make_calendar_feature(timestamps, holidays, static_cast<CalendarKind>(k)));
  return out;
}

std::vector<Date> us_federal_holidays(int year) {
  using namespace std::chrono;
  const std::chrono::year y{year};
  return {
      Date{y, January, day{1}},
      nth_weekday(year, January, Monday, 3),
      nth_weekday(year, February, Monday, 3),
      last_weekday(year, May, Monday),
      Date{y, July, day{4}},
      nth_weekday(year, September, Monday, 1),
      nth_weekday(year, October, Monday, 2),
      Date{y, November, day{11}},
      nth_weekday(year, November, Thursday, 4),
      Date{y, December, day{25}},
  };
}

const std::array<std::string_view, 10>& us_federal_holiday_names() {
  static constexpr std::array<std::string_view, 10> names{
      "New Year's Day", "Martin Luther King Jr. Day", "Washington's Birthday", "Memorial Day", "Independence Day",
      "Labor Day", "Columbus Day", "Veterans Day", "Thanksgiving Day", "Christmas Day"};
  return names;
}

}  // namespace stlf
