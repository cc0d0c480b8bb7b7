#pragma once

// Column-level feature constructors: lags, moving averages, historical-load
// lags and social/calendar indicators.

#include <array>
#include <set>
#include <span>
#include <vector>

#include "stlf/timeseries.hpp"

namespace stlf {

using HolidayCalendar = std::set<Date>;

/// Row t takes the value of row t - lag_steps; the first lag_steps rows become
/// warm-up. Requires 1 <= lag_steps < length.
FeatureColumn lag_series(const FeatureColumn& column, Eigen::Index lag_steps);

/// Trailing mean over `window` rows (2 <= window < length).
FeatureColumn moving_average(const FeatureColumn& column, Eigen::Index window);

/// load_lag_1 .. load_lag_<depth>, aspect HistoricalLoad.
std::vector<FeatureColumn> make_load_lags(const LoadSeries& load, Eigen::Index depth = 7);

enum class CalendarKind { Monday, Tuesday, Wednesday, Thursday, Friday, Saturday, Sunday, Holiday, DayOfYear };

std::string_view to_string(CalendarKind k) noexcept;
CalendarKind parse_calendar_kind(std::string_view text);

/// One social column. DayOfYear is (doy - 1) / (days_in_year - 1), in [0, 1].
FeatureColumn make_calendar_feature(std::span<const Timestamp> timestamps, const HolidayCalendar& holidays,
                                    CalendarKind kind);

/// The nine social columns: monday..sunday, holiday, day_of_year.
std::vector<FeatureColumn> make_calendar_features(std::span<const Timestamp> timestamps,
                                                  const HolidayCalendar& holidays);

/// The ten US federal holidays of `year` on their statutory dates (no
/// weekend observance shift).
std::vector<Date> us_federal_holidays(int year);
/// Names matching the order of us_federal_holidays.
const std::array<std::string_view, 10>& us_federal_holiday_names();

}  // namespace stlf
