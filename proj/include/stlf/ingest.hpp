#pragma once

// CSV readers and writers. Every file has a mandatory header row, UTF-8 text
// and comma separators. Errors carry the path and 1-based line number.
//
//   load:      timestamp,load_mw
//   weather:   timestamp,<name_unit>...
//   holidays:  date,name
//   tides:     date,high_tide_min,low_tide_min
//   ghi:       timestamp,ghi_wm2   (sub-daily observed irradiance profile)

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stlf/catalog.hpp"
#include "stlf/features.hpp"
#include "stlf/timeseries.hpp"

namespace stlf {

struct RawTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based file line of each row

  /// Column position by header name, or throws naming the file.
  std::size_t column(std::string_view name) const;
};

/// Splits a CSV file; quoted fields may contain commas and doubled quotes.
/// Rejects ragged rows, duplicate or empty header names and empty files.
RawTable read_csv_table(const std::filesystem::path& path);
RawTable parse_csv_table(std::string_view text, const std::string& source);

LoadSeries read_load_csv(const std::filesystem::path& path, Frequency frequency);
void write_load_csv(std::ostream& out, const LoadSeries& load);
void write_load_csv(const std::filesystem::path& path, const LoadSeries& load);

struct WeatherReadOptions {
  std::vector<std::string> expected;  // required columns; empty accepts any
  Eigen::Index max_gap = 3;           // longest run of missing cells that is interpolated
};

struct WeatherData {
  std::vector<FeatureColumn> columns;  // aspect G, units from the name suffix
  std::vector<std::string> notes;      // one line per interpolated run
};

/// Empty, "NA" and "nan" cells are missing. Interior runs up to max_gap rows
/// are filled linearly; longer runs and runs at either end are errors.
WeatherData read_weather_csv(const std::filesystem::path& path, const WeatherReadOptions& options = {});
/// All columns must share one timestamp vector.
void write_weather_csv(std::ostream& out, std::span<const FeatureColumn> columns);
void write_weather_csv(const std::filesystem::path& path, std::span<const FeatureColumn> columns);

struct HolidayEntry {
  Date date;
  std::string name;
};

/// Sorted by date; a repeated date keeps its first name.
std::vector<HolidayEntry> read_holiday_entries(const std::filesystem::path& path);
HolidayCalendar read_holiday_csv(const std::filesystem::path& path);
void write_holiday_csv(std::ostream& out, std::span<const HolidayEntry> entries);
void write_holiday_csv(const std::filesystem::path& path, std::span<const HolidayEntry> entries);

/// Tide times pass through as two G columns stamped at local midnight.
std::vector<FeatureColumn> read_tide_csv(const std::filesystem::path& path, std::int32_t utc_offset_seconds);

IrradianceProfile read_ghi_profile_csv(const std::filesystem::path& path);

/// Units are the text after the last underscore of a column name.
std::string units_from_name(std::string_view name);

}  // namespace stlf
