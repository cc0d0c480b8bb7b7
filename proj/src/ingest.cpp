#include "stlf/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "stlf/error.hpp"
#include "stlf/format.hpp"

namespace stlf {

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split_line(std::string_view line, const std::string& source, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"' && cell.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cell));
      cell.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw IngestError(source, lineno, "text after a closing quote");
      cell += ch;
    }
  }
  if (quoted) throw IngestError(source, lineno, "unterminated quoted field");
  out.push_back(std::move(cell));
  return out;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

Timestamp cell_timestamp(const RawTable& t, std::size_t r, std::size_t c) {
  try {
    return Timestamp::parse(t.rows[r][c]);
  } catch (const Error& e) {
    throw IngestError(t.source, t.lines[r], "column '" + t.header[c] + "': " + e.what());
  }
}

Date cell_date(const RawTable& t, std::size_t r, std::size_t c) {
  try {
    return parse_date(t.rows[r][c]);
  } catch (const Error& e) {
    throw IngestError(t.source, t.lines[r], "column '" + t.header[c] + "': " + e.what());
  }
}

double cell_number(const RawTable& t, std::size_t r, std::size_t c) {
  const auto v = parse_double(t.rows[r][c]);
  if (!v || !std::isfinite(*v))
    throw IngestError(t.source, t.lines[r], "column '" + t.header[c] + "': '" + t.rows[r][c] + "' is not a number");
  return *v;
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "NA" || cell == "nan" || cell == "NaN"; }

}  // namespace

std::size_t RawTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw IngestError(source, 1, "missing required column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

RawTable parse_csv_table(std::string_view text, const std::string& source) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  RawTable t;
  t.source = source;
  std::size_t lineno = 0, pos = 0;
  bool have_header = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto cells = split_line(line, source, lineno);
    if (!have_header) {
      for (const auto& h : cells) {
        if (h.empty()) throw IngestError(source, lineno, "empty column name in header");
        if (std::count(cells.begin(), cells.end(), h) > 1)
          throw IngestError(source, lineno, "duplicate column '" + h + "' in header");
      }
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size())
      throw IngestError(source, lineno,
                        "expected " + std::to_string(t.header.size()) + " fields, found " + std::to_string(cells.size()));
    t.rows.push_back(std::move(cells));
    t.lines.push_back(lineno);
  }
  if (!have_header) throw IngestError(source, 1, "file is empty (a header row is required)");
  return t;
}

RawTable read_csv_table(const std::filesystem::path& path) { return parse_csv_table(slurp(path), path.string()); }

std::string units_from_name(std::string_view name) {
  const auto p = name.rfind('_');
  return p == std::string_view::npos ? std::string() : std::string(name.substr(p + 1));
}

// ---- load ----

LoadSeries read_load_csv(const std::filesystem::path& path, Frequency frequency) {
  const RawTable t = read_csv_table(path);
  const std::size_t ct = t.column("timestamp"), cv = t.column("load_mw");
  if (t.rows.empty()) throw IngestError(t.source, 1, "no data rows");

  struct Row {
    Timestamp ts;
    double value;
    std::size_t line;
  };
  std::vector<Row> rows;
  rows.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double v = cell_number(t, r, cv);
    if (!(v > 0.0)) throw IngestError(t.source, t.lines[r], "load must be positive, got " + t.rows[r][cv]);
    rows.push_back({cell_timestamp(t, r, ct), v, t.lines[r]});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.ts < b.ts; });
  const std::int64_t step = step_seconds(frequency);
  std::vector<std::string> missing;
  std::size_t missing_count = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::int64_t dt = rows[i].ts.unix_seconds() - rows[i - 1].ts.unix_seconds();
    if (dt == 0)
      throw IngestError(t.source, std::max(rows[i].line, rows[i - 1].line),
                        "duplicate timestamp " + rows[i].ts.to_string());
    if (dt % step != 0)
      throw IngestError(t.source, rows[i].line,
                        "timestamp " + rows[i].ts.to_string() + " is off the " + std::string(to_string(frequency)) +
                            " grid");
    for (std::int64_t s = step; s < dt; s += step) {
      ++missing_count;
      if (missing.size() < 20) {
        const Timestamp gap = rows[i - 1].ts.shifted(s);
        missing.push_back(frequency == Frequency::DailyPeak ? format_date(gap.local_date()) : gap.to_string());
      }
    }
  }
  if (missing_count > 0) {
    std::string msg = "series has " + std::to_string(missing_count) + " missing step(s): ";
    for (std::size_t i = 0; i < missing.size(); ++i) msg += (i ? ", " : "") + missing[i];
    if (missing_count > missing.size()) msg += ", ...";
    throw IngestError(t.source, 1, msg);
  }
  std::vector<Timestamp> ts;
  Eigen::VectorXd values(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ts.push_back(rows[i].ts);
    values(static_cast<Eigen::Index>(i)) = rows[i].value;
  }
  return LoadSeries(std::move(ts), std::move(values), frequency);
}

void write_load_csv(std::ostream& out, const LoadSeries& load) {
  out << "timestamp,load_mw\n";
  for (Eigen::Index i = 0; i < load.size(); ++i)
    out << load.timestamps()[static_cast<std::size_t>(i)].to_string() << ',' << format_double(load.values()(i)) << '\n';
}

void write_load_csv(const std::filesystem::path& path, const LoadSeries& load) {
  auto out = open_out(path);
  write_load_csv(out, load);
}

// ---- weather ----

WeatherData read_weather_csv(const std::filesystem::path& path, const WeatherReadOptions& options) {
  const RawTable t = read_csv_table(path);
  const std::size_t ct = t.column("timestamp");
  for (const auto& name : options.expected) t.column(name);
  if (t.rows.empty()) throw IngestError(t.source, 1, "no data rows");
  if (t.header.size() < 2) throw IngestError(t.source, 1, "no data columns besides the timestamp");

  const auto n = static_cast<Eigen::Index>(t.rows.size());
  std::vector<Timestamp> ts;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    ts.push_back(cell_timestamp(t, r, ct));
    if (r > 0 && !(ts[r - 1] < ts[r]))
      throw IngestError(t.source, t.lines[r], "timestamps must be strictly increasing");
  }

  WeatherData out;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == ct) continue;
    Eigen::VectorXd v(n);
    std::vector<bool> gap(static_cast<std::size_t>(n), false);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (is_missing(t.rows[r][c])) gap[r] = true;
      else v(static_cast<Eigen::Index>(r)) = cell_number(t, r, c);
    }
    for (Eigen::Index i = 0; i < n;) {
      if (!gap[static_cast<std::size_t>(i)]) {
        ++i;
        continue;
      }
      Eigen::Index j = i;
      while (j < n && gap[static_cast<std::size_t>(j)]) ++j;
      const Eigen::Index len = j - i;
      const std::size_t line = t.lines[static_cast<std::size_t>(i)];
      if (i == 0 || j == n)
        throw IngestError(t.source, line,
                          "column '" + t.header[c] + "': missing values at the " + (i == 0 ? "start" : "end") +
                              " of the file cannot be interpolated");
      if (len > options.max_gap)
        throw IngestError(t.source, line,
                          "column '" + t.header[c] + "': " + std::to_string(len) + " consecutive missing values exceed the limit of " +
                              std::to_string(options.max_gap));
      const double a = v(i - 1), b = v(j);
      for (Eigen::Index k = i; k < j; ++k)
        v(k) = a + (b - a) * static_cast<double>(k - i + 1) / static_cast<double>(len + 1);
      out.notes.push_back(t.source + ":" + std::to_string(line) + ": column '" + t.header[c] + "': interpolated " +
                          std::to_string(len) + " missing value(s)");
      i = j;
    }
    FeatureColumn col;
    col.name = t.header[c];
    col.aspect = FeatureAspect::Geographical;
    col.units = units_from_name(col.name);
    col.values = std::move(v);
    col.timestamps = ts;
    out.columns.push_back(std::move(col));
  }
  return out;
}

void write_weather_csv(std::ostream& out, std::span<const FeatureColumn> columns) {
  if (columns.empty()) throw ParameterError("weather output needs at least one column");
  const auto& ts = columns.front().timestamps;
  for (const auto& c : columns)
    if (c.timestamps != ts || c.values.size() != static_cast<Eigen::Index>(ts.size()))
      throw ParameterError("weather columns must share one timestamp vector");
  out << "timestamp";
  for (const auto& c : columns) out << ',' << quote_if_needed(c.name);
  out << '\n';
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out << ts[i].to_string();
    for (const auto& c : columns) {
      const double v = c.values(static_cast<Eigen::Index>(i));
      out << ',' << (std::isfinite(v) ? format_double(v) : std::string("NA"));
    }
    out << '\n';
  }
}

void write_weather_csv(const std::filesystem::path& path, std::span<const FeatureColumn> columns) {
  auto out = open_out(path);
  write_weather_csv(out, columns);
}

// ---- holidays ----

std::vector<HolidayEntry> read_holiday_entries(const std::filesystem::path& path) {
  const RawTable t = read_csv_table(path);
  const std::size_t cd = t.column("date"), cn = t.column("name");
  std::map<std::int64_t, HolidayEntry> by_day;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const Date d = cell_date(t, r, cd);
    by_day.try_emplace(days_since_epoch(d), HolidayEntry{d, t.rows[r][cn]});
  }
  std::vector<HolidayEntry> out;
  for (auto& [k, e] : by_day) out.push_back(std::move(e));
  return out;
}

HolidayCalendar read_holiday_csv(const std::filesystem::path& path) {
  HolidayCalendar cal;
  for (const auto& e : read_holiday_entries(path)) cal.insert(e.date);
  return cal;
}

void write_holiday_csv(std::ostream& out, std::span<const HolidayEntry> entries) {
  out << "date,name\n";
  for (const auto& e : entries) out << format_date(e.date) << ',' << quote_if_needed(e.name) << '\n';
}

void write_holiday_csv(const std::filesystem::path& path, std::span<const HolidayEntry> entries) {
  auto out = open_out(path);
  write_holiday_csv(out, entries);
}

// ---- tides and irradiance ----

std::vector<FeatureColumn> read_tide_csv(const std::filesystem::path& path, std::int32_t utc_offset_seconds) {
  const RawTable t = read_csv_table(path);
  const std::size_t cd = t.column("date"), ch = t.column("high_tide_min"), cl = t.column("low_tide_min");
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  FeatureColumn high{"high_tide_min", FeatureAspect::Geographical, "min", Eigen::VectorXd(n), 0, {}};
  FeatureColumn low{"low_tide_min", FeatureAspect::Geographical, "min", Eigen::VectorXd(n), 0, {}};
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const Timestamp ts = Timestamp::local_midnight(cell_date(t, r, cd), utc_offset_seconds);
    if (r > 0 && !(high.timestamps.back() < ts)) throw IngestError(t.source, t.lines[r], "dates must be strictly increasing");
    high.timestamps.push_back(ts);
    low.timestamps.push_back(ts);
    high.values(static_cast<Eigen::Index>(r)) = cell_number(t, r, ch);
    low.values(static_cast<Eigen::Index>(r)) = cell_number(t, r, cl);
  }
  return {std::move(high), std::move(low)};
}

IrradianceProfile read_ghi_profile_csv(const std::filesystem::path& path) {
  const RawTable t = read_csv_table(path);
  const std::size_t ct = t.column("timestamp"), cv = t.column("ghi_wm2");
  IrradianceProfile p;
  p.ghi.resize(static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const Timestamp ts = cell_timestamp(t, r, ct);
    if (r > 0 && !(p.timestamps.back() < ts)) throw IngestError(t.source, t.lines[r], "timestamps must be strictly increasing");
    const double v = cell_number(t, r, cv);
    if (v < 0.0) throw IngestError(t.source, t.lines[r], "irradiance must be non-negative");
    p.timestamps.push_back(ts);
    p.ghi(static_cast<Eigen::Index>(r)) = v;
  }
  return p;
}

}  // namespace stlf
