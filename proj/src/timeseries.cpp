#include "stlf/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "stlf/error.hpp"
#include "stlf/random.hpp"

namespace stlf {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

int parse_fixed(std::string_view text, std::size_t pos, std::size_t len, std::string_view what) {
  int v = 0;
  if (pos + len > text.size()) throw ParameterError("malformed " + std::string(what) + ": '" + std::string(text) + "'");
  const char* first = text.data() + pos;
  const char* last = first + len;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || *first == '-' || *first == '+')
    throw ParameterError("malformed " + std::string(what) + ": '" + std::string(text) + "'");
  return v;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw ParameterError("malformed date (expected YYYY-MM-DD): '" + std::string(text) + "'");
  const int y = parse_fixed(text, 0, 4, "date");
  const int m = parse_fixed(text, 5, 2, "date");
  const int d = parse_fixed(text, 8, 2, "date");
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw ParameterError("invalid calendar date: '" + std::string(text) + "'");
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::int64_t days_since_epoch(const Date& date) {
  return std::chrono::sys_days{date}.time_since_epoch().count();
}

Date date_from_days(std::int64_t days) {
  return Date{std::chrono::sys_days{std::chrono::days{days}}};
}

Timestamp Timestamp::local_midnight(const Date& date, std::int32_t utc_offset_seconds) {
  return {days_since_epoch(date) * kSecondsPerDay - utc_offset_seconds, utc_offset_seconds};
}

Timestamp Timestamp::parse(std::string_view text) {
  // 2015-01-01T00:00:00-05:00 or 2015-01-01T00:00:00Z
  if (text.size() < 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':')
    throw ParameterError("malformed timestamp (expected ISO-8601 with offset): '" + std::string(text) + "'");
  const Date date = parse_date(text.substr(0, 10));
  const int hh = parse_fixed(text, 11, 2, "timestamp");
  const int mm = parse_fixed(text, 14, 2, "timestamp");
  const int ss = parse_fixed(text, 17, 2, "timestamp");
  if (hh > 23 || mm > 59 || ss > 59) throw ParameterError("timestamp field out of range: '" + std::string(text) + "'");
  std::int32_t offset = 0;
  const std::string_view zone = text.substr(19);
  if (zone == "Z") {
    offset = 0;
  } else if (zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') && zone[3] == ':') {
    const int oh = parse_fixed(zone, 1, 2, "UTC offset");
    const int om = parse_fixed(zone, 4, 2, "UTC offset");
    if (oh > 14 || om > 59) throw ParameterError("UTC offset out of range: '" + std::string(text) + "'");
    offset = (oh * 3600 + om * 60) * (zone[0] == '-' ? -1 : 1);
  } else {
    throw ParameterError("timestamp lacks an explicit UTC offset: '" + std::string(text) + "'");
  }
  const std::int64_t local = days_since_epoch(date) * kSecondsPerDay + hh * 3600 + mm * 60 + ss;
  return {local - offset, offset};
}

Date Timestamp::local_date() const {
  return date_from_days(floor_div(unix_seconds_ + offset_, kSecondsPerDay));
}

std::chrono::weekday Timestamp::local_weekday() const {
  return std::chrono::weekday{std::chrono::sys_days{local_date()}};
}

std::string Timestamp::to_string() const {
  const std::int64_t local = unix_seconds_ + offset_;
  const std::int64_t day = floor_div(local, kSecondsPerDay);
  const std::int64_t sod = local - day * kSecondsPerDay;
  const Date date = date_from_days(day);
  char buf[40];
  if (offset_ == 0) {
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(date).c_str(),
                  static_cast<int>(sod / 3600), static_cast<int>(sod / 60 % 60), static_cast<int>(sod % 60));
  } else {
    const int off = std::abs(offset_);
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d%c%02d:%02d", format_date(date).c_str(),
                  static_cast<int>(sod / 3600), static_cast<int>(sod / 60 % 60), static_cast<int>(sod % 60),
                  offset_ < 0 ? '-' : '+', off / 3600, off / 60 % 60);
  }
  return buf;
}

std::int64_t step_seconds(Frequency f) noexcept {
  return f == Frequency::DailyPeak ? kSecondsPerDay : 1800;
}

std::string_view to_string(Frequency f) noexcept {
  return f == Frequency::DailyPeak ? "daily" : "half_hourly";
}

Frequency parse_frequency(std::string_view text) {
  if (text == "daily" || text == "daily_peak") return Frequency::DailyPeak;
  if (text == "half_hourly" || text == "halfhourly") return Frequency::HalfHourly;
  throw ParameterError("unknown frequency '" + std::string(text) + "' (expected daily or half_hourly)");
}

LoadSeries::LoadSeries(std::vector<Timestamp> timestamps, Eigen::VectorXd values, Frequency frequency)
    : timestamps_(std::move(timestamps)), values_(std::move(values)), frequency_(frequency) {
  if (static_cast<Eigen::Index>(timestamps_.size()) != values_.size())
    throw ParameterError("load series: " + std::to_string(timestamps_.size()) + " timestamps but " +
                         std::to_string(values_.size()) + " values");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_(i)) || values_(i) <= 0.0)
      throw ParameterError("load series: value at " + timestamps_[static_cast<std::size_t>(i)].to_string() +
                           " is not a finite positive load");
  }
  const std::int64_t step = step_seconds(frequency_);
  for (std::size_t i = 1; i < timestamps_.size(); ++i) {
    const std::int64_t gap = timestamps_[i].unix_seconds() - timestamps_[i - 1].unix_seconds();
    if (gap <= 0)
      throw ParameterError("load series: timestamps not strictly increasing at " + timestamps_[i].to_string());
    if (gap != step)
      throw ParameterError("load series: spacing between " + timestamps_[i - 1].to_string() + " and " +
                           timestamps_[i].to_string() + " does not match " + std::string(to_string(frequency_)) +
                           " frequency");
  }
}

LoadSeries LoadSeries::select_rows(std::span<const Eigen::Index> rows) const {
  LoadSeries out;
  out.frequency_ = frequency_;
  out.values_.resize(static_cast<Eigen::Index>(rows.size()));
  out.timestamps_.reserve(rows.size());
  bool contiguous = regular_;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Eigen::Index r = rows[i];
    if (r < 0 || r >= size()) throw ParameterError("load series: row index out of range");
    out.timestamps_.push_back(timestamps_[static_cast<std::size_t>(r)]);
    out.values_(static_cast<Eigen::Index>(i)) = values_(r);
    if (i > 0 && r != rows[i - 1] + 1) contiguous = false;
  }
  out.regular_ = contiguous;
  return out;
}

std::string_view to_string(FeatureAspect a) noexcept {
  switch (a) {
    case FeatureAspect::Geographical: return "G";
    case FeatureAspect::Astronomical: return "A";
    case FeatureAspect::Social: return "S";
    case FeatureAspect::HistoricalLoad: return "L";
  }
  return "?";
}

FeatureAspect parse_aspect(std::string_view text) {
  if (text == "G" || text == "geographical") return FeatureAspect::Geographical;
  if (text == "A" || text == "astronomical") return FeatureAspect::Astronomical;
  if (text == "S" || text == "social") return FeatureAspect::Social;
  if (text == "L" || text == "historical_load") return FeatureAspect::HistoricalLoad;
  throw ParameterError("unknown feature aspect '" + std::string(text) + "' (expected G, A, S or L)");
}

FeatureMatrix::FeatureMatrix(std::vector<ColumnInfo> columns, Eigen::MatrixXd values, LoadSeries target)
    : columns_(std::move(columns)), values_(std::move(values)), target_(std::move(target)) {
  if (static_cast<Eigen::Index>(columns_.size()) != values_.cols())
    throw ParameterError("feature matrix: column metadata does not match value columns");
  if (values_.rows() != target_.size())
    throw ParameterError("feature matrix: " + std::to_string(values_.rows()) + " rows but target has " +
                         std::to_string(target_.size()));
  std::unordered_set<std::string> seen;
  for (const auto& c : columns_) {
    if (!seen.insert(c.name).second) throw ParameterError("feature matrix: duplicate column '" + c.name + "'");
  }
  if (!values_.allFinite()) throw ParameterError("feature matrix: non-finite value");
}

std::vector<std::string> FeatureMatrix::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

std::optional<Eigen::Index> FeatureMatrix::find(std::string_view name) const {
  for (std::size_t j = 0; j < columns_.size(); ++j)
    if (columns_[j].name == name) return static_cast<Eigen::Index>(j);
  return std::nullopt;
}

Eigen::Index FeatureMatrix::index_of(std::string_view name) const {
  if (auto j = find(name)) return *j;
  throw ParameterError("unknown feature '" + std::string(name) + "'");
}

FeatureColumn FeatureMatrix::column(Eigen::Index j) const {
  const auto& info = columns_.at(static_cast<std::size_t>(j));
  return {info.name, info.aspect, info.units, values_.col(j), 0, target_.timestamps()};
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const Eigen::Index> cols) const {
  std::vector<ColumnInfo> info;
  Eigen::MatrixXd v(rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    info.push_back(columns_.at(static_cast<std::size_t>(cols[k])));
    v.col(static_cast<Eigen::Index>(k)) = values_.col(cols[k]);
  }
  return {std::move(info), std::move(v), target_};
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::string> names) const {
  std::vector<Eigen::Index> cols;
  cols.reserve(names.size());
  for (const auto& n : names) cols.push_back(index_of(n));
  return select_columns(cols);
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const Eigen::Index> rows) const {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(rows.size()), cols());
  for (std::size_t i = 0; i < rows.size(); ++i) v.row(static_cast<Eigen::Index>(i)) = values_.row(rows[i]);
  return {columns_, std::move(v), target_.select_rows(rows)};
}

FeatureMatrix align_and_join(const LoadSeries& target, std::span<const FeatureColumn> columns,
                             const AlignOptions& options) {
  if (columns.empty()) throw AlignmentError("empty candidate set");
  const Eigen::Index n = target.size();
  const auto& ts = target.timestamps();

  Eigen::MatrixXd aligned(n, static_cast<Eigen::Index>(columns.size()));
  Eigen::Index first = 0;
  Eigen::Index last = n - 1;  // inclusive
  std::string limiting = columns.front().name;
  std::unordered_set<std::string> seen;

  for (std::size_t c = 0; c < columns.size(); ++c) {
    const FeatureColumn& col = columns[c];
    if (!seen.insert(col.name).second) throw AlignmentError("duplicate feature name '" + col.name + "'");
    auto out = aligned.col(static_cast<Eigen::Index>(c));
    out.setConstant(std::numeric_limits<double>::quiet_NaN());
    if (col.timestamps.empty()) {
      if (col.values.size() != n)
        throw AlignmentError("column '" + col.name + "' has " + std::to_string(col.values.size()) +
                             " values but the target has " + std::to_string(n));
      out = col.values;
      out.head(std::min(col.warmup, n)).setConstant(std::numeric_limits<double>::quiet_NaN());
    } else {
      if (static_cast<Eigen::Index>(col.timestamps.size()) != col.values.size())
        throw AlignmentError("column '" + col.name + "' has mismatched timestamps and values");
      std::size_t k = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        while (k < col.timestamps.size() && col.timestamps[k] < ts[static_cast<std::size_t>(i)]) ++k;
        if (k < col.timestamps.size() && col.timestamps[k] == ts[static_cast<std::size_t>(i)] &&
            static_cast<Eigen::Index>(k) >= col.warmup)
          out(i) = col.values(static_cast<Eigen::Index>(k));
      }
    }
    Eigen::Index lo = 0;
    while (lo < n && std::isnan(out(lo))) ++lo;
    Eigen::Index hi = n - 1;
    while (hi >= 0 && std::isnan(out(hi))) --hi;
    if (lo > hi) throw AlignmentError("column '" + col.name + "' has no values overlapping the target");
    for (Eigen::Index i = lo; i <= hi; ++i) {
      if (!std::isfinite(out(i)))
        throw AlignmentError("column '" + col.name + "' has a missing or non-finite value at " +
                             ts[static_cast<std::size_t>(i)].to_string());
    }
    if (lo > first || hi < last) limiting = col.name;
    first = std::max(first, lo);
    last = std::min(last, hi);
  }

  const Eigen::Index rows = last - first + 1;
  if (rows < std::max<Eigen::Index>(options.min_rows, 1))
    throw AlignmentError("overlap of " + std::to_string(std::max<Eigen::Index>(rows, 0)) +
                         " rows is below the minimum of " + std::to_string(options.min_rows) +
                         " (limited by column '" + limiting + "')");

  std::vector<ColumnInfo> info;
  info.reserve(columns.size());
  for (const auto& col : columns) info.push_back({col.name, col.aspect, col.units});
  std::vector<Eigen::Index> keep(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) keep[static_cast<std::size_t>(i)] = first + i;
  return {std::move(info), aligned.middleRows(first, rows), target.select_rows(keep)};
}

namespace {

DatasetSplit make_split(const FeatureMatrix& m, std::vector<Eigen::Index> train, std::vector<Eigen::Index> test,
                        SplitRule rule) {
  if (train.empty()) throw SplitError("split leaves the training set empty");
  if (test.empty()) throw SplitError("split leaves the test set empty");
  DatasetSplit s{m.select_rows(train), m.select_rows(test), rule, std::move(train), std::move(test)};
  return s;
}

}  // namespace

DatasetSplit split_by_date(const FeatureMatrix& matrix, const Timestamp& cutoff) {
  std::vector<Eigen::Index> train, test;
  const auto& ts = matrix.target().timestamps();
  for (std::size_t i = 0; i < ts.size(); ++i)
    (ts[i] < cutoff ? train : test).push_back(static_cast<Eigen::Index>(i));
  SplitRule rule;
  rule.kind = SplitRule::Kind::ByDateCutoff;
  rule.cutoff = cutoff;
  return make_split(matrix, std::move(train), std::move(test), rule);
}

DatasetSplit random_holdout(const FeatureMatrix& matrix, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ParameterError("holdout fraction must lie in (0, 1), got " + std::to_string(fraction));
  const Eigen::Index n = matrix.rows();
  const auto n_test = static_cast<Eigen::Index>(std::floor(fraction * static_cast<double>(n)));
  if (n_test < 1) throw ParameterError("holdout fraction selects no test rows");
  auto order = seeded_permutation(n, seed);
  std::vector<Eigen::Index> test(order.begin(), order.begin() + n_test);
  std::sort(test.begin(), test.end());
  std::vector<Eigen::Index> train;
  train.reserve(static_cast<std::size_t>(n - n_test));
  std::size_t t = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (t < test.size() && test[t] == i) {
      ++t;
      continue;
    }
    train.push_back(i);
  }
  SplitRule rule;
  rule.kind = SplitRule::Kind::RandomHoldout;
  rule.fraction = fraction;
  rule.seed = seed;
  return make_split(matrix, std::move(train), std::move(test), rule);
}

}  // namespace stlf
