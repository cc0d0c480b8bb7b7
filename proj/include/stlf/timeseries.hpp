#pragma once

// Data model shared by every stage of the pipeline: timestamps with a fixed
// UTC offset, the target load series, aspect-tagged feature columns and the
// aligned feature matrix, plus the train/test splitting rules.

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace stlf {

using Date = std::chrono::year_month_day;

Date parse_date(std::string_view text);  // YYYY-MM-DD
std::string format_date(const Date& date);
std::int64_t days_since_epoch(const Date& date);
Date date_from_days(std::int64_t days);

/// An instant with the UTC offset it was recorded in (seconds precision).
/// Ordering and equality compare the instant only.
class Timestamp {
 public:
  Timestamp() = default;
  Timestamp(std::int64_t unix_seconds, std::int32_t utc_offset_seconds)
      : unix_seconds_(unix_seconds), offset_(utc_offset_seconds) {}

  /// Local wall-clock midnight of `date` at the given offset.
  static Timestamp local_midnight(const Date& date, std::int32_t utc_offset_seconds);

  /// Accepts `YYYY-MM-DDTHH:MM:SS` followed by `Z` or `+HH:MM`/`-HH:MM`.
  /// Timestamps without an explicit offset are rejected.
  static Timestamp parse(std::string_view text);

  std::int64_t unix_seconds() const noexcept { return unix_seconds_; }
  std::int32_t utc_offset_seconds() const noexcept { return offset_; }

  Date local_date() const;
  std::chrono::weekday local_weekday() const;
  Timestamp shifted(std::int64_t seconds) const { return {unix_seconds_ + seconds, offset_}; }

  std::string to_string() const;

  friend bool operator==(const Timestamp& a, const Timestamp& b) noexcept {
    return a.unix_seconds_ == b.unix_seconds_;
  }
  friend std::strong_ordering operator<=>(const Timestamp& a, const Timestamp& b) noexcept {
    return a.unix_seconds_ <=> b.unix_seconds_;
  }

 private:
  std::int64_t unix_seconds_ = 0;
  std::int32_t offset_ = 0;
};

enum class Frequency { DailyPeak, HalfHourly };

std::int64_t step_seconds(Frequency f) noexcept;
std::string_view to_string(Frequency f) noexcept;
Frequency parse_frequency(std::string_view text);

/// Target load in MW on a regular grid.
class LoadSeries {
 public:
  LoadSeries() = default;
  /// Validates: equal lengths, finite positive values, strictly increasing
  /// timestamps spaced exactly one step of `frequency` apart.
  LoadSeries(std::vector<Timestamp> timestamps, Eigen::VectorXd values, Frequency frequency);

  Eigen::Index size() const noexcept { return values_.size(); }
  const std::vector<Timestamp>& timestamps() const noexcept { return timestamps_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  Frequency frequency() const noexcept { return frequency_; }

  /// True unless the series was produced by a non-contiguous row selection.
  bool regular() const noexcept { return regular_; }

  /// Row subset in the given order; the result is flagged irregular unless the
  /// rows form a contiguous ascending range.
  LoadSeries select_rows(std::span<const Eigen::Index> rows) const;

 private:
  std::vector<Timestamp> timestamps_;
  Eigen::VectorXd values_;
  Frequency frequency_ = Frequency::DailyPeak;
  bool regular_ = true;
};

/// Written order of the candidate set: geographical, astronomical, social,
/// then historical load.
enum class FeatureAspect { Geographical = 0, Astronomical = 1, Social = 2, HistoricalLoad = 3 };

std::string_view to_string(FeatureAspect a) noexcept;  // "G", "A", "S", "L"
FeatureAspect parse_aspect(std::string_view text);

/// A candidate feature. The first `warmup` values are undefined (NaN) and are
/// trimmed when the column is joined to the target. When `timestamps` is empty
/// the values are positional with the target series.
struct FeatureColumn {
  std::string name;
  FeatureAspect aspect = FeatureAspect::Geographical;
  std::string units;
  Eigen::VectorXd values;
  Eigen::Index warmup = 0;
  std::vector<Timestamp> timestamps;
};

struct ColumnInfo {
  std::string name;
  FeatureAspect aspect = FeatureAspect::Geographical;
  std::string units;

  friend bool operator==(const ColumnInfo&, const ColumnInfo&) = default;
};

/// Samples x features, aligned row-for-row with the target.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<ColumnInfo> columns, Eigen::MatrixXd values, LoadSeries target);

  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const LoadSeries& target() const noexcept { return target_; }
  const std::vector<ColumnInfo>& columns() const noexcept { return columns_; }
  std::vector<std::string> names() const;

  std::optional<Eigen::Index> find(std::string_view name) const;
  /// Throws ParameterError naming the column when absent.
  Eigen::Index index_of(std::string_view name) const;
  FeatureColumn column(Eigen::Index j) const;

  FeatureMatrix select_columns(std::span<const Eigen::Index> cols) const;
  FeatureMatrix select_columns(std::span<const std::string> names) const;
  FeatureMatrix select_rows(std::span<const Eigen::Index> rows) const;

 private:
  std::vector<ColumnInfo> columns_;
  Eigen::MatrixXd values_;
  LoadSeries target_;
};

struct AlignOptions {
  Eigen::Index min_rows = 1;
};

/// Joins feature columns to the target. Rows where any column is undefined
/// (warm-up rows of lags and moving averages, timestamps outside a column's
/// coverage) are dropped from both ends; column order is preserved.
FeatureMatrix align_and_join(const LoadSeries& target, std::span<const FeatureColumn> columns,
                             const AlignOptions& options = {});

struct SplitRule {
  enum class Kind { ByDateCutoff, RandomHoldout };
  Kind kind = Kind::ByDateCutoff;
  Timestamp cutoff;
  double fraction = 0.0;
  std::uint64_t seed = 0;
};

struct DatasetSplit {
  FeatureMatrix train;
  FeatureMatrix test;
  SplitRule rule;
  std::vector<Eigen::Index> train_rows;
  std::vector<Eigen::Index> test_rows;
};

/// Rows strictly before `cutoff` train; the rest test.
DatasetSplit split_by_date(const FeatureMatrix& matrix, const Timestamp& cutoff);

/// floor(fraction * n) rows go to test, chosen by a seeded shuffle. Both parts
/// keep ascending row order.
DatasetSplit random_holdout(const FeatureMatrix& matrix, double fraction, std::uint64_t seed);

}  // namespace stlf
