#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stlf/random.hpp"
#include "stlf/timeseries.hpp"

namespace stlf::test {

inline Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index p, Rng& rng) {
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = rng.normal();
  return x;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, Rng& rng) { return random_matrix(n, 1, rng).col(0); }

/// Daily series at local midnight (UTC-5) starting 2015-01-01.
inline LoadSeries daily_load(const Eigen::VectorXd& values, const char* start = "2015-01-01", int offset_hours = -5) {
  std::vector<Timestamp> ts;
  const auto first = Timestamp::local_midnight(parse_date(start), offset_hours * 3600);
  for (Eigen::Index i = 0; i < values.size(); ++i) ts.push_back(first.shifted(i * 86400));
  return LoadSeries(std::move(ts), values, Frequency::DailyPeak);
}

/// Feature matrix with columns x0.. (aspect G) over a positive daily target.
inline FeatureMatrix make_matrix(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  std::vector<ColumnInfo> cols;
  for (Eigen::Index j = 0; j < x.cols(); ++j) cols.push_back({"x" + std::to_string(j), FeatureAspect::Geographical, ""});
  return FeatureMatrix(std::move(cols), x, daily_load(y));
}

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("stlf_test_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace stlf::test
