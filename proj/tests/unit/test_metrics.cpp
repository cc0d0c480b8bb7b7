#include <doctest.h>

#include <cmath>

#include "stlf/error.hpp"
#include "stlf/metrics.hpp"
#include "stlf/stats.hpp"
#include "support.hpp"

using namespace stlf;

TEST_CASE("metrics on hand-computed examples") {
  const Eigen::Vector2d y(100, 100);
  CHECK(mae(y, y) == 0.0);
  CHECK(mae(y, Eigen::Vector2d(110, 90)) == doctest::Approx(10).epsilon(1e-12));
  CHECK(mae(y, Eigen::Vector2d(120, 90)) == doctest::Approx(15).epsilon(1e-12));
  CHECK(mape(y, Eigen::Vector2d(110, 90)) == doctest::Approx(10).epsilon(1e-12));
  CHECK(mape(Eigen::Vector2d(200, 100), Eigen::Vector2d(220, 90)) == doctest::Approx(10).epsilon(1e-12));
  CHECK(rmse(y, Eigen::Vector2d(110, 90)) == doctest::Approx(10).epsilon(1e-12));
  CHECK(rmse(y, Eigen::Vector2d(120, 90)) == doctest::Approx(std::sqrt(250.0)).epsilon(1e-12));
  CHECK_THROWS_AS(mape(Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 1)), UndefinedError);
  CHECK_THROWS(mae(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(3)));
}

TEST_CASE("rmse dominates mae") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd a = stlf::test::random_vector(1 + static_cast<Eigen::Index>(rng.below(50)), rng);
    const Eigen::VectorXd b = a + stlf::test::random_vector(a.size(), rng);
    CHECK(rmse(a, b) >= mae(a, b) * (1 - 1e-15));
  }
}

TEST_CASE("pearson_r") {
  const Eigen::Vector4d x(1, 2, 3, 4), y(1.1, 1.9, 3.2, 3.8);
  CHECK(pearson_r(x, x) == doctest::Approx(1.0));
  CHECK(pearson_r(x, Eigen::Vector4d(-x)) == doctest::Approx(-1.0));
  // Direct formula: sum dx dy / sqrt(sum dx^2 sum dy^2).
  const double mx = 2.5, my = 2.5;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 4; ++i) sxy += (x(i) - mx) * (y(i) - my), sxx += (x(i) - mx) * (x(i) - mx), syy += (y(i) - my) * (y(i) - my);
  CHECK(pearson_r(x, y) == doctest::Approx(sxy / std::sqrt(sxx * syy)).epsilon(1e-14));
  CHECK_THROWS_AS(pearson_r(x, Eigen::Vector4d::Constant(2)), UndefinedError);
}

TEST_CASE("variance, min-max and percentiles") {
  CHECK(population_variance(Eigen::Vector4d(1, 2, 3, 4)) == doctest::Approx(1.25));
  CHECK(minmax_scale(Eigen::Vector3d(2, 4, 6)) == Eigen::Vector3d(0, 0.5, 1));
  CHECK(minmax_scale(Eigen::Vector3d(3, 3, 3)) == Eigen::Vector3d::Zero());
  const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(101, 0, 100);
  CHECK(percentile(v, 1.0) == doctest::Approx(1.0));
  CHECK(percentile(v, 99.0) == doctest::Approx(99.0));
  CHECK(percentile(Eigen::Vector2d(0, 10), 25.0) == doctest::Approx(2.5));
}

TEST_CASE("mean_std of identical values has zero spread") {
  const auto ms = mean_std({0.1, 0.1, 0.1});
  CHECK(ms.mean == 0.1);
  CHECK(ms.std == 0.0);
  const auto two = mean_std({1.0, 3.0});
  CHECK(two.mean == 2.0);
  CHECK(two.std == 1.0);
}
