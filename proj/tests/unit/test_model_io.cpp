#include <doctest.h>

#include <sstream>

#include "stlf/error.hpp"
#include "stlf/models/grid_search.hpp"
#include "stlf/models/model.hpp"
#include "support.hpp"

using namespace stlf;
using stlf::test::random_matrix;
using stlf::test::random_vector;

TEST_CASE("model JSON round trip preserves predictions exactly") {
  Rng rng(51);
  const Eigen::MatrixXd x = random_matrix(60, 3, rng);
  const Eigen::VectorXd y = (x.col(0) + 0.2 * random_vector(60, rng)).array() + 30.0;
  for (ModelKind k : kAllModelKinds) {
    const TrainedModel m = train_model(default_config(k), x, y, {"a", "b", "c"});
    const TrainedModel back = model_from_json(model_to_json(m));
    CHECK(back.kind() == k);
    CHECK(back.features() == m.features());
    CHECK(back.predict(x) == m.predict(x));
    CHECK(model_to_json(back) == model_to_json(m));
  }
  CHECK_THROWS_AS(model_from_json(R"({"format":"other"})"), Error);
}

TEST_CASE("predict checks the schema") {
  Rng rng(52);
  const Eigen::MatrixXd x = random_matrix(30, 2, rng);
  const Eigen::VectorXd y = random_vector(30, rng).array() + 5.0;
  const TrainedModel m = train_model(GbrtConfig{}, stlf::test::make_matrix(x, y));
  CHECK_THROWS_AS(m.predict(Eigen::MatrixXd(3, 3)), SchemaError);
  Eigen::MatrixXd swapped = x;
  swapped.col(0).swap(swapped.col(1));
  std::vector<ColumnInfo> cols{{"x1", FeatureAspect::Geographical, ""}, {"x0", FeatureAspect::Geographical, ""}};
  const FeatureMatrix wrong(cols, swapped, stlf::test::daily_load(y));
  CHECK_THROWS_WITH_AS(m.predict(wrong), doctest::Contains("different order"), SchemaError);
}

TEST_CASE("config JSON") {
  const ModelConfig c = config_from_json(ModelKind::Gbrt, R"({"n_trees": 7})");
  CHECK(std::get<GbrtConfig>(c).n_trees == 7);
  CHECK(std::get<GbrtConfig>(c).max_depth == 3);
  CHECK_THROWS_AS(config_from_json(ModelKind::Svr, R"({"gamma": 1})"), ConfigError);
  CHECK(config_from_json(ModelKind::Mlp, config_to_json(default_config(ModelKind::Mlp))).index() == 2);
}

TEST_CASE("grid search") {
  Rng rng(53);
  const Eigen::MatrixXd x = random_matrix(80, 2, rng);
  const Eigen::VectorXd y = (x * Eigen::Vector2d(3, -1)).array() + 50.0 + 0.1 * random_vector(80, rng).array();

  SUBCASE("singleton grid returns that configuration") {
    ParamGrid grid{{{"c", {0.5}}}};
    const auto r = grid_search(SvrConfig{}, grid, x, y, 4, 1);
    CHECK(std::get<SvrConfig>(r.best).c == 0.5);
    CHECK(r.table.size() == 1);
  }
  SUBCASE("dominant epsilon wins and the table covers the lattice") {
    // An insensitive zone wider than the target spread leaves the model flat.
    ParamGrid grid{{{"epsilon", {5.0, 0.0}}, {"c", {0.1, 1.0}}}};
    const auto r = grid_search(SvrConfig{}, grid, x, y, 4, 1);
    CHECK(r.table.size() == 4);
    CHECK(std::get<SvrConfig>(r.best).epsilon == 0.0);
    std::ostringstream out;
    r.write_csv(out);
    CHECK(out.str().rfind("epsilon,c,mean_mape,best\n", 0) == 0);
  }
  SUBCASE("job count does not change the result") {
    ParamGrid grid{{{"max_depth", {1, 2, 3}}}};
    const auto a = grid_search(GbrtConfig{}, grid, x, y, 3, 7, 1);
    const auto b = grid_search(GbrtConfig{}, grid, x, y, 3, 7, 3);
    CHECK(a.best_index == b.best_index);
    for (std::size_t i = 0; i < a.table.size(); ++i) CHECK(a.table[i].mean_mape == b.table[i].mean_mape);
  }
  CHECK_THROWS_AS(apply_param(*std::make_unique<ModelConfig>(SvrConfig{}), "depth", 1.0), ConfigError);
  ModelConfig g = GbrtConfig{};
  CHECK_THROWS_AS(apply_param(g, "max_depth", 2.5), ConfigError);
}
