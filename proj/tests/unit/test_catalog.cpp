#include <doctest.h>

#include "stlf/catalog.hpp"
#include "stlf/error.hpp"
#include "stlf/ingest.hpp"
#include "stlf/synth.hpp"
#include "support.hpp"

using namespace stlf;

namespace {
const std::string kDir = std::string(STLF_SOURCE_DIR) + "/catalogs/";

std::vector<FeatureColumn> random_weather(const std::vector<Timestamp>& ts, const std::vector<std::string>& names,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FeatureColumn> out;
  for (const auto& n : names)
    out.push_back({n, FeatureAspect::Geographical, units_from_name(n),
                   stlf::test::random_vector(static_cast<Eigen::Index>(ts.size()), rng).array() + 10.0, 0, ts});
  return out;
}

std::vector<std::string> raw_columns(const FeatureCatalog& cat) {
  std::vector<std::string> out;
  for (const auto& e : cat.entries)
    if (const auto* r = std::get_if<RawSource>(&e.source)) out.push_back(r->column);
  return out;
}
}  // namespace

TEST_CASE("shipped catalogs have the documented sizes") {
  const auto maine = load_catalog(kDir + "maine.json");
  CHECK(maine.entries.size() == 80);
  CHECK(maine.aspect_counts() == std::array<Eigen::Index, 4>{56, 15, 9, 7});
  CHECK(load_catalog(kDir + "nsw.json").entries.size() == 86);
  CHECK(load_catalog(kDir + "texas.json").entries.size() == 52);
}

TEST_CASE("Maine catalog builds the 87-column candidate matrix") {
  SynthConfig sc;
  sc.n_days = 500;
  const SynthData data = generate(sc, default_synth_location());
  FeatureCatalog cat = load_catalog(kDir + "maine.json");
  cat.holidays = data.holidays;
  const FeatureMatrix m = build_candidate_matrix(cat, RawData{data.weather, std::nullopt}, data.load);
  CHECK(m.cols() == 87);
  CHECK(m.rows() == 500 - 7);  // seven load lags; weather windows are shorter
  // Aspect blocks appear in G, A, S, L order.
  FeatureAspect prev = FeatureAspect::Geographical;
  for (const auto& c : m.columns()) {
    CHECK(static_cast<int>(c.aspect) >= static_cast<int>(prev));
    prev = c.aspect;
  }
  CHECK(m.columns().back().name == "load_lag_7");
}

TEST_CASE("NSW catalog builds on half-hourly data") {
  const FeatureCatalog cat = load_catalog(kDir + "nsw.json");
  const auto start = Timestamp::parse("2009-12-01T00:00:00+10:00");
  std::vector<Timestamp> ts;
  for (int i = 0; i < 48 * 40; ++i) ts.push_back(start.shifted(i * 1800));
  Rng rng(5);
  const LoadSeries load(ts, stlf::test::random_vector(48 * 40, rng).array() + 8000.0, Frequency::HalfHourly);
  const FeatureMatrix m =
      build_candidate_matrix(cat, RawData{random_weather(ts, raw_columns(cat), 6), std::nullopt}, load);
  CHECK(m.cols() == 86 + 7);
  CHECK(m.rows() == 48 * 40 - 336);
}

TEST_CASE("lags-only catalog") {
  FeatureCatalog cat;
  cat.location = default_synth_location();
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(30, 100, 130);
  const FeatureMatrix m = build_candidate_matrix(cat, RawData{}, stlf::test::daily_load(y));
  CHECK(m.cols() == 7);
  CHECK(m.rows() == 23);
}

TEST_CASE("catalog validation and round trip") {
  CHECK_THROWS_AS(parse_catalog(R"({"location":{"latitude":0,"longitude":0},"features":[{"name":"a","aspect":"G","source":"lag","base":"b","steps":0}]})"),
                  Error);
  CHECK_THROWS_AS(parse_catalog(R"({"location":{"latitude":0,"longitude":0},"features":[{"name":"a","aspect":"G","source":"bogus"}]})"),
                  Error);
  const auto maine = load_catalog(kDir + "maine.json");
  const auto again = parse_catalog(catalog_to_json(maine));
  REQUIRE(again.entries.size() == maine.entries.size());
  CHECK(catalog_to_json(again) == catalog_to_json(maine));
}

TEST_CASE("missing raw column names the feature") {
  FeatureCatalog cat;
  cat.location = default_synth_location();
  cat.entries.push_back({"t", FeatureAspect::Geographical, "f", RawSource{"temp_f", Aggregation::None}});
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(30, 100, 130);
  CHECK_THROWS_WITH_AS(build_candidate_matrix(cat, RawData{}, stlf::test::daily_load(y)),
                       doctest::Contains("temp_f"), Error);
}
