// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "solar_refs.hpp"
#include "stlf/astro.hpp"
#include "stlf/catalog.hpp"
#include "stlf/evaluation.hpp"
#include "stlf/features.hpp"
#include "stlf/ingest.hpp"
#include "stlf/interpret.hpp"
#include "stlf/metrics.hpp"
#include "stlf/models/gbrt.hpp"
#include "stlf/models/mlp.hpp"
#include "stlf/models/svr.hpp"
#include "stlf/selection.hpp"
#include "stlf/synth.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace stlf;
using stlf::test::random_matrix;
using stlf::test::random_vector;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 1 ----

Outcome lvkb_oracle() {
  const auto t0 = Clock::now();
  Rng rng(101);
  int matrices = 0, mismatches = 0;
  while (matrices < 200) {
    const Eigen::Index n = 10 + static_cast<Eigen::Index>(rng.below(191));
    const Eigen::Index p = 3 + static_cast<Eigen::Index>(rng.below(38));
    Eigen::MatrixXd x = random_matrix(n, p, rng);
    for (Eigen::Index j = 0; j < p; ++j) x.col(j) *= std::exp(rng.uniform(-2.5, 1.5));  // spread around the gate
    if (p > 3 && rng.below(3) == 0) x.col(p - 1) = x.col(0);                          // exact tie
    // Loads must be positive; a constant shift leaves every correlation unchanged.
    Eigen::VectorXd y = x.leftCols(2).rowwise().sum() + random_vector(n, rng);
    y.array() += 1.0 - y.minCoeff();
    const bool minmax = matrices % 2 == 0;
    SelectionConfig cfg;
    cfg.scaling = minmax ? Scaling::MinMax : Scaling::Raw;
    cfg.variance_threshold = minmax ? 0.03 : 0.1056;
    cfg.k = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(p)));
    const auto o = stlf::test::oracle_lvkb(x, y, cfg.variance_threshold, cfg.k, minmax);
    if (std::none_of(o.survives.begin(), o.survives.end(), [](bool b) { return b; })) continue;
    ++matrices;
    const auto report = select_top_k(stlf::test::make_matrix(x, y), cfg).second;
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto& f = report.features[static_cast<std::size_t>(j)];
      const auto u = static_cast<std::size_t>(j);
      if ((f.stage_dropped != DropStage::VarianceGate) != o.survives[u] || f.rank != o.rank[u] || f.kept != o.kept[u]) {
        ++mismatches;
        break;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0, fmt("%d/200 matrices match, %.2fs", 200 - mismatches, secs)};
}

// ---- 2 ----

Outcome metric_exactness() {
  struct Example {
    std::vector<double> y, yhat;
    double mae, mape, rmse;
  };
  // Values worked out by hand.
  const Example table[] = {
      {{100, 200, 300, 400}, {110, 190, 330, 360}, 22.5, 8.75, 25.98076211353316},
      {{50, 80}, {45, 88}, 6.5, 10.0, 6.670832032063167},
      {{2, 4, 8}, {3, 3, 3}, 7.0 / 3.0, 137.5 / 3.0, 3.0},
      {{1000, 1000, 1000}, {1000, 1000, 1000}, 0.0, 0.0, 0.0},
      {{10}, {12.5}, 2.5, 25.0, 2.5},
  };
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  int bad = 0;
  for (const auto& e : table) {
    const Eigen::Map<const Eigen::VectorXd> y(e.y.data(), static_cast<Eigen::Index>(e.y.size()));
    const Eigen::Map<const Eigen::VectorXd> f(e.yhat.data(), static_cast<Eigen::Index>(e.yhat.size()));
    bad += !close(mae(y, f), e.mae) + !close(mape(y, f), e.mape) + !close(rmse(y, f), e.rmse);
  }
  Rng rng(102);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd a = random_vector(1 + static_cast<Eigen::Index>(rng.below(100)), rng);
    const Eigen::VectorXd b = a + random_vector(a.size(), rng) * rng.uniform(0.01, 10.0);
    violations += rmse(a, b) < mae(a, b) * (1.0 - 1e-15);
  }
  return {bad == 0 && violations == 0, fmt("%d table mismatches, %d/1000 rmse<mae", bad, violations)};
}

// ---- 3 ----

Outcome solar_geometry() {
  double worst_zenith = 0, worst_ctd = 0;
  for (const auto& r : test::kZenithRefs) {
    const GeoLocation loc{r.latitude, r.longitude, 0.0, 0.0};
    worst_zenith = std::max(worst_zenith, std::abs(solar_position(loc, Timestamp::parse(r.utc)).zenith - r.zenith_deg));
  }
  for (const auto& r : test::kTwilightRefs) {
    const GeoLocation loc{r.latitude, r.longitude, 0.0, r.utc_offset_hours};
    worst_ctd = std::max(worst_ctd, std::abs(civil_twilight_duration(loc, parse_date(r.date)) - r.minutes));
  }
  return {worst_zenith < 0.5 && worst_ctd < 5.0,
          fmt("max zenith error %.4f deg over 20, max twilight error %.2f min over 10", worst_zenith, worst_ctd)};
}

// ---- 4 ----

Outcome mlp_gradient() {
  Rng rng(104);
  using LV = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  long double worst = 0;
  for (int s = 0; s < 50; ++s) {
    const int p = 2 + static_cast<int>(rng.below(8));
    const std::vector<int> sizes{p, 5, 2, 1};
    const Eigen::MatrixXd z = random_matrix(8 + static_cast<Eigen::Index>(rng.below(20)), p, rng);
    const Eigen::VectorXd t = random_vector(z.rows(), rng);
    const LV w = (random_vector(mlp_parameter_count(sizes), rng) * 0.7).cast<long double>();
    const long double l2 = 1e-3L;
    LV grad;
    mlp_loss_and_gradient<long double>(sizes, w, z, t, l2, &grad);
    auto f = [&](const LV& q) { return mlp_loss_and_gradient<long double>(sizes, q, z, t, l2, nullptr); };
    worst = std::max(worst, stlf::test::max_relative_gradient_error(f, w, grad));
  }
  return {worst < 1e-5L, fmt("max relative error %.3Le over 50 samples", worst)};
}

// ---- 5 ----

Outcome gbrt_monotone() {
  Rng rng(105);
  int bad = 0;
  for (int d = 0; d < 20; ++d) {
    const Eigen::Index n = 40 + static_cast<Eigen::Index>(rng.below(160));
    const Eigen::MatrixXd x = random_matrix(n, 1 + static_cast<Eigen::Index>(rng.below(8)), rng);
    const Eigen::VectorXd y =
        x.col(0).array().square() + (x.rightCols(1).array() * 2.0).sin() + 0.5 * random_vector(n, rng).array();
    GbrtConfig cfg;
    cfg.n_trees = 100;
    TrainingInfo info;
    fit_boosted_trees(x, y, cfg, &info);
    bool ok = info.loss_history.size() == 101;
    for (std::size_t s = 1; ok && s < info.loss_history.size(); ++s) ok = info.loss_history[s] <= info.loss_history[s - 1];
    bad += !ok;
  }
  return {bad == 0, fmt("%d/20 datasets non-increasing over 100 stages", 20 - bad)};
}

// ---- 6 ----

Outcome svr_agreement() {
  Rng rng(106);
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 30 + static_cast<Eigen::Index>(rng.below(40)), p = 2 + static_cast<Eigen::Index>(rng.below(4));
    const Eigen::MatrixXd x = random_matrix(n, p, rng);
    const Eigen::VectorXd y = x * random_vector(p, rng) + 0.5 * random_vector(n, rng);
    SvrConfig cfg;
    cfg.c = 1.0;
    cfg.tolerance = 1e-8;
    cfg.max_iters = 20000;
    const LinearSvr m = fit_linear_svr(x, y, cfg);
    const Eigen::MatrixXd z = m.x_scaler.transform(x);
    const Eigen::VectorXd t = (y.array() - m.y_mean) / m.y_scale;
    const double ours = svr_primal_objective(m.weights, m.bias, z, t, cfg.c, cfg.epsilon);
    const double oracle = static_cast<double>(stlf::test::oracle_svr_objective(z, t, cfg.c, cfg.epsilon));
    worst = std::max(worst, std::abs(ours - oracle) / oracle);
  }
  return {worst <= 1e-3, fmt("max relative objective gap %.2e over 10 problems", worst)};
}

// ---- 7, 8, 9: synthetic replications over 30 seeds ----

struct SyntheticOutcomes {
  Outcome balance, lag, scenarios;
};

SyntheticOutcomes synthetic_replications() {
  constexpr int kSeeds = 30;
  const FeatureCatalog maine = load_catalog(std::string(STLF_SOURCE_DIR) + "/catalogs/maine.json");
  const std::vector<ModelConfig> models{SvrConfig{}, GbrtConfig{}, MlpConfig{}};
  const std::vector<std::string> drivers{"temp_max_f", "@S", "ckghi_lag_50", "ghi", "ckghi"};
  double t_balance = 0, t_lag = 0, t_scen = 0;
  int bp_ok = 0, lag_ok = 0, msf_ok = 0;
  double s1[3] = {0, 0, 0}, s4[3] = {0, 0, 0};
  std::vector<std::string> lags;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    auto t0 = Clock::now();
    SynthConfig sc;
    sc.seed = static_cast<std::uint64_t>(seed);
    const SynthData data = generate(sc, default_synth_location());
    FeatureCatalog cat = maine;
    cat.holidays = data.holidays;
    const FeatureMatrix cand = build_candidate_matrix(cat, RawData{data.weather, std::nullopt}, data.load);
    const double t_shared = seconds_since(t0);

    // 7: GBRT on the driver features, PDP over temperature.
    t0 = Clock::now();
    const auto names = resolve_selectors(cand, drivers);
    const FeatureMatrix x = cand.select_columns(std::span<const std::string>(names));
    GbrtConfig g;
    g.n_trees = 300;
    const TrainedModel model = train_model(g, x);
    const PdpCurve curve = partial_dependence(model, x, "temp_max_f");
    const BalancePoint bp = balance_point(curve);
    bp_ok += std::abs(bp.value - sc.balance_point) <= curve.grid(1) - curve.grid(0);
    t_balance += t_shared + seconds_since(t0);

    // 8
    t0 = Clock::now();
    const LagScan scan = lag_correlation_scan(data.truth.ckghi, data.load.values(), 80);
    lag_ok += std::abs(scan.best_lag - 50) <= 2;
    lags.push_back(std::to_string(scan.best_lag));
    t_lag += seconds_since(t0);

    // 9
    t0 = Clock::now();
    SplitRule split;
    split.cutoff = Timestamp::local_midnight(parse_date("2014-01-01"), default_synth_location().utc_offset_seconds());
    const SelectionConfig sel;
    const auto r1 = run_scenario(find_scenario("S1"), cand, models, split, sel, sc.seed);
    const auto r4 = run_scenario(find_scenario("S4"), cand, models, split, sel, sc.seed);
    for (int m = 0; m < 3; ++m) {
      s1[m] += r1.models[static_cast<std::size_t>(m)].metrics.mape / kSeeds;
      s4[m] += r4.models[static_cast<std::size_t>(m)].metrics.mape / kSeeds;
    }
    const auto groups = top_features_by_aspect(apply_split(cand, split).train, sel);
    const GroupTable gt = group_experiment(cand, groups, models, split, sc.seed);
    bool minimal = true;
    for (std::size_t m = 0; m < 3; ++m)
      for (std::size_t r = 0; r + 1 < gt.rows.size(); ++r) minimal &= gt.rows.back().mape[m] < gt.rows[r].mape[m];
    msf_ok += minimal;
    t_scen += seconds_since(t0);
  }
  std::string lag_list;
  for (const auto& l : lags) lag_list += (lag_list.empty() ? "" : ",") + l;
  SyntheticOutcomes out;
  out.balance = {bp_ok >= 28 && t_balance < 120.0, fmt("%d/30 within one grid step of 70, %.1fs", bp_ok, t_balance)};
  out.lag = {lag_ok >= 28, fmt("%d/30 within 50+-2 (lags %s)", lag_ok, lag_list.c_str())};
  const bool ordered = s4[0] < s1[0] && s4[1] < s1[1] && s4[2] < s1[2];
  out.scenarios = {ordered && msf_ok >= 27,
                   fmt("mean MAPE S1/S4 svr %.3f/%.3f gbrt %.3f/%.3f mlp %.3f/%.3f; MSF minimal %d/30, %.0fs", s1[0], s4[0],
                       s1[1], s4[1], s1[2], s4[2], msf_ok, t_scen)};
  return out;
}

// ---- 10 ----

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + STLF_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

std::map<std::string, std::string> tree_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return out;
}

Outcome cli_determinism() {
  stlf::test::TempDir dir("acceptance_cli");
  std::ofstream(dir / "synth.json") << R"({"seed": 3, "output": "data", "synth": {"n_days": 730, "start": "2013-01-01"}})";
  const std::string base = R"(
  "data": {"load": "data/load.csv", "weather": "data/weather.csv", "holidays": "data/holidays.csv"},
  "catalog": ")" + std::string(STLF_SOURCE_DIR) + R"(/catalogs/maine.json",
  "selection": {"variance_threshold": 0.1056, "k": 20},
  "models": [{"kind": "svr", "grid": {"c": [0.1, 1]}, "folds": 3}, {"kind": "gbrt", "params": {"n_trees": 30}}, "mlp"],
  "scenarios": ["S1", "S4"],
  "pdp": {"features": ["temp_max_f"]},
  "rank": {"features": ["temp_max_f", "ckghi", "ghi", "monday"]},
  "lagscan": {"feature": "ckghi", "max_lag": 80},)";
  std::ofstream(dir / "date.json") << "{\"seed\": 5, \"output\": \"out_date\"," << base
                                   << R"( "protocol": {"kind": "date_split", "cutoff": "2014-07-01"}})";
  std::ofstream(dir / "holdout.json") << "{\"seed\": 5, \"groups\": false, \"output\": \"out_holdout\"," << base
                                      << R"( "protocol": {"kind": "holdout", "fraction": 0.2, "iterations": 2}})";
  std::ofstream(dir / "repeated.json") << "{\"seed\": 5, \"groups\": false, \"output\": \"out_repeated\"," << base
                                       << R"( "protocol": {"kind": "repeated_runs", "cutoff": "2014-07-01", "runs": 2}})";

  struct Step {
    std::string command, config;
  };
  const std::vector<Step> steps{{"synth", "synth.json"},       {"ingest-check", "date.json"}, {"select", "date.json"},
                                {"train", "date.json"},        {"forecast", "date.json"},     {"evaluate", "date.json"},
                                {"scenario", "date.json"},     {"pdp", "date.json"},          {"rank", "date.json"},
                                {"lagscan", "date.json"},      {"evaluate", "holdout.json"},  {"scenario", "holdout.json"},
                                {"evaluate", "repeated.json"}, {"scenario", "repeated.json"}};
  // Each command runs twice in place; the whole output tree after the rerun
  // must equal the tree after the first run, and the first run must have
  // written something.
  int failed = 0, differing = 0;
  std::string notes;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    const fs::path cfg = dir / s.config;
    const fs::path out = dir / (s.config == "synth.json" ? "data" : "out_" + cfg.stem().string());
    const auto before = fs::exists(out) ? tree_contents(out) : std::map<std::string, std::string>{};
    std::map<std::string, std::string> runs[2];
    bool ok = true;
    for (int r = 0; r < 2 && ok; ++r) {
      const int code = run_cli(s.command + " --config \"" + cfg.string() + "\"", dir / fmt("log%zu_%d.txt", i, r));
      if (code != 0) {
        ++failed;
        notes += " " + s.command + "(" + s.config + ") exit " + std::to_string(code) + ";";
        ok = false;
      } else {
        runs[r] = tree_contents(out);
      }
    }
    if (ok && (runs[0] != runs[1] || runs[0] == before)) {
      ++differing;
      notes += " " + s.command + "(" + s.config + ") outputs differ;";
    }
  }
  return {failed == 0 && differing == 0,
          fmt("%zu commands each run twice and compared byte-for-byte, %d failed, %d differ%s", steps.size(), failed,
              differing, notes.c_str())};
}

// ---- 11 ----

Outcome ingest_roundtrip() {
  stlf::test::TempDir dir("acceptance_ingest");
  const SynthData d = generate(SynthConfig{}, default_synth_location());
  std::vector<HolidayEntry> holidays;
  for (int y = 2003; y <= 2015; ++y) {
    const auto dates = us_federal_holidays(y);
    for (std::size_t i = 0; i < dates.size(); ++i)
      holidays.push_back({dates[i], std::string(us_federal_holiday_names()[i])});
  }
  std::sort(holidays.begin(), holidays.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
  write_load_csv(dir / "load.csv", d.load);
  write_weather_csv(dir / "weather.csv", d.weather);
  write_holiday_csv(dir / "holidays.csv", holidays);

  const LoadSeries load = read_load_csv(dir / "load.csv", Frequency::DailyPeak);
  const WeatherData wx = read_weather_csv(dir / "weather.csv");
  const auto hol = read_holiday_entries(dir / "holidays.csv");
  write_load_csv(dir / "load2.csv", load);
  write_weather_csv(dir / "weather2.csv", wx.columns);
  write_holiday_csv(dir / "holidays2.csv", hol);
  int same = 0;
  for (const char* f : {"load", "weather", "holidays"})
    same += slurp(dir / (std::string(f) + ".csv")) == slurp(dir / (std::string(f) + "2.csv"));
  return {same == 3 && load.size() == d.load.size(),
          fmt("%d/3 files byte-identical (%lld load rows, %zu weather columns, %zu holidays)", same,
              static_cast<long long>(load.size()), wx.columns.size(), hol.size())};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"lvkb-oracle", lvkb_oracle},       {"metric-exactness", metric_exactness}, {"solar-geometry", solar_geometry},
      {"mlp-gradient", mlp_gradient},     {"gbrt-monotone-loss", gbrt_monotone},  {"svr-solver-agreement", svr_agreement},
  };
  int failures = 0;
  int index = 1;
  auto report = [&](const std::string& name, const Outcome& o) {
    std::printf("[%s] %2d %-22s %s\n", o.pass ? "PASS" : "FAIL", index++, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };
  auto guarded = [](const std::function<Outcome()>& f) -> Outcome {
    try {
      return f();
    } catch (const std::exception& e) {
      return {false, std::string("exception: ") + e.what()};
    }
  };
  for (const auto& [name, f] : checks) report(name, guarded(f));
  SyntheticOutcomes synthetic;
  try {
    synthetic = synthetic_replications();
  } catch (const std::exception& e) {
    synthetic.balance = synthetic.lag = synthetic.scenarios = {false, std::string("exception: ") + e.what()};
  }
  report("balance-point", synthetic.balance);
  report("lag-recovery", synthetic.lag);
  report("scenario-ordering", synthetic.scenarios);
  report("cli-determinism", guarded(cli_determinism));
  report("ingest-roundtrip", guarded(ingest_roundtrip));
  std::printf("%d/%d criteria passed\n", index - 1 - failures, index - 1);
  return failures == 0 ? 0 : 1;
}
