#include "stlf/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include <json.hpp>

#include "stlf/error.hpp"
#include "stlf/format.hpp"
#include "stlf/parallel.hpp"
#include "stlf/stats.hpp"

namespace stlf {

std::vector<std::string> resolve_selectors(const FeatureMatrix& matrix, std::span<const std::string> selectors) {
  const auto& cols = matrix.columns();
  std::vector<bool> take(cols.size(), false);
  for (const auto& sel : selectors) {
    bool matched = false;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      bool hit = false;
      if (sel == "@all") hit = true;
      else if (sel.size() == 2 && sel[0] == '@') hit = to_string(cols[j].aspect) == sel.substr(1);
      else if (!sel.empty() && sel.back() == '*') hit = cols[j].name.starts_with(sel.substr(0, sel.size() - 1));
      else hit = cols[j].name == sel;
      if (hit) take[j] = matched = true;
    }
    if (!matched) throw ConfigError("candidate selector '" + sel + "' matches no column");
  }
  std::vector<std::string> out;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (take[j]) out.push_back(cols[j].name);
  return out;
}

const std::vector<ScenarioSpec>& default_scenarios() {
  static const std::vector<ScenarioSpec> specs = [] {
    std::vector<std::string> s1{"@L", "day_of_year"};
    std::vector<std::string> s2 = s1;
    for (const char* c : {"temp_max_f", "dewpoint_f", "@S"}) s2.emplace_back(c);
    std::vector<std::string> s3 = s2;
    for (const char* c : {"temp_mean_f", "temp_min_f", "humidity_pct", "pressure_inhg", "wind_mph", "gust_mph",
                          "cloud_cover_pct", "precip_in", "visibility_mi"})
      s3.emplace_back(c);
    return std::vector<ScenarioSpec>{{"S1", s1, 8}, {"S2", s2, 15}, {"S3", s3, 20}, {"S4", {"@all"}, 55}};
  }();
  return specs;
}

const ScenarioSpec& find_scenario(std::string_view name) {
  for (const auto& s : default_scenarios())
    if (s.name == name) return s;
  throw ConfigError("unknown scenario '" + std::string(name) + "' (expected S1, S2, S3 or S4)");
}

DatasetSplit apply_split(const FeatureMatrix& matrix, const SplitRule& rule) {
  return rule.kind == SplitRule::Kind::ByDateCutoff ? split_by_date(matrix, rule.cutoff)
                                                    : random_holdout(matrix, rule.fraction, rule.seed);
}

ScenarioRun run_scenario(const ScenarioSpec& spec, const FeatureMatrix& candidates, std::span<const ModelConfig> models,
                         const SplitRule& split, const SelectionConfig& selection, std::uint64_t seed, int jobs) {
  try {
    if (spec.k < 1) throw ConfigError("k must be at least 1");
    const auto names = resolve_selectors(candidates, spec.candidates);
    const FeatureMatrix pool = candidates.select_columns(std::span<const std::string>(names));
    const DatasetSplit parts = apply_split(pool, split);

    ScenarioRun run;
    run.scenario = spec.name;
    run.seed = seed;
    run.candidates = pool.cols();
    run.k_requested = spec.k;
    run.k_exceeds_candidates = spec.k > pool.cols();
    SelectionConfig sel = selection;
    sel.k = spec.k;
    auto [train, report] = select_top_k(parts.train, sel);
    run.selected = report.kept_names();
    run.report = std::move(report);
    const auto kept = train.names();
    const FeatureMatrix test = parts.test.select_columns(std::span<const std::string>(kept));

    run.models.resize(models.size());
    parallel_for(models.size(), jobs, [&](std::size_t m) {
      ModelConfig cfg = models[m];
      set_seed(cfg, seed);
      const auto t0 = std::chrono::steady_clock::now();
      const TrainedModel model = train_model(cfg, train);
      const Eigen::VectorXd yhat = model.predict(test);
      const auto t1 = std::chrono::steady_clock::now();
      ModelRun& out = run.models[m];
      out.kind = kind_of(cfg);
      out.metrics = evaluate_forecast(test.target().values(), yhat);
      out.seconds = std::chrono::duration<double>(t1 - t0).count();
      out.info = model.info();
    });
    return run;
  } catch (const ConfigError& e) {
    throw ConfigError("scenario " + spec.name + ": " + e.what());
  } catch (const Error& e) {
    throw Error("scenario " + spec.name + ": " + e.what());
  }
}

namespace {

ExperimentResult aggregate(std::string protocol, int runs, const ExperimentSetup& setup, std::vector<ScenarioRun> details) {
  ExperimentResult res;
  res.protocol = std::move(protocol);
  res.runs = runs;
  for (int s = 1; s <= runs; ++s) res.seeds.push_back(static_cast<std::uint64_t>(s));
  for (std::size_t sc = 0; sc < setup.scenarios.size(); ++sc) {
    for (std::size_t m = 0; m < setup.models.size(); ++m) {
      std::vector<double> mae, mape_v, rmse_v, secs;
      for (int r = 0; r < runs; ++r) {
        const ModelRun& mr = details[sc * static_cast<std::size_t>(runs) + static_cast<std::size_t>(r)].models[m];
        mae.push_back(mr.metrics.mae);
        mape_v.push_back(mr.metrics.mape);
        rmse_v.push_back(mr.metrics.rmse);
        secs.push_back(mr.seconds);
      }
      auto summary = [](const std::vector<double>& v) {
        const MeanStd ms = mean_std(v);
        return MetricSummary{ms.mean, ms.std};
      };
      res.rows.push_back({setup.scenarios[sc].name, kind_of(setup.models[m]), setup.scenarios[sc].k, summary(mae),
                          summary(mape_v), summary(rmse_v), summary(secs)});
    }
  }
  res.details = std::move(details);
  return res;
}

void check_setup(const ExperimentSetup& setup, int runs) {
  if (runs < 1) throw ConfigError("run count must be at least 1");
  if (setup.scenarios.empty()) throw ConfigError("no scenarios to run");
  if (setup.models.empty()) throw ConfigError("no models to run");
}

}  // namespace

ExperimentResult repeated_runs(const FeatureMatrix& candidates, const ExperimentSetup& setup, int runs, int jobs) {
  check_setup(setup, runs);
  const std::size_t per = static_cast<std::size_t>(runs);
  std::vector<ScenarioRun> details(setup.scenarios.size() * per);
  parallel_for(details.size(), jobs, [&](std::size_t i) {
    const auto seed = static_cast<std::uint64_t>(i % per + 1);
    details[i] = run_scenario(setup.scenarios[i / per], candidates, setup.models, setup.split, setup.selection, seed);
  });
  return aggregate("repeated_runs", runs, setup, std::move(details));
}

ExperimentResult holdout_iterations(const FeatureMatrix& candidates, const ExperimentSetup& setup, double fraction,
                                    int iterations, int jobs) {
  check_setup(setup, iterations);
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("holdout fraction must be in (0, 1)");
  const std::size_t per = static_cast<std::size_t>(iterations);
  std::vector<ScenarioRun> details(setup.scenarios.size() * per);
  parallel_for(details.size(), jobs, [&](std::size_t i) {
    const auto seed = static_cast<std::uint64_t>(i % per + 1);
    SplitRule rule;
    rule.kind = SplitRule::Kind::RandomHoldout;
    rule.fraction = fraction;
    rule.seed = seed;
    details[i] = run_scenario(setup.scenarios[i / per], candidates, setup.models, rule, setup.selection, seed);
  });
  return aggregate("holdout", iterations, setup, std::move(details));
}

void ExperimentResult::write_csv(std::ostream& out, bool timing) const {
  out << "scenario,model,k,metric,mean,std,runs\n";
  for (const auto& r : rows) {
    auto line = [&](const char* metric, const MetricSummary& s) {
      out << r.scenario << ',' << to_string(r.model) << ',' << r.k << ',' << metric << ',' << format_double(s.mean)
          << ',' << format_double(s.std) << ',' << runs << '\n';
    };
    line("mae", r.mae);
    line("mape", r.mape);
    line("rmse", r.rmse);
    if (timing) line("seconds", r.seconds);
  }
}

std::string ExperimentResult::to_json(bool timing) const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["protocol"] = protocol;
  j["runs"] = runs;
  j["seeds"] = seeds;
  ordered_json rows_json = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row{{"scenario", r.scenario}, {"model", std::string(to_string(r.model))}, {"k", r.k}};
    auto put = [&](const char* key, const MetricSummary& s) { row[key] = {{"mean", s.mean}, {"std", s.std}}; };
    put("mae", r.mae);
    put("mape", r.mape);
    put("rmse", r.rmse);
    if (timing) put("seconds", r.seconds);
    rows_json.push_back(std::move(row));
  }
  j["results"] = std::move(rows_json);
  return j.dump(2) + "\n";
}

std::string metric_report_json(const MetricReport& report) {
  nlohmann::ordered_json j{{"mae", report.mae}, {"mape", report.mape}, {"rmse", report.rmse}, {"n", report.n}};
  return j.dump(2) + "\n";
}

}  // namespace stlf
