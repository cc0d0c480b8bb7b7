#include "stlf/cli/commands.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "stlf/catalog.hpp"
#include "stlf/error.hpp"
#include "stlf/format.hpp"
#include "stlf/ingest.hpp"
#include "stlf/metrics.hpp"

namespace stlf::cli {

using nlohmann::ordered_json;

namespace {

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body, std::ostream& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
  log << "wrote " << path.generic_string() << '\n';
}

void write_text(const fs::path& path, const std::string& text, std::ostream& log) {
  write_file(path, [&](std::ostream& out) { out << text; }, log);
}

void prepare_output(const RunConfig& cfg, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(cfg.output, ec);
  if (ec) throw Error("cannot create output directory " + cfg.output.string() + ": " + ec.message());
  write_text(cfg.output / "run_config.json", cfg.document.empty() ? "{}\n" : cfg.document, log);
}

void require(const fs::path& p, const char* key) {
  if (p.empty()) throw ConfigError(std::string("'") + key + "' is required for this command");
}

struct Dataset {
  FeatureCatalog catalog;
  LoadSeries load;
  WeatherData weather;
  std::vector<FeatureColumn> tides;
  std::size_t holiday_count = 0;
  FeatureMatrix candidates;
};

Dataset load_dataset(const RunConfig& cfg, bool need_catalog = true) {
  require(cfg.data.load, "data.load");
  if (need_catalog) require(cfg.catalog, "catalog");
  Dataset d;
  if (!cfg.catalog.empty()) d.catalog = load_catalog(cfg.catalog);
  d.load = read_load_csv(cfg.data.load, cfg.data.frequency);
  if (!cfg.data.weather.empty())
    d.weather = read_weather_csv(cfg.data.weather, {cfg.data.weather_columns, cfg.data.max_gap});
  if (!cfg.data.holidays.empty()) {
    d.catalog.holidays = read_holiday_csv(cfg.data.holidays);
    d.holiday_count = d.catalog.holidays.size();
  }
  const std::int32_t offset = cfg.catalog.empty() ? d.load.timestamps().front().utc_offset_seconds()
                                                  : d.catalog.location.utc_offset_seconds();
  if (!cfg.data.tides.empty()) d.tides = read_tide_csv(cfg.data.tides, offset);
  if (cfg.catalog.empty()) return d;

  RawData raw;
  raw.columns = d.weather.columns;
  raw.columns.insert(raw.columns.end(), d.tides.begin(), d.tides.end());
  if (!cfg.data.ghi_profile.empty()) raw.ghi_profile = read_ghi_profile_csv(cfg.data.ghi_profile);
  d.candidates = build_candidate_matrix(d.catalog, raw, d.load);
  return d;
}

/// The single train/test split used by one-shot commands.
SplitRule primary_split(const RunConfig& cfg, const Dataset& d) {
  SplitRule rule;
  if (cfg.protocol.kind == ProtocolKind::Holdout) {
    rule.kind = SplitRule::Kind::RandomHoldout;
    rule.fraction = cfg.protocol.fraction;
    rule.seed = cfg.seed;
  } else {
    rule.kind = SplitRule::Kind::ByDateCutoff;
    rule.cutoff = Timestamp::local_midnight(*cfg.protocol.cutoff, d.catalog.location.utc_offset_seconds());
  }
  return rule;
}

std::vector<ModelConfig> seeded_configs(const RunConfig& cfg) {
  std::vector<ModelConfig> out;
  for (const auto& e : cfg.models) {
    out.push_back(e.config);
    set_seed(out.back(), cfg.seed);
  }
  return out;
}

std::string kind_name(const ModelConfig& c) { return std::string(to_string(kind_of(c))); }

/// Model inputs taken from `matrix` in training order; missing columns are a
/// SchemaError with a remediation hint.
FeatureMatrix model_inputs(const TrainedModel& model, const FeatureMatrix& matrix, const fs::path& file) {
  std::vector<std::string> missing;
  for (const auto& f : model.features())
    if (!matrix.find(f)) missing.push_back(f);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw SchemaError("model " + file.generic_string() + " expects columns absent from the candidate matrix: " +
                      list + ". Retrain with `stlf train` on this catalog and data, or point the config at the "
                             "catalog the model was trained with.");
  }
  return matrix.select_columns(std::span<const std::string>(model.features()));
}

TrainedModel load_trained(const RunConfig& cfg, const ModelEntry& e) {
  const fs::path file = cfg.model_file(e);
  if (!fs::exists(file))
    throw Error("model file " + file.generic_string() + " does not exist; run `stlf train` with this config first");
  TrainedModel model = load_model(file);
  if (model.kind() != kind_of(e.config))
    throw SchemaError("model file " + file.generic_string() + " holds a " + std::string(to_string(model.kind())) +
                      " model but the config lists " + kind_name(e.config));
  return model;
}

std::pair<FeatureMatrix, SelectionReport> fit_selection(const RunConfig& cfg, const DatasetSplit& split) {
  return select_top_k(split.train, cfg.selection);
}

void write_selection(const RunConfig& cfg, const SelectionReport& report, std::ostream& log) {
  write_file(cfg.output / "selection.csv", [&](std::ostream& o) { report.write_csv(o); }, log);
  write_file(
      cfg.output / "selected.txt",
      [&](std::ostream& o) {
        for (const auto& n : report.kept_names()) o << n << '\n';
      },
      log);
  if (report.k_exceeds_survivors)
    log << "note: k=" << report.k_requested << " exceeds the " << report.survivors
        << " features that pass the variance gate; all survivors are kept\n";
}

std::string safe_name(std::string name) {
  for (char& c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) c = '_';
  return name;
}

ExperimentSetup experiment_setup(const RunConfig& cfg, const Dataset& d, std::vector<ScenarioSpec> scenarios) {
  ExperimentSetup setup;
  setup.scenarios = std::move(scenarios);
  for (const auto& e : cfg.models) setup.models.push_back(e.config);
  setup.selection = cfg.selection;
  setup.split = primary_split(cfg, d);
  return setup;
}

ExperimentResult run_protocol(const RunConfig& cfg, const Dataset& d, std::vector<ScenarioSpec> scenarios) {
  const ExperimentSetup setup = experiment_setup(cfg, d, std::move(scenarios));
  if (cfg.protocol.kind == ProtocolKind::Holdout)
    return holdout_iterations(d.candidates, setup, cfg.protocol.fraction, cfg.protocol.iterations, cfg.jobs);
  return repeated_runs(d.candidates, setup, cfg.protocol.runs, cfg.jobs);
}

void write_experiment(const RunConfig& cfg, const ExperimentResult& res, const std::string& stem,
                      const CommandOptions& opt, std::ostream& log) {
  write_file(cfg.output / (stem + ".csv"), [&](std::ostream& o) { res.write_csv(o, opt.timing); }, log);
  write_text(cfg.output / (stem + ".json"), res.to_json(opt.timing), log);
}

}  // namespace

void cmd_ingest_check(const RunConfig& cfg, const CommandOptions&, std::ostream& log) {
  const Dataset d = load_dataset(cfg, false);
  prepare_output(cfg, log);
  ordered_json j;
  const auto& ts = d.load.timestamps();
  j["load"] = {{"file", cfg.data.load.filename().string()},
               {"frequency", to_string(d.load.frequency())},
               {"rows", d.load.size()},
               {"first", ts.front().to_string()},
               {"last", ts.back().to_string()},
               {"min_mw", d.load.values().minCoeff()},
               {"max_mw", d.load.values().maxCoeff()}};
  if (!cfg.data.weather.empty()) {
    ordered_json cols = ordered_json::array();
    for (const auto& c : d.weather.columns) cols.push_back({{"name", c.name}, {"units", c.units}});
    j["weather"] = {{"file", cfg.data.weather.filename().string()},
                    {"rows", d.weather.columns.empty() ? 0 : d.weather.columns.front().values.size()},
                    {"columns", cols},
                    {"interpolated", d.weather.notes}};
  }
  if (!cfg.data.holidays.empty())
    j["holidays"] = {{"file", cfg.data.holidays.filename().string()}, {"dates", d.holiday_count}};
  if (!cfg.data.tides.empty()) {
    std::vector<std::string> names;
    for (const auto& c : d.tides) names.push_back(c.name);
    j["tides"] = {{"file", cfg.data.tides.filename().string()}, {"columns", names}};
  }
  if (!cfg.catalog.empty()) {
    const auto counts = d.catalog.aspect_counts();
    j["candidates"] = {{"catalog", cfg.catalog.filename().string()},
                       {"rows", d.candidates.rows()},
                       {"columns", d.candidates.cols()},
                       {"first", d.candidates.target().timestamps().front().to_string()},
                       {"G", counts[0]},
                       {"A", counts[1]},
                       {"S", counts[2]},
                       {"L", counts[3]}};
  }
  for (const auto& n : d.weather.notes) log << "note: " << n << '\n';
  write_text(cfg.output / "ingest_report.json", j.dump(2) + "\n", log);
}

void cmd_select(const RunConfig& cfg, const CommandOptions&, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  prepare_output(cfg, log);
  const DatasetSplit split = apply_split(d.candidates, primary_split(cfg, d));
  const auto [selected, report] = fit_selection(cfg, split);
  write_selection(cfg, report, log);
}

void cmd_train(const RunConfig& cfg, const CommandOptions&, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  prepare_output(cfg, log);
  const DatasetSplit split = apply_split(d.candidates, primary_split(cfg, d));
  const auto [train, report] = fit_selection(cfg, split);
  write_selection(cfg, report, log);
  for (const auto& e : cfg.models) {
    ModelConfig mc = e.config;
    set_seed(mc, cfg.seed);
    const std::string kind = kind_name(mc);
    if (!e.grid.axes.empty()) {
      const GridSearchResult gs =
          grid_search(mc, e.grid, train.values(), train.target().values(), e.folds, cfg.seed, cfg.jobs);
      write_file(cfg.output / ("grid_" + kind + ".csv"), [&](std::ostream& o) { gs.write_csv(o); }, log);
      mc = gs.best;
    }
    const TrainedModel model = train_model(mc, train);
    if (model.info().warning) log << "warning: " << model.info().message << '\n';
    save_model(model, cfg.model_file(e));
    log << "wrote " << cfg.model_file(e).generic_string() << '\n';
  }
}

void cmd_forecast(const RunConfig& cfg, const CommandOptions&, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  std::vector<TrainedModel> models;
  for (const auto& e : cfg.models) models.push_back(load_trained(cfg, e));
  prepare_output(cfg, log);
  const DatasetSplit split = apply_split(d.candidates, primary_split(cfg, d));
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto& model = models[i];
    const FeatureMatrix x = model_inputs(model, split.test, cfg.model_file(cfg.models[i]));
    const Eigen::VectorXd yhat = model.predict(x);
    const Eigen::VectorXd& y = x.target().values();
    const std::string kind(to_string(model.kind()));
    write_file(
        cfg.output / ("predictions_" + kind + ".csv"),
        [&](std::ostream& o) {
          o << "timestamp,actual,predicted\n";
          for (Eigen::Index r = 0; r < y.size(); ++r)
            o << x.target().timestamps()[static_cast<std::size_t>(r)].to_string() << ',' << format_double(y(r)) << ','
              << format_double(yhat(r)) << '\n';
        },
        log);
    write_text(cfg.output / ("metrics_" + kind + ".json"), metric_report_json(evaluate_forecast(y, yhat)), log);
  }
}

void cmd_evaluate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  if (cfg.protocol.kind != ProtocolKind::DateSplit) {
    prepare_output(cfg, log);
    const ScenarioSpec lvkb{"lvkb", {"@all"}, cfg.selection.k};
    const ExperimentResult res = run_protocol(cfg, d, {lvkb});
    write_experiment(cfg, res, "summary", opt, log);
    return;
  }
  std::vector<TrainedModel> models;
  for (const auto& e : cfg.models) models.push_back(load_trained(cfg, e));
  prepare_output(cfg, log);
  const DatasetSplit split = apply_split(d.candidates, primary_split(cfg, d));
  ordered_json j;
  j["protocol"] = "date_split";
  j["cutoff"] = format_date(*cfg.protocol.cutoff);
  j["test_rows"] = split.test.rows();
  for (std::size_t i = 0; i < models.size(); ++i) {
    const FeatureMatrix x = model_inputs(models[i], split.test, cfg.model_file(cfg.models[i]));
    const MetricReport m = evaluate_forecast(x.target().values(), models[i].predict(x));
    j["models"][std::string(to_string(models[i].kind()))] = ordered_json::parse(metric_report_json(m));
  }
  write_text(cfg.output / "metrics.json", j.dump(2) + "\n", log);
}

void cmd_scenario(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  // Resolve every selector before any training so a bad one fails fast.
  for (const auto& s : cfg.scenarios) {
    try {
      resolve_selectors(d.candidates, s.candidates);
    } catch (const ConfigError& e) {
      throw ConfigError("scenario " + s.name + ": " + e.what());
    }
  }
  prepare_output(cfg, log);
  const SplitRule rule = primary_split(cfg, d);
  const std::vector<ModelConfig> models = seeded_configs(cfg);

  if (cfg.protocol.kind == ProtocolKind::DateSplit) {
    std::vector<ScenarioRun> runs;
    for (const auto& s : cfg.scenarios) {
      runs.push_back(run_scenario(s, d.candidates, models, rule, cfg.selection, cfg.seed, cfg.jobs));
      if (runs.back().k_exceeds_candidates)
        log << "note: scenario " << s.name << " requests k=" << s.k << " but only " << runs.back().selected.size()
            << " features are available\n";
    }
    write_file(
        cfg.output / "scenarios.csv",
        [&](std::ostream& o) {
          o << "scenario,model,candidates,k,selected,mae,mape,rmse" << (opt.timing ? ",seconds" : "") << '\n';
          for (const auto& r : runs)
            for (const auto& m : r.models) {
              o << r.scenario << ',' << to_string(m.kind) << ',' << r.candidates << ',' << r.k_requested << ','
                << r.selected.size() << ',' << format_double(m.metrics.mae) << ',' << format_double(m.metrics.mape)
                << ',' << format_double(m.metrics.rmse);
              if (opt.timing) o << ',' << format_double(m.seconds);
              o << '\n';
            }
        },
        log);
    for (const auto& r : runs)
      write_file(cfg.output / ("selection_" + safe_name(r.scenario) + ".csv"),
                 [&](std::ostream& o) { r.report.write_csv(o); }, log);
  } else {
    write_experiment(cfg, run_protocol(cfg, d, cfg.scenarios), "scenarios", opt, log);
  }

  if (cfg.groups) {
    const DatasetSplit split = apply_split(d.candidates, rule);
    const auto groups = top_features_by_aspect(split.train, cfg.selection, cfg.group_sizes);
    const GroupTable table = group_experiment(d.candidates, groups, models, rule, cfg.seed, cfg.jobs);
    write_file(cfg.output / "groups.csv", [&](std::ostream& o) { table.write_csv(o); }, log);
    write_file(
        cfg.output / "group_features.csv",
        [&](std::ostream& o) {
          o << "aspect,rank,feature\n";
          for (const auto& g : groups)
            for (std::size_t i = 0; i < g.features.size(); ++i)
              o << to_string(g.aspect) << ',' << i + 1 << ',' << g.features[i] << '\n';
        },
        log);
  }
}

void cmd_pdp(const RunConfig& cfg, const CommandOptions&, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  const SplitRule rule = primary_split(cfg, d);
  const DatasetSplit split = apply_split(d.candidates, rule);

  std::vector<std::string> inputs;
  if (!cfg.pdp.inputs.empty()) {
    inputs = resolve_selectors(d.candidates, cfg.pdp.inputs);
  } else {
    // LV-KB selection keeps input column order in the returned matrix.
    inputs = fit_selection(cfg, split).first.names();
  }
  for (const auto& f : cfg.pdp.features)
    if (std::find(inputs.begin(), inputs.end(), f) == inputs.end())
      throw ConfigError("pdp feature '" + f + "' is not among the model inputs; list it in pdp.inputs");

  const ModelEntry* entry = &cfg.models.front();
  const ModelKind want = cfg.pdp.model.value_or(ModelKind::Gbrt);
  for (const auto& e : cfg.models)
    if (kind_of(e.config) == want) entry = &e;
  ModelConfig mc = entry->config;
  set_seed(mc, cfg.seed);

  prepare_output(cfg, log);
  const FeatureMatrix train = split.train.select_columns(std::span<const std::string>(inputs));
  const TrainedModel model = train_model(mc, train);
  std::vector<std::pair<std::string, BalancePoint>> points;
  for (const auto& f : cfg.pdp.features) {
    const PdpCurve curve = partial_dependence(model, train, f, cfg.pdp.grid);
    write_file(cfg.output / ("pdp_" + safe_name(f) + ".csv"), [&](std::ostream& o) { curve.write_csv(o); }, log);
    points.emplace_back(f, balance_point(curve));
  }
  write_file(
      cfg.output / "balance_points.csv",
      [&](std::ostream& o) {
        o << "feature,model,value,response,index,v_shaped\n";
        for (const auto& [f, bp] : points)
          o << f << ',' << to_string(model.kind()) << ',' << format_double(bp.value) << ','
            << format_double(bp.response) << ',' << bp.index << ',' << (bp.v_shaped ? 1 : 0) << '\n';
      },
      log);
}

void cmd_rank(const RunConfig& cfg, const CommandOptions&, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  std::vector<std::string> features;
  if (!cfg.rank.features.empty()) {
    features = resolve_selectors(d.candidates, cfg.rank.features);
  } else {
    for (const auto& c : d.candidates.columns())
      if (c.aspect != FeatureAspect::HistoricalLoad) features.push_back(c.name);
  }
  prepare_output(cfg, log);
  const RankTable table =
      rank_single_features(d.candidates, features, seeded_configs(cfg), primary_split(cfg, d), cfg.seed, cfg.jobs);
  write_file(cfg.output / "rank.csv", [&](std::ostream& o) { table.write_csv(o); }, log);
}

void cmd_lagscan(const RunConfig& cfg, const CommandOptions&, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  const auto j = d.candidates.find(cfg.lagscan.feature);
  if (!j) throw ConfigError("lagscan.feature '" + cfg.lagscan.feature + "' is not a candidate column");
  if (d.candidates.rows() - cfg.lagscan.max_lag < 3)
    throw ConfigError("lagscan.max_lag " + std::to_string(cfg.lagscan.max_lag) + " leaves fewer than 3 overlapping rows");
  prepare_output(cfg, log);
  const Eigen::VectorXd feature = d.candidates.values().col(*j);
  const LagScan scan = lag_correlation_scan(feature, d.candidates.target().values(), cfg.lagscan.max_lag);
  write_file(cfg.output / "lagscan.csv", [&](std::ostream& o) { scan.write_csv(o); }, log);
  write_text(cfg.output / "best_lag.txt", std::to_string(scan.best_lag) + "\n", log);
  log << "best lag " << scan.best_lag << " (r = " << format_double(scan.best_r) << ")\n";
}

void cmd_synth(const RunConfig& cfg, const CommandOptions&, std::ostream& log) {
  SynthConfig sc = cfg.synth;
  sc.seed = cfg.seed;
  const SynthData data = generate(sc, cfg.synth_location);
  prepare_output(cfg, log);
  write_load_csv(cfg.output / "load.csv", data.load);
  log << "wrote " << (cfg.output / "load.csv").generic_string() << '\n';
  write_weather_csv(cfg.output / "weather.csv", data.weather);
  log << "wrote " << (cfg.output / "weather.csv").generic_string() << '\n';

  std::vector<HolidayEntry> entries;
  std::set<int> years;
  for (const Date& h : data.holidays) years.insert(static_cast<int>(h.year()));
  for (int y : years) {
    const auto dates = us_federal_holidays(y);
    for (std::size_t i = 0; i < dates.size(); ++i)
      if (data.holidays.count(dates[i])) entries.push_back({dates[i], std::string(us_federal_holiday_names()[i])});
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
  write_holiday_csv(cfg.output / "holidays.csv", entries);
  log << "wrote " << (cfg.output / "holidays.csv").generic_string() << '\n';

  const SynthTruth& t = data.truth;
  ordered_json j{{"seed", sc.seed},
                 {"n_days", sc.n_days},
                 {"start", format_date(sc.start)},
                 {"balance_point", t.balance_point},
                 {"solar_lag", t.solar_lag},
                 {"weekday_offsets", t.weekday_offsets},
                 {"holiday_offset", t.holiday_offset},
                 {"location",
                  {{"latitude", cfg.synth_location.latitude},
                   {"longitude", cfg.synth_location.longitude},
                   {"elevation", cfg.synth_location.elevation},
                   {"utc_offset_hours", cfg.synth_location.utc_offset_hours}}}};
  write_text(cfg.output / "truth.json", j.dump(2) + "\n", log);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Short-term load forecasting with multi-source features", "stlf"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  CommandOptions options;
  app.add_option("--config", config_path, "Run configuration (JSON)");
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--jobs", jobs, "Worker threads; outputs do not depend on it")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Override the output directory");
  app.add_flag("--timing", options.timing, "Add wall-clock columns to summaries");

  using Command = void (*)(const RunConfig&, const CommandOptions&, std::ostream&);
  const std::pair<const char*, std::pair<Command, const char*>> commands[] = {
      {"ingest-check", {cmd_ingest_check, "Parse and validate the input files"}},
      {"select", {cmd_select, "LV-KB feature selection report"}},
      {"train", {cmd_train, "Train the configured models"}},
      {"forecast", {cmd_forecast, "Predict the test part with trained models"}},
      {"evaluate", {cmd_evaluate, "Score trained models or run a multi-run protocol"}},
      {"scenario", {cmd_scenario, "Scenario and feature-group comparisons"}},
      {"pdp", {cmd_pdp, "Partial dependence curves and balance points"}},
      {"rank", {cmd_rank, "Single-feature ranking on top of the load lags"}},
      {"lagscan", {cmd_lagscan, "Lagged correlation scan of one feature against load"}},
      {"synth", {cmd_synth, "Generate a synthetic dataset"}},
  };
  Command chosen = nullptr;
  std::string chosen_name;
  for (const auto& [name, cmd] : commands) {
    auto* sub = app.add_subcommand(name, cmd.second);
    sub->fallthrough();
    sub->callback([&, name = name, fn = cmd.first] {
      chosen = fn;
      chosen_name = name;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "stlf: " << e.what() << '\n';
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = load_run_config(config_path);
    } else if (chosen_name != "synth") {
      throw ConfigError("--config is required for " + chosen_name);
    } else {
      cfg = parse_run_config("{}");
    }
    if (seed) override_seed(cfg, *seed);
    if (!out_dir.empty()) override_output(cfg, out_dir);
    if (jobs) cfg.jobs = *jobs;
    chosen(cfg, options, err);
    return 0;
  } catch (const ConfigError& e) {
    err << "stlf " << chosen_name << ": configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "stlf " << chosen_name << ": error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace stlf::cli
