#include "stlf/cli/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stlf/error.hpp"

namespace stlf::cli {

using nlohmann::json;

std::string_view to_string(ProtocolKind kind) noexcept {
  switch (kind) {
    case ProtocolKind::DateSplit: return "date_split";
    case ProtocolKind::Holdout: return "holdout";
    case ProtocolKind::RepeatedRuns: return "repeated_runs";
  }
  return "?";
}

fs::path RunConfig::model_file(const ModelEntry& entry) const {
  if (!entry.file.empty()) return entry.file;
  return output / ("model_" + std::string(stlf::to_string(kind_of(entry.config))) + ".json");
}

namespace {

// Object view that remembers which keys were read, so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& at(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string path(const char* key) const { return where_.empty() ? key : where_ + "." + key; }

  template <typename T>
  T get(const char* key, T fallback) {
    if (!has(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path(key) + ": wrong type");
    }
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError((where_.empty() ? "" : where_ + ": ") + "unknown key '" + key + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError((where_.empty() ? std::string("config") : where_) + ": " + what);
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

template <typename Fn>
auto config_guard(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Date parse_config_date(const std::string& where, const std::string& text) {
  return config_guard(where, [&] { return parse_date(text); });
}

std::vector<std::string> string_list(Section& s, const char* key, std::vector<std::string> fallback) {
  if (!s.has(key)) return fallback;
  const json& j = s.at(key);
  if (!j.is_array()) throw ConfigError(s.path(key) + ": expected a list of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ConfigError(s.path(key) + ": expected a list of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

void parse_data(const json& j, const fs::path& base, DataConfig& d) {
  Section s(j, "data");
  d.load = resolve(base, s.get<std::string>("load", ""));
  if (s.has("frequency"))
    d.frequency = config_guard("data.frequency", [&] { return parse_frequency(s.get<std::string>("frequency", "")); });
  d.weather = resolve(base, s.get<std::string>("weather", ""));
  d.weather_columns = string_list(s, "weather_columns", {});
  d.max_gap = s.get<Eigen::Index>("max_gap", d.max_gap);
  if (d.max_gap < 0) s.fail("max_gap must be non-negative");
  d.holidays = resolve(base, s.get<std::string>("holidays", ""));
  d.tides = resolve(base, s.get<std::string>("tides", ""));
  d.ghi_profile = resolve(base, s.get<std::string>("ghi_profile", ""));
  s.finish();
}

void parse_selection(const json& j, SelectionConfig& sel) {
  Section s(j, "selection");
  sel.variance_threshold = s.get<double>("variance_threshold", sel.variance_threshold);
  sel.k = s.get<Eigen::Index>("k", sel.k);
  if (s.has("scaling"))
    sel.scaling = config_guard("selection.scaling", [&] { return parse_scaling(s.get<std::string>("scaling", "")); });
  s.finish();
  config_guard("selection", [&] { sel.validate(); return 0; });
}

ModelEntry parse_model(const json& j, const fs::path& base, std::size_t index) {
  const std::string where = "models[" + std::to_string(index) + "]";
  if (j.is_string()) {
    const auto kind = config_guard(where, [&] { return parse_model_kind(j.get<std::string>()); });
    return {default_config(kind), {}, 5, {}};
  }
  Section s(j, where);
  if (!s.has("kind")) s.fail("missing 'kind'");
  const auto kind = config_guard(where, [&] { return parse_model_kind(s.get<std::string>("kind", "")); });
  ModelEntry e{default_config(kind), {}, 5, {}};
  if (s.has("params")) {
    const std::string text = s.at("params").dump();
    e.config = config_guard(where + ".params", [&] { return config_from_json(kind, text); });
  }
  config_guard(where + ".params", [&] { validate(e.config); return 0; });
  if (s.has("grid")) {
    const json& g = s.at("grid");
    if (!g.is_object()) throw ConfigError(where + ".grid: expected an object of value lists");
    // nlohmann objects iterate in key order, which fixes the axis order.
    for (const auto& [name, values] : g.items()) {
      if (!values.is_array() || values.empty())
        throw ConfigError(where + ".grid." + name + ": expected a non-empty list of numbers");
      GridAxis axis{name, {}};
      for (const auto& v : values) {
        if (!v.is_number()) throw ConfigError(where + ".grid." + name + ": expected numbers");
        axis.values.push_back(v.get<double>());
      }
      e.grid.axes.push_back(std::move(axis));
    }
    config_guard(where + ".grid", [&] {
      e.grid.validate();
      // Every lattice point must be a valid configuration.
      for (std::size_t i = 0; i < e.grid.size(); ++i) {
        ModelConfig probe = e.config;
        const auto point = e.grid.point(i);
        for (std::size_t a = 0; a < point.size(); ++a) apply_param(probe, e.grid.axes[a].parameter, point[a]);
        validate(probe);
      }
      return 0;
    });
  }
  e.folds = s.get<int>("folds", e.folds);
  if (e.folds < 2) s.fail("folds must be at least 2");
  e.file = resolve(base, s.get<std::string>("file", ""));
  s.finish();
  return e;
}

void parse_protocol(const json& j, ProtocolConfig& p) {
  Section s(j, "protocol");
  const std::string kind = s.get<std::string>("kind", "holdout");
  if (kind == "date_split") p.kind = ProtocolKind::DateSplit;
  else if (kind == "holdout") p.kind = ProtocolKind::Holdout;
  else if (kind == "repeated_runs") p.kind = ProtocolKind::RepeatedRuns;
  else s.fail("unknown kind '" + kind + "' (expected date_split, holdout or repeated_runs)");
  if (s.has("cutoff")) p.cutoff = parse_config_date("protocol.cutoff", s.get<std::string>("cutoff", ""));
  p.fraction = s.get<double>("fraction", p.fraction);
  p.iterations = s.get<int>("iterations", p.iterations);
  p.runs = s.get<int>("runs", p.runs);
  s.finish();
  if (p.kind != ProtocolKind::Holdout && !p.cutoff) s.fail(kind + " needs a 'cutoff' date");
  if (!(p.fraction > 0.0 && p.fraction < 1.0)) s.fail("fraction must lie in (0, 1)");
  if (p.iterations < 1) s.fail("iterations must be at least 1");
  if (p.runs < 1) s.fail("runs must be at least 1");
}

std::vector<ScenarioSpec> parse_scenarios(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("scenarios: expected a non-empty list");
  std::vector<ScenarioSpec> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "scenarios[" + std::to_string(i) + "]";
    ScenarioSpec spec;
    if (j[i].is_string()) {
      spec = config_guard(where, [&] { return find_scenario(j[i].get<std::string>()); });
    } else {
      Section s(j[i], where);
      spec.name = s.get<std::string>("name", "");
      spec.candidates = string_list(s, "candidates", {});
      spec.k = s.get<Eigen::Index>("k", 0);
      s.finish();
      if (spec.name.empty()) s.fail("missing 'name'");
      if (spec.candidates.empty()) s.fail("missing 'candidates'");
      if (spec.k < 1) s.fail("k must be at least 1");
    }
    if (!names.insert(spec.name).second) throw ConfigError(where + ": duplicate scenario '" + spec.name + "'");
    out.push_back(std::move(spec));
  }
  return out;
}

void parse_pdp(const json& j, PdpConfig& p) {
  Section s(j, "pdp");
  p.features = string_list(s, "features", p.features);
  if (p.features.empty()) s.fail("features must not be empty");
  p.inputs = string_list(s, "inputs", {});
  if (s.has("model"))
    p.model = config_guard("pdp.model", [&] { return parse_model_kind(s.get<std::string>("model", "")); });
  p.grid.points = s.get<Eigen::Index>("points", p.grid.points);
  p.grid.lower_percentile = s.get<double>("lower_percentile", p.grid.lower_percentile);
  p.grid.upper_percentile = s.get<double>("upper_percentile", p.grid.upper_percentile);
  s.finish();
  if (p.grid.points < 2) s.fail("points must be at least 2");
  if (!(p.grid.lower_percentile >= 0.0 && p.grid.lower_percentile <= p.grid.upper_percentile &&
        p.grid.upper_percentile <= 100.0))
    s.fail("percentiles must satisfy 0 <= lower <= upper <= 100");
}

void parse_synth(const json& j, SynthConfig& c, GeoLocation& loc) {
  Section s(j, "synth");
  c.n_days = s.get<Eigen::Index>("n_days", c.n_days);
  if (s.has("start")) c.start = parse_config_date("synth.start", s.get<std::string>("start", ""));
  c.base_load = s.get<double>("base_load", c.base_load);
  c.balance_point = s.get<double>("balance_point", c.balance_point);
  c.slope_below = s.get<double>("slope_below", c.slope_below);
  c.slope_above = s.get<double>("slope_above", c.slope_above);
  c.solar_lag = s.get<Eigen::Index>("solar_lag", c.solar_lag);
  c.solar_weight = s.get<double>("solar_weight", c.solar_weight);
  c.ghi_weight = s.get<double>("ghi_weight", c.ghi_weight);
  if (s.has("weekday_offsets")) {
    const json& w = s.at("weekday_offsets");
    if (!w.is_array() || w.size() != 7) s.fail("weekday_offsets needs 7 numbers, Monday first");
    for (std::size_t i = 0; i < 7; ++i) {
      if (!w[i].is_number()) s.fail("weekday_offsets needs 7 numbers, Monday first");
      c.weekday_offsets[i] = w[i].get<double>();
    }
  }
  c.holiday_offset = s.get<double>("holiday_offset", c.holiday_offset);
  c.noise_std = s.get<double>("noise_std", c.noise_std);
  c.temp_mean = s.get<double>("temp_mean", c.temp_mean);
  c.temp_amplitude = s.get<double>("temp_amplitude", c.temp_amplitude);
  c.temp_noise_std = s.get<double>("temp_noise_std", c.temp_noise_std);
  c.temp_ar = s.get<double>("temp_ar", c.temp_ar);
  c.decimals = s.get<int>("decimals", c.decimals);
  if (s.has("location")) {
    Section l(s.at("location"), "synth.location");
    loc.latitude = l.get<double>("latitude", loc.latitude);
    loc.longitude = l.get<double>("longitude", loc.longitude);
    loc.elevation = l.get<double>("elevation", loc.elevation);
    loc.utc_offset_hours = l.get<double>("utc_offset_hours", loc.utc_offset_hours);
    l.finish();
    config_guard("synth.location", [&] { loc.validate(); return 0; });
  }
  s.finish();
  config_guard("synth", [&] { c.validate(); return 0; });
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  Section s(doc, "");
  cfg.seed = s.get<std::uint64_t>("seed", cfg.seed);
  cfg.jobs = s.get<int>("jobs", cfg.jobs);
  if (cfg.jobs < 1) s.fail("jobs must be at least 1");
  cfg.output = resolve(base_dir, s.get<std::string>("output", "out"));
  if (s.has("data")) parse_data(s.at("data"), base_dir, cfg.data);
  cfg.catalog = resolve(base_dir, s.get<std::string>("catalog", ""));
  if (s.has("selection")) parse_selection(s.at("selection"), cfg.selection);

  if (s.has("models")) {
    const json& m = s.at("models");
    if (!m.is_array() || m.empty()) s.fail("models: expected a non-empty list");
    std::set<ModelKind> kinds;
    for (std::size_t i = 0; i < m.size(); ++i) {
      cfg.models.push_back(parse_model(m[i], base_dir, i));
      if (!kinds.insert(kind_of(cfg.models.back().config)).second)
        throw ConfigError("models[" + std::to_string(i) + "]: model kind listed twice");
    }
  } else {
    for (ModelKind k : kAllModelKinds) cfg.models.push_back({default_config(k), {}, 5, {}});
  }

  if (s.has("protocol")) parse_protocol(s.at("protocol"), cfg.protocol);
  cfg.scenarios = s.has("scenarios") ? parse_scenarios(s.at("scenarios")) : default_scenarios();
  cfg.groups = s.get<bool>("groups", cfg.groups);
  if (s.has("group_sizes")) {
    const json& g = s.at("group_sizes");
    if (!g.is_array() || g.size() != 3) s.fail("group_sizes needs three counts (G, A, S)");
    for (std::size_t i = 0; i < 3; ++i) {
      if (!g[i].is_number_integer() || g[i].get<Eigen::Index>() < 1)
        s.fail("group_sizes needs three positive counts (G, A, S)");
      cfg.group_sizes[i] = g[i].get<Eigen::Index>();
    }
  }
  if (s.has("pdp")) parse_pdp(s.at("pdp"), cfg.pdp);
  if (s.has("rank")) {
    Section r(s.at("rank"), "rank");
    cfg.rank.features = string_list(r, "features", {});
    r.finish();
  }
  if (s.has("lagscan")) {
    Section l(s.at("lagscan"), "lagscan");
    cfg.lagscan.feature = l.get<std::string>("feature", cfg.lagscan.feature);
    cfg.lagscan.max_lag = l.get<Eigen::Index>("max_lag", cfg.lagscan.max_lag);
    l.finish();
    if (cfg.lagscan.max_lag < 0) l.fail("max_lag must be non-negative");
  }
  if (s.has("synth")) parse_synth(s.at("synth"), cfg.synth, cfg.synth_location);
  s.finish();

  if (cfg.pdp.model) {
    bool found = false;
    for (const auto& e : cfg.models) found |= kind_of(e.config) == *cfg.pdp.model;
    if (!found) throw ConfigError("pdp.model: '" + std::string(to_string(*cfg.pdp.model)) + "' is not in models");
  }
  cfg.document = doc.dump(2) + "\n";
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig cfg = parse_run_config(text.str(), path.parent_path());
  cfg.source = path;
  return cfg;
}

void override_seed(RunConfig& config, std::uint64_t seed) {
  config.seed = seed;
  json doc = json::parse(config.document);
  doc["seed"] = seed;
  config.document = doc.dump(2) + "\n";
}

void override_output(RunConfig& config, const fs::path& output) {
  config.output = output;
  json doc = json::parse(config.document);
  doc["output"] = output.generic_string();
  config.document = doc.dump(2) + "\n";
}

}  // namespace stlf::cli
