#include "stlf/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "stlf/error.hpp"

namespace stlf {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::pair<AstroKind, std::string_view>, 9> kAstroNames = {{
    {AstroKind::Sza, "sza"},
    {AstroKind::SzaNoon, "sza_noon"},
    {AstroKind::SzaInstant, "sza_instant"},
    {AstroKind::CivilTwilight, "ctd"},
    {AstroKind::Daylight, "daylight"},
    {AstroKind::ClearSkyGhi, "ckghi"},
    {AstroKind::ClearSkyGhiInstant, "ckghi_instant"},
    {AstroKind::MoonPhase, "moon_phase"},
    {AstroKind::SunshineDuration, "sunshine_duration"},
}};

Aggregation parse_aggregation(std::string_view s) {
  if (s == "none") return Aggregation::None;
  if (s == "mean") return Aggregation::Mean;
  if (s == "max") return Aggregation::Max;
  if (s == "min") return Aggregation::Min;
  throw ConfigError("unknown aggregation '" + std::string(s) + "' (expected none, mean, max or min)");
}

std::string_view to_string(Aggregation a) {
  switch (a) {
    case Aggregation::None: return "none";
    case Aggregation::Mean: return "mean";
    case Aggregation::Max: return "max";
    case Aggregation::Min: return "min";
  }
  return "none";
}

std::string_view default_units(AstroKind k) {
  switch (k) {
    case AstroKind::Sza:
    case AstroKind::SzaNoon:
    case AstroKind::SzaInstant: return "deg";
    case AstroKind::CivilTwilight:
    case AstroKind::Daylight:
    case AstroKind::SunshineDuration: return "min";
    case AstroKind::ClearSkyGhi: return "Wh/m2";
    case AstroKind::ClearSkyGhiInstant: return "W/m2";
    case AstroKind::MoonPhase: return "fraction";
  }
  return "";
}

// Resolves catalog entries into columns positional with the load series.
class Builder {
 public:
  Builder(const FeatureCatalog& catalog, const RawData& raw, const LoadSeries& load)
      : catalog_(catalog), raw_(raw), load_(load), step_(step_seconds(load.frequency())) {
    for (std::size_t i = 0; i < catalog.entries.size(); ++i) by_name_.emplace(catalog.entries[i].name, i);
  }

  FeatureColumn build(const FeatureSpec& spec) {
    FeatureColumn col = resolve(spec.name, 0, spec.name);
    col.name = spec.name;
    col.aspect = spec.aspect;
    if (!spec.units.empty()) col.units = spec.units;
    return col;
  }

 private:
  // `shift` is in target steps (t - shift * step); `root` names the catalog
  // entry being built, for error messages.
  FeatureColumn resolve(const std::string& name, Eigen::Index shift, const std::string& root) {
    if (auto it = by_name_.find(name); it != by_name_.end()) {
      const FeatureSpec& spec = catalog_.entries[it->second];
      if (!active_.insert(name).second)
        throw ParameterError("feature '" + root + "': circular reference through '" + name + "'");
      FeatureColumn col = std::visit([&](const auto& src) { return resolve_source(spec, src, shift, root); },
                                     spec.source);
      active_.erase(name);
      return col;
    }
    if (name == "load") {
      FeatureColumn base{"load", FeatureAspect::HistoricalLoad, "MW", load_.values(), 0, {}};
      return shift == 0 ? base : lag_series(base, shift);
    }
    if (const FeatureColumn* rc = raw_.find(name)) return shifted(reindex(*rc, Aggregation::None, root), shift);
    throw ParameterError("feature '" + root + "': unresolvable reference '" + name + "'");
  }

  FeatureColumn resolve_source(const FeatureSpec& spec, const RawSource& src, Eigen::Index shift,
                               const std::string& root) {
    const FeatureColumn* rc = raw_.find(src.column);
    if (rc == nullptr)
      throw ParameterError("feature '" + root + "': raw column '" + src.column + "' not found in ingested data");
    FeatureColumn col = reindex(*rc, src.aggregation, root);
    col.aspect = spec.aspect;
    return shifted(std::move(col), shift);
  }

  FeatureColumn resolve_source(const FeatureSpec& spec, const ComputedSource& src, Eigen::Index shift,
                               const std::string& root) {
    FeatureColumn col;
    col.aspect = spec.aspect;
    col.units = std::string(default_units(src.kind));
    col.values.resize(load_.size());
    const auto& ts = load_.timestamps();
    const bool daily = load_.frequency() == Frequency::DailyPeak;
    for (Eigen::Index i = 0; i < load_.size(); ++i) {
      const Timestamp t = ts[static_cast<std::size_t>(i)].shifted(-shift * step_);
      col.values(i) = computed_value(src.kind, t, daily, root);
    }
    return col;
  }

  FeatureColumn resolve_source(const FeatureSpec& spec, const CalendarSource& src, Eigen::Index shift,
                               const std::string&) {
    std::vector<Timestamp> ts;
    ts.reserve(load_.timestamps().size());
    for (const auto& t : load_.timestamps()) ts.push_back(t.shifted(-shift * step_));
    FeatureColumn col = make_calendar_feature(ts, catalog_.holidays, src.kind);
    col.aspect = spec.aspect;
    return col;
  }

  FeatureColumn resolve_source(const FeatureSpec&, const LagSource& src, Eigen::Index shift, const std::string& root) {
    return resolve(src.base, shift + src.steps, root);
  }

  FeatureColumn resolve_source(const FeatureSpec&, const MovingAverageSource& src, Eigen::Index shift,
                               const std::string& root) {
    FeatureColumn acc = resolve(src.base, shift, root);
    for (Eigen::Index k = 1; k < src.window; ++k) {
      const FeatureColumn next = resolve(src.base, shift + k, root);
      acc.values += next.values;
      acc.warmup = std::max(acc.warmup, next.warmup);
    }
    acc.values /= static_cast<double>(src.window);
    acc.values.head(std::min(acc.warmup, acc.values.size())).setConstant(kNaN);
    return acc;
  }

  FeatureColumn shifted(FeatureColumn col, Eigen::Index shift) const {
    if (shift == 0) return col;
    const std::string name = col.name;
    if (shift >= col.values.size()) {
      col.values.setConstant(kNaN);
      col.warmup = col.values.size();
      return col;
    }
    col = lag_series(col, shift);
    col.name = name;
    return col;
  }

  // Maps a raw column onto the load timestamps. Each target row owns the
  // interval [t, t + step); `None` takes the sample at t, the others aggregate
  // every sample in the interval.
  FeatureColumn reindex(const FeatureColumn& rc, Aggregation agg, const std::string& root) const {
    FeatureColumn out;
    out.name = rc.name;
    out.aspect = rc.aspect;
    out.units = rc.units;
    const Eigen::Index n = load_.size();
    if (rc.timestamps.empty()) {
      if (rc.values.size() != n)
        throw AlignmentError("feature '" + root + "': raw column '" + rc.name + "' is not aligned with the load series");
      out.values = rc.values;
      out.warmup = rc.warmup;
      return out;
    }
    out.values = Eigen::VectorXd::Constant(n, kNaN);
    const auto& ts = load_.timestamps();
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Timestamp lo = ts[static_cast<std::size_t>(i)];
      const Timestamp hi = lo.shifted(step_);
      while (k < rc.timestamps.size() && rc.timestamps[k] < lo) ++k;
      if (agg == Aggregation::None) {
        if (k < rc.timestamps.size() && rc.timestamps[k] == lo && static_cast<Eigen::Index>(k) >= rc.warmup)
          out.values(i) = rc.values(static_cast<Eigen::Index>(k));
        continue;
      }
      double acc = agg == Aggregation::Max ? -HUGE_VAL : (agg == Aggregation::Min ? HUGE_VAL : 0.0);
      int count = 0;
      for (std::size_t j = k; j < rc.timestamps.size() && rc.timestamps[j] < hi; ++j) {
        if (static_cast<Eigen::Index>(j) < rc.warmup) continue;
        const double v = rc.values(static_cast<Eigen::Index>(j));
        if (agg == Aggregation::Mean) acc += v;
        if (agg == Aggregation::Max) acc = std::max(acc, v);
        if (agg == Aggregation::Min) acc = std::min(acc, v);
        ++count;
      }
      if (count > 0) out.values(i) = agg == Aggregation::Mean ? acc / count : acc;
    }
    return out;
  }

  const DailyAstroRecord& daily(const Date& d) {
    const std::int64_t key = days_since_epoch(d);
    auto it = astro_cache_.find(key);
    if (it == astro_cache_.end()) it = astro_cache_.emplace(key, daily_astro(catalog_.location, d)).first;
    return it->second;
  }

  double computed_value(AstroKind kind, const Timestamp& t, bool daily_data, const std::string& root) {
    const GeoLocation& loc = catalog_.location;
    switch (kind) {
      case AstroKind::Sza:
        return daily_data ? daily(t.local_date()).mean_daytime_sza : solar_position(loc, t).zenith;
      case AstroKind::SzaNoon: return daily(t.local_date()).noon_sza;
      case AstroKind::SzaInstant: return solar_position(loc, t).zenith;
      case AstroKind::CivilTwilight: return daily(t.local_date()).civil_twilight_duration;
      case AstroKind::Daylight: return daily(t.local_date()).daylight_duration;
      case AstroKind::ClearSkyGhi:
        return daily_data ? daily(t.local_date()).clear_sky_ghi_daily : clear_sky_ghi(loc, t);
      case AstroKind::ClearSkyGhiInstant: return clear_sky_ghi(loc, t);
      case AstroKind::MoonPhase: return daily_data ? daily(t.local_date()).moon_phase : moon_phase(t);
      case AstroKind::SunshineDuration: return sunshine(t, daily_data, root);
    }
    return kNaN;
  }

  double sunshine(const Timestamp& t, bool daily_data, const std::string& root) {
    if (!raw_.ghi_profile || raw_.ghi_profile->timestamps.empty())
      throw ParameterError("feature '" + root + "' unavailable: sunshine duration needs a sub-daily GHI profile");
    if (!daily_data) throw ParameterError("feature '" + root + "': sunshine duration is defined for daily data only");
    const auto& prof = *raw_.ghi_profile;
    const Timestamp lo = Timestamp::local_midnight(t.local_date(), t.utc_offset_seconds());
    const Timestamp hi = lo.shifted(86400);
    auto first = std::lower_bound(prof.timestamps.begin(), prof.timestamps.end(), lo);
    auto last = std::lower_bound(first, prof.timestamps.end(), hi);
    if (std::distance(first, last) < 2) return kNaN;
    const auto begin = static_cast<Eigen::Index>(first - prof.timestamps.begin());
    const auto count = static_cast<Eigen::Index>(last - first);
    const double step_min = static_cast<double>((first + 1)->unix_seconds() - first->unix_seconds()) / 60.0;
    std::vector<double> observed(static_cast<std::size_t>(count)), clear(static_cast<std::size_t>(count));
    for (Eigen::Index j = 0; j < count; ++j) {
      observed[static_cast<std::size_t>(j)] = prof.ghi(begin + j);
      clear[static_cast<std::size_t>(j)] = clear_sky_ghi(catalog_.location, prof.timestamps[static_cast<std::size_t>(begin + j)]);
    }
    return sunshine_duration(observed, clear, step_min).value_or(kNaN);
  }

  const FeatureCatalog& catalog_;
  const RawData& raw_;
  const LoadSeries& load_;
  std::int64_t step_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::unordered_set<std::string> active_;
  std::map<std::int64_t, DailyAstroRecord> astro_cache_;
};

FeatureSpec parse_entry(const json& e) {
  if (!e.is_object() || !e.contains("name")) throw ConfigError("catalog entry without a name");
  FeatureSpec spec;
  spec.name = e.at("name").get<std::string>();
  try {
    spec.aspect = parse_aspect(e.at("aspect").get<std::string>());
    spec.units = e.value("units", "");
    const std::string kind = e.at("source").get<std::string>();
    if (kind == "raw") {
      spec.source = RawSource{e.value("column", spec.name), parse_aggregation(e.value("aggregation", "none"))};
    } else if (kind == "computed") {
      spec.source = ComputedSource{parse_astro_kind(e.at("kind").get<std::string>())};
    } else if (kind == "lag") {
      spec.source = LagSource{e.at("base").get<std::string>(), e.at("steps").get<Eigen::Index>()};
    } else if (kind == "moving_average") {
      spec.source = MovingAverageSource{e.at("base").get<std::string>(), e.at("window").get<Eigen::Index>()};
    } else if (kind == "calendar") {
      spec.source = CalendarSource{parse_calendar_kind(e.at("kind").get<std::string>())};
    } else {
      throw ConfigError("unknown source '" + kind + "'");
    }
  } catch (const json::exception& ex) {
    throw ConfigError("catalog entry '" + spec.name + "': " + ex.what());
  } catch (const ParameterError& ex) {
    throw ConfigError("catalog entry '" + spec.name + "': " + ex.what());
  }
  return spec;
}

}  // namespace

std::string_view to_string(AstroKind k) noexcept {
  for (const auto& [kind, name] : kAstroNames)
    if (kind == k) return name;
  return "?";
}

AstroKind parse_astro_kind(std::string_view text) {
  for (const auto& [kind, name] : kAstroNames)
    if (name == text) return kind;
  throw ParameterError("unknown computed feature kind '" + std::string(text) + "'");
}

void FeatureCatalog::validate() const {
  try {
    location.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("catalog location: ") + e.what());
  }
  if (load_lags < 0) throw ConfigError("catalog load_lags must be non-negative");
  std::unordered_set<std::string> names;
  for (Eigen::Index k = 1; k <= load_lags; ++k) names.insert("load_lag_" + std::to_string(k));
  for (const auto& e : entries) {
    if (e.name.empty()) throw ConfigError("catalog entry with an empty name");
    if (!names.insert(e.name).second) throw ConfigError("duplicate catalog entry '" + e.name + "'");
    if (const auto* lag = std::get_if<LagSource>(&e.source); lag && lag->steps < 1)
      throw ConfigError("catalog entry '" + e.name + "': lag steps must be at least 1");
    if (const auto* ma = std::get_if<MovingAverageSource>(&e.source); ma && ma->window < 2)
      throw ConfigError("catalog entry '" + e.name + "': moving-average window must be at least 2");
  }
}

std::array<Eigen::Index, 4> FeatureCatalog::aspect_counts() const {
  std::array<Eigen::Index, 4> counts{};
  for (const auto& e : entries) ++counts[static_cast<std::size_t>(e.aspect)];
  counts[3] += load_lags;
  return counts;
}

FeatureCatalog parse_catalog(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("catalog is not valid JSON: ") + ex.what());
  }
  FeatureCatalog cat;
  try {
    const json& loc = doc.at("location");
    cat.location.latitude = loc.at("latitude").get<double>();
    cat.location.longitude = loc.at("longitude").get<double>();
    cat.location.elevation = loc.value("elevation", 0.0);
    cat.location.utc_offset_hours = loc.value("utc_offset", 0.0);
    cat.load_lags = doc.value("load_lags", Eigen::Index{7});
    for (const auto& h : doc.value("holidays", json::array())) cat.holidays.insert(parse_date(h.get<std::string>()));
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("catalog: ") + ex.what());
  } catch (const ParameterError& ex) {
    throw ConfigError(std::string("catalog: ") + ex.what());
  }
  for (const auto& e : doc.value("features", json::array())) cat.entries.push_back(parse_entry(e));
  cat.validate();
  return cat;
}

FeatureCatalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open catalog '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_catalog(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string catalog_to_json(const FeatureCatalog& catalog) {
  json doc;
  doc["location"] = {{"latitude", catalog.location.latitude},
                     {"longitude", catalog.location.longitude},
                     {"elevation", catalog.location.elevation},
                     {"utc_offset", catalog.location.utc_offset_hours}};
  doc["load_lags"] = catalog.load_lags;
  json features = json::array();
  for (const auto& e : catalog.entries) {
    json j{{"name", e.name}, {"aspect", std::string(to_string(e.aspect))}};
    if (!e.units.empty()) j["units"] = e.units;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, RawSource>) {
            j["source"] = "raw";
            j["column"] = s.column;
            if (s.aggregation != Aggregation::None) j["aggregation"] = std::string(to_string(s.aggregation));
          } else if constexpr (std::is_same_v<T, ComputedSource>) {
            j["source"] = "computed";
            j["kind"] = std::string(to_string(s.kind));
          } else if constexpr (std::is_same_v<T, LagSource>) {
            j["source"] = "lag";
            j["base"] = s.base;
            j["steps"] = s.steps;
          } else if constexpr (std::is_same_v<T, MovingAverageSource>) {
            j["source"] = "moving_average";
            j["base"] = s.base;
            j["window"] = s.window;
          } else {
            j["source"] = "calendar";
            j["kind"] = std::string(to_string(s.kind));
          }
        },
        e.source);
    features.push_back(std::move(j));
  }
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

const FeatureColumn* RawData::find(std::string_view name) const {
  for (const auto& c : columns)
    if (c.name == name) return &c;
  return nullptr;
}

FeatureMatrix build_candidate_matrix(const FeatureCatalog& catalog, const RawData& raw, const LoadSeries& load,
                                     const AlignOptions& options) {
  catalog.validate();
  Builder builder(catalog, raw, load);

  std::vector<const FeatureSpec*> ordered;
  for (const auto& e : catalog.entries) ordered.push_back(&e);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const FeatureSpec* a, const FeatureSpec* b) { return a->aspect < b->aspect; });

  std::vector<FeatureColumn> columns;
  columns.reserve(ordered.size() + static_cast<std::size_t>(catalog.load_lags));
  for (const FeatureSpec* spec : ordered) columns.push_back(builder.build(*spec));
  if (catalog.load_lags > 0) {
    auto lags = make_load_lags(load, catalog.load_lags);
    std::move(lags.begin(), lags.end(), std::back_inserter(columns));
  }
  return align_and_join(load, columns, options);
}

}  // namespace stlf
