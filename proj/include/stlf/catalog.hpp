#pragma once

// Declarative feature catalog and the builder that turns it, the ingested raw
// columns and the load series into the aligned candidate matrix.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stlf/astro.hpp"
#include "stlf/features.hpp"
#include "stlf/timeseries.hpp"

namespace stlf {

enum class Aggregation { None, Mean, Max, Min };

/// Astronomical quantities the builder can compute. `Sza` and `ClearSkyGhi`
/// are daily aggregates (mean daytime zenith, Wh/m² integral) on daily data and
/// instantaneous values on sub-daily data.
enum class AstroKind {
  Sza,
  SzaNoon,
  SzaInstant,
  CivilTwilight,
  Daylight,
  ClearSkyGhi,
  ClearSkyGhiInstant,
  MoonPhase,
  SunshineDuration,
};

std::string_view to_string(AstroKind k) noexcept;
AstroKind parse_astro_kind(std::string_view text);

struct RawSource {
  std::string column;
  Aggregation aggregation = Aggregation::None;
};
struct ComputedSource {
  AstroKind kind = AstroKind::Sza;
};
/// `base` names another catalog entry, a raw column, or "load".
struct LagSource {
  std::string base;
  Eigen::Index steps = 1;
};
struct MovingAverageSource {
  std::string base;
  Eigen::Index window = 2;
};
struct CalendarSource {
  CalendarKind kind = CalendarKind::Monday;
};

using FeatureSource = std::variant<RawSource, ComputedSource, LagSource, MovingAverageSource, CalendarSource>;

struct FeatureSpec {
  std::string name;
  FeatureAspect aspect = FeatureAspect::Geographical;
  std::string units;
  FeatureSource source;
};

struct FeatureCatalog {
  std::vector<FeatureSpec> entries;
  GeoLocation location;
  HolidayCalendar holidays;
  Eigen::Index load_lags = 7;

  /// Unique names, positive lag steps, windows >= 2, valid location.
  void validate() const;
  /// Entries per aspect in G, A, S, L order (load lags included under L).
  std::array<Eigen::Index, 4> aspect_counts() const;
};

/// Parses the JSON catalog format; throws ConfigError with the entry name.
FeatureCatalog parse_catalog(std::string_view json_text);
FeatureCatalog load_catalog(const std::filesystem::path& path);
std::string catalog_to_json(const FeatureCatalog& catalog);

/// Sub-daily observed GHI (W/m²), needed only for sunshine duration.
struct IrradianceProfile {
  std::vector<Timestamp> timestamps;
  Eigen::VectorXd ghi;
};

struct RawData {
  std::vector<FeatureColumn> columns;
  std::optional<IrradianceProfile> ghi_profile;

  const FeatureColumn* find(std::string_view name) const;
};

/// Builds one column per catalog entry plus the load lags, ordered
/// [G, A, S, L] (stable within an aspect), and joins them to `load`.
/// Lags and moving averages of computed or calendar features are evaluated at
/// the shifted instants, so they add no warm-up rows.
FeatureMatrix build_candidate_matrix(const FeatureCatalog& catalog, const RawData& raw, const LoadSeries& load,
                                     const AlignOptions& options = {});

}  // namespace stlf
