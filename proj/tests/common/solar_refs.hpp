#pragma once

// Reference values for solar geometry, computed once with independent
// implementations and frozen here:
//   zenith   - NREL SPA (pvlib spa_python), geometric zenith, no refraction
//   twilight - PyEphem, sun centre through -6 degrees, pressure 0
// Neither tool is needed to build or run the tests.

namespace stlf::test {

struct ZenithRef {
  double latitude;
  double longitude;
  const char* utc;
  double zenith_deg;
};

inline constexpr ZenithRef kZenithRefs[] = {
    {43.66, -70.26, "2015-06-21T17:00:00Z", 20.5334},
    {43.66, -70.26, "2015-12-21T17:00:00Z", 67.2679},
    {43.66, -70.26, "2015-03-20T14:00:00Z", 57.6789},
    {43.66, -70.26, "2003-09-23T20:30:00Z", 68.3424},
    {0.0, 0.0, "2015-03-20T12:07:00Z", 0.2224},
    {0.0, 0.0, "2021-09-22T06:30:00Z", 80.6793},
    {-33.87, 151.21, "2009-12-15T02:00:00Z", 10.8216},
    {-33.87, 151.21, "2009-07-01T01:00:00Z", 58.6831},
    {30.27, -97.74, "2017-08-01T18:00:00Z", 15.0586},
    {30.27, -97.74, "1998-01-15T16:00:00Z", 64.2047},
    {51.48, 0.0, "1980-06-01T12:00:00Z", 29.3734},
    {64.84, -147.72, "2010-06-21T21:00:00Z", 42.2868},
    {-54.8, -68.3, "2025-01-10T15:00:00Z", 37.9827},
    {35.68, 139.69, "2020-04-10T03:00:00Z", 27.8833},
    {19.43, -99.13, "1965-11-05T18:00:00Z", 35.5578},
    {60.17, 24.94, "2049-03-01T10:00:00Z", 67.8217},
    {-1.29, 36.82, "1999-12-31T09:00:00Z", 23.4632},
    {40.71, -74.01, "2012-10-29T15:00:00Z", 59.1304},
    {89.0, 0.0, "2015-06-21T00:00:00Z", 67.5693},
    {-23.5, -46.6, "1955-02-14T14:00:00Z", 21.7255},
};

struct TwilightRef {
  double latitude;
  double longitude;
  double utc_offset_hours;
  const char* date;
  double minutes;
};

inline constexpr TwilightRef kTwilightRefs[] = {
    {43.66, -70.26, -5, "2015-06-21", 998.74},
    {43.66, -70.26, -5, "2015-12-21", 601.45},
    {43.66, -70.26, -5, "2015-03-20", 785.52},
    {0.0, 0.0, 0, "2015-03-20", 767.82},
    {-33.87, 151.21, 10, "2009-12-15", 921.80},
    {30.27, -97.74, -6, "2017-08-01", 866.70},
    {51.48, 0.0, 0, "1980-06-01", 1070.09},
    {60.17, 24.94, 2, "2049-03-01", 714.08},
    {35.68, 139.69, 9, "2020-10-10", 740.17},
    {-1.29, 36.82, 3, "1999-12-31", 776.89},
};

}  // namespace stlf::test
