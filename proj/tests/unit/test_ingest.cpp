#include <doctest.h>

#include <fstream>
#include <sstream>

#include "stlf/error.hpp"
#include "stlf/ingest.hpp"
#include "stlf/synth.hpp"
#include "support.hpp"

using namespace stlf;
using stlf::test::TempDir;

namespace {
void write_text(const std::filesystem::path& p, const std::string& s) { std::ofstream(p) << s; }
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("round trip is byte identical") {
  TempDir dir("ingest_rt");
  SynthConfig cfg;
  cfg.n_days = 400;
  const auto d = generate(cfg, default_synth_location());
  write_load_csv(dir / "load.csv", d.load);
  write_weather_csv(dir / "weather.csv", d.weather);
  const LoadSeries load = read_load_csv(dir / "load.csv", Frequency::DailyPeak);
  CHECK(load.values() == d.load.values());
  const WeatherData wx = read_weather_csv(dir / "weather.csv");
  write_load_csv(dir / "load2.csv", load);
  write_weather_csv(dir / "weather2.csv", wx.columns);
  CHECK(slurp(dir / "load.csv") == slurp(dir / "load2.csv"));
  CHECK(slurp(dir / "weather.csv") == slurp(dir / "weather2.csv"));
}

TEST_CASE("load errors carry path and line") {
  TempDir dir("ingest_err");
  const auto p = dir / "load.csv";
  write_text(p, "timestamp,load_mw\n2015-01-01T00:00:00-05:00,100\n2015-01-02T00:00:00-05:00,abc\n");
  CHECK_THROWS_WITH_AS(read_load_csv(p, Frequency::DailyPeak), doctest::Contains("load.csv:3:"), IngestError);
  write_text(p, "timestamp,load_mw\n2015-01-01T00:00:00-05:00,100\n2015-01-01T00:00:00-05:00,101\n");
  CHECK_THROWS_WITH_AS(read_load_csv(p, Frequency::DailyPeak), doctest::Contains("duplicate"), IngestError);
  write_text(p, "timestamp,load_mw\n2015-01-01T00:00:00-05:00,100\n2015-01-04T00:00:00-05:00,101\n");
  CHECK_THROWS_WITH_AS(read_load_csv(p, Frequency::DailyPeak), doctest::Contains("2015-01-03"), IngestError);
  write_text(p, "timestamp,power\n2015-01-01T00:00:00-05:00,100\n");
  CHECK_THROWS_WITH_AS(read_load_csv(p, Frequency::DailyPeak), doctest::Contains("load_mw"), IngestError);
  write_text(p, "timestamp,load_mw\n2015-01-01T00:00:00-05:00,-3\n");
  CHECK_THROWS_AS(read_load_csv(p, Frequency::DailyPeak), IngestError);
  CHECK_THROWS_AS(read_load_csv(dir / "absent.csv", Frequency::DailyPeak), IngestError);
}

TEST_CASE("weather gaps are interpolated up to the limit") {
  TempDir dir("ingest_gap");
  const auto p = dir / "w.csv";
  write_text(p,
             "timestamp,temp_max_f\n2015-01-01T00:00:00-05:00,10\n2015-01-02T00:00:00-05:00,\n"
             "2015-01-03T00:00:00-05:00,NA\n2015-01-04T00:00:00-05:00,40\n");
  const WeatherData w = read_weather_csv(p);
  REQUIRE(w.columns.size() == 1);
  CHECK(w.columns[0].units == "f");
  CHECK(w.columns[0].values(1) == doctest::Approx(20.0));
  CHECK(w.columns[0].values(2) == doctest::Approx(30.0));
  REQUIRE(w.notes.size() == 1);
  CHECK(w.notes[0].find("w.csv:3:") != std::string::npos);
  WeatherReadOptions strict;
  strict.max_gap = 1;
  CHECK_THROWS_WITH_AS(read_weather_csv(p, strict), doctest::Contains("w.csv:3:"), IngestError);
  strict.max_gap = 3;
  strict.expected = {"dewpoint_f"};
  CHECK_THROWS_WITH_AS(read_weather_csv(p, strict), doctest::Contains("dewpoint_f"), IngestError);
}

TEST_CASE("holiday files") {
  TempDir dir("ingest_hol");
  const auto p = dir / "h.csv";
  write_text(p, "date,name\n");
  CHECK(read_holiday_csv(p).empty());
  write_text(p, "date,name\n2015-12-25,Christmas\n2015-07-04,\"Independence Day, observed\"\n");
  const auto e = read_holiday_entries(p);
  REQUIRE(e.size() == 2);
  CHECK(e[0].name == "Independence Day, observed");
  std::ostringstream out;
  write_holiday_csv(out, e);
  CHECK(out.str() == "date,name\n2015-07-04,\"Independence Day, observed\"\n2015-12-25,Christmas\n");
  write_text(p, "date,name\n2015-13-01,Bad\n");
  CHECK_THROWS_WITH_AS(read_holiday_csv(p), doctest::Contains("h.csv:2:"), IngestError);
}

TEST_CASE("csv tokenizer") {
  const RawTable t = parse_csv_table("a,b\n\"x\"\"y\",2\n", "mem");
  CHECK(t.rows[0][0] == "x\"y");
  CHECK_THROWS_AS(parse_csv_table("a,b\n\"open,2\n", "mem"), IngestError);
  CHECK_THROWS_AS(parse_csv_table("a,a\n1,2\n", "mem"), IngestError);
  CHECK_THROWS_AS(parse_csv_table("", "mem"), IngestError);
  CHECK(units_from_name("ghi_whm2") == "whm2");
}
