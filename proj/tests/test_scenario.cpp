#include "doctest.h"

#include "cvcs/scenario.hpp"

using namespace cvcs;

TEST_SUITE("scenario") {

TEST_CASE("defaults validate") {
  const Scenario s = build_scenario(Scenario{});
  CHECK(s.n_intervals() == 12);
  CHECK(s.n_steps() == 36000);
  CHECK(s.corridor_len_mi() == doctest::Approx(5.0));
  CHECK(s.steps_per_tick() == 1);
}

TEST_CASE("interval lookup uses half-open-from-below boundaries") {
  const Scenario s = build_scenario(Scenario{});
  CHECK(s.interval_of_time(0.05) == 1);
  CHECK(s.interval_of_time(300.0) == 1);
  CHECK(s.interval_of_time(300.1) == 2);
  CHECK(s.interval_of_time(3600.0) == 12);
  CHECK(s.interval_of_time(1e9) == 12);  // clamped
}

TEST_CASE("varying arrivals change every three intervals") {
  Scenario s;
  s.arrival_pattern = ArrivalPattern::Varying;
  CHECK(s.rate_for_interval(1) == 1200.0);
  CHECK(s.rate_for_interval(3) == 1200.0);
  CHECK(s.rate_for_interval(4) == 2400.0);
  CHECK(s.rate_for_interval(7) == 4800.0);
  CHECK(s.rate_for_interval(10) == 1200.0);
  CHECK(s.rate_for_interval(12) == 1200.0);
}

TEST_CASE("one-hertz capture at a 0.1 s step is ten steps per tick") {
  Scenario s;
  s.capture_rate_hz = 1;
  CHECK(build_scenario(s).steps_per_tick() == 10);
}

TEST_CASE("validation names the offending field") {
  auto field_of = [](Scenario s) -> std::string {
    try {
      build_scenario(s);
      return "";
    } catch (const ConfigError& e) {
      return e.field;
    }
  };
  Scenario s;
  s.mpr = 1.5;
  CHECK(field_of(s) == "mpr");
  s = Scenario{};
  s.capture_rate_hz = 5;
  CHECK(field_of(s) == "capture_rate_hz");
  s = Scenario{};
  s.compression_ratio = 0.0;
  CHECK(field_of(s) == "compression_ratio");
  s = Scenario{};
  s.obu_capacity = 0;
  CHECK(field_of(s) == "obu_capacity");
  s = Scenario{};
  s.interval_s = 100.0;
  CHECK(field_of(s) == "interval_s");
}

TEST_CASE("config text round trip") {
  const Scenario s = parse_scenario_text(
      "# comment\n"
      "[scenario]\n"
      "seed = 42\n"
      "mpr = 0.8\n"
      "obu_capacity = 100\n"
      "capture_rate_hz = 1\n"
      "compression_ratio = 0.5\n"
      "arrival_pattern = varying\n"
      "lane_closure = off\n");
  CHECK(s.seed == 42);
  CHECK(s.mpr == 0.8);
  CHECK(s.obu_capacity == 100);
  CHECK(s.capture_rate_hz == 1);
  CHECK(s.compression_ratio == 0.5);
  CHECK(s.arrival_pattern == ArrivalPattern::Varying);
  CHECK_FALSE(s.closure.enabled);
}

TEST_CASE("unknown keys and malformed lines are rejected") {
  CHECK_THROWS_AS(parse_scenario_text("obu_cap = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario_text("mpr = fast\n"), ConfigError);
}

}  // TEST_SUITE
