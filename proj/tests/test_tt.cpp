#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "cvcs/rng.hpp"
#include "cvcs/tt_estimation.hpp"

using namespace cvcs;

namespace {

TravelTimeTable uniform_table(const std::string& source, int n_seg, int n_int, double tt) {
  TravelTimeTable t;
  t.source = source;
  t.n_segments = n_seg;
  t.n_intervals = n_int;
  t.cells.assign(static_cast<std::size_t>(n_seg) * n_int, TtCell{tt, 1});
  return t;
}

}  // namespace

TEST_SUITE("travel_time") {

TEST_CASE("harmonic space mean speed of {10, 30} is 15") {
  const std::vector<double> speeds{10.0, 30.0};
  CHECK(space_mean_speed_harmonic(speeds) == doctest::Approx(15.0).epsilon(1e-14));
}

TEST_CASE("harmonic mean clamps crawl speeds at the floor") {
  const std::vector<double> speeds{0.2, 40.0};
  // 0.2 mph clamps to 1 mph: 2 / (1/1 + 1/40) = 80/41.
  CHECK(space_mean_speed_harmonic(speeds) == doctest::Approx(80.0 / 41.0).epsilon(1e-14));
  CHECK_THROWS_AS(space_mean_speed_harmonic(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("harmonic mean never exceeds the arithmetic mean") {
  Rng rng(70);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> speeds;
    double sum = 0.0;
    for (int i = 0; i < 10; ++i) {
      speeds.push_back(2.0 + 60.0 * rng.uniform());
      sum += speeds.back();
    }
    CHECK(space_mean_speed_harmonic(speeds) <= sum / speeds.size() + 1e-12);
  }
}

TEST_CASE("probe speed averages over nonempty steps only") {
  const std::vector<std::optional<double>> means{20.0, std::nullopt, 40.0};
  auto v = space_mean_speed_probe(means);
  REQUIRE(v.has_value());
  CHECK(*v == doctest::Approx(30.0).epsilon(1e-14));

  // Strict mode keeps empty steps in the denominator.
  auto strict = space_mean_speed_probe(means, true);
  REQUIRE(strict.has_value());
  CHECK(*strict == doctest::Approx(20.0).epsilon(1e-14));

  const std::vector<std::optional<double>> empty{std::nullopt, std::nullopt};
  CHECK_FALSE(space_mean_speed_probe(empty).has_value());
}

TEST_CASE("single deviating cell yields MAPE 0.1/81 over the scored window") {
  // 10 segments x 12 intervals, scored over segments 2-10 x intervals
  // 4-12 = 81 cells. One cell off by 10%.
  auto gr = uniform_table("GR", 10, 12, 100.0);
  auto est = uniform_table("CV", 10, 12, 100.0);
  est.cell(5, 8) = TtCell{110.0, 1};
  const auto m = mape(est, gr);
  CHECK(m.defined);
  CHECK(m.cells_used == 81);
  CHECK(m.cells_missing == 0);
  CHECK(m.mape == doctest::Approx(0.1 / 81.0).epsilon(1e-12));
}

TEST_CASE("absent estimate cells are excluded and counted") {
  auto gr = uniform_table("GR", 10, 12, 100.0);
  auto est = uniform_table("CV", 10, 12, 100.0);
  est.cell(2, 4) = std::nullopt;
  est.cell(10, 12) = std::nullopt;
  const auto m = mape(est, gr);
  CHECK(m.cells_used == 79);
  CHECK(m.cells_missing == 2);
  CHECK(m.mape == doctest::Approx(0.0));
}

TEST_CASE("missing ground truth inside the window is an error") {
  auto gr = uniform_table("GR", 10, 12, 100.0);
  auto est = uniform_table("CV", 10, 12, 100.0);
  gr.cell(5, 5) = std::nullopt;
  CHECK_THROWS_AS(mape(est, gr), std::runtime_error);
  // Outside the scored window it is fine.
  gr.cell(5, 5) = TtCell{100.0, 1};
  gr.cell(1, 1) = std::nullopt;
  CHECK_NOTHROW(mape(est, gr));
}

TEST_CASE("probe table: constant 30 mph means 60 s per half-mile cell") {
  Scenario sc = build_scenario(Scenario{});
  SpeedGrid grid(sc.n_segments, sc.n_steps(), sc.dt_s);
  for (int step = 1; step <= sc.n_steps(); ++step) grid.add(3, step, 30.0);
  const auto table = build_table_probe("GR", grid, sc);
  for (int j = 1; j <= 12; ++j) {
    REQUIRE(table.cell(3, j).has_value());
    CHECK(table.cell(3, j)->tt_s == doctest::Approx(60.0).epsilon(1e-12));
  }
  CHECK_FALSE(table.cell(4, 1).has_value());  // nothing observed there
}

TEST_CASE("detector table groups by crossing interval and uses the harmonic mean") {
  Scenario sc = build_scenario(Scenario{});
  std::vector<DetectorRecord> recs;
  recs.push_back({2, 100.0, 1, 10.0});
  recs.push_back({2, 200.0, 2, 30.0});  // same interval 1 -> harmonic mean 15
  recs.push_back({2, 301.0, 3, 60.0});  // interval 2
  const auto table = build_table_lp(recs, sc);
  REQUIRE(table.cell(2, 1).has_value());
  CHECK(table.cell(2, 1)->tt_s == doctest::Approx(0.5 / 15.0 * 3600.0).epsilon(1e-12));
  CHECK(table.cell(2, 1)->support == 2);
  REQUIRE(table.cell(2, 2).has_value());
  CHECK(table.cell(2, 2)->tt_s == doctest::Approx(0.5 / 60.0 * 3600.0).epsilon(1e-12));
  CHECK_FALSE(table.cell(3, 1).has_value());
}

TEST_CASE("table CSV leaves absent cells empty") {
  auto t = uniform_table("CV", 2, 2, 60.0);
  t.cell(2, 2) = std::nullopt;
  std::ostringstream os;
  write_table_csv(os, t);
  const std::string text = os.str();
  CHECK(text.rfind("source,segment,interval,tt_s,support\n", 0) == 0);
  CHECK(text.find("CV,1,1,60,1\n") != std::string::npos);
  CHECK(text.find("CV,2,2,,\n") != std::string::npos);
}

}  // TEST_SUITE
