#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

#include "cvcs/bsm.hpp"
#include "cvcs/rng.hpp"
#include "cvcs/synth.hpp"

using namespace cvcs;
namespace fs = std::filesystem;

namespace {

const char* kHeader =
    "device_id,timestamp_s,lat,lon,speed_mph,heading_deg,yaw_rate_deg_s,confidence_pct\n";

std::string row(const std::string& dev, double t, double speed = 30.0, double yaw = 0.0,
                double conf = 90.0) {
  return dev + "," + std::to_string(t) + ",42.0,-83.7," + std::to_string(speed) + ",90.0," +
         std::to_string(yaw) + "," + std::to_string(conf) + "\n";
}

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream os(p);
  os << content;
  return p;
}

}  // namespace

TEST_SUITE("bsm") {

TEST_CASE("contiguous rows make one trip") {
  std::string text = kHeader;
  for (int i = 0; i < 100; ++i) text += row("a", i * 0.1);
  const auto result = ingest_bsm(write_temp("bsm_one_trip.csv", text).string());
  REQUIRE(result.trips.size() == 1);
  CHECK(result.trips[0].records.size() == 100);
  CHECK(result.rows_total == 100);
  CHECK(result.rows_rejected == 0);
}

TEST_CASE("a gap beyond twice the sample period splits the trip") {
  std::string text = kHeader;
  for (int i = 0; i < 50; ++i) text += row("a", i * 0.1);
  for (int i = 0; i < 30; ++i) text += row("a", 5.0 + 4.9 + i * 0.1);  // 5 s gap
  const auto result = ingest_bsm(write_temp("bsm_gap.csv", text).string());
  REQUIRE(result.trips.size() == 2);
  CHECK(result.trips[0].records.size() == 50);
  CHECK(result.trips[1].records.size() == 30);
  CHECK(result.trips[1].trip_index == 1);
}

TEST_CASE("a gap of exactly twice the period does not split") {
  std::string text = kHeader;
  text += row("a", 0.0) + row("a", 0.2) + row("a", 0.3);
  const auto result = ingest_bsm(write_temp("bsm_edge_gap.csv", text).string());
  REQUIRE(result.trips.size() == 1);
  CHECK(result.trips[0].records.size() == 3);
}

TEST_CASE("invariant-violating rows are rejected and counted") {
  std::string text = kHeader;
  text += row("a", 0.0);
  text += row("a", 0.05, -3.0);              // negative speed
  text += row("a", 0.0);                     // non-monotone timestamp
  text += row("a", 0.05, 30.0, 400.0);       // yaw rate out of range
  text += row("a", 0.05, 30.0, 0.0, 150.0);  // confidence out of range
  text += row("a", 0.1);
  const auto result = ingest_bsm(write_temp("bsm_reject.csv", text).string());
  CHECK(result.rows_total == 6);
  CHECK(result.rows_rejected == 4);
  REQUIRE(result.trips.size() == 1);
  CHECK(result.trips[0].records.size() == 2);
}

TEST_CASE("devices are independent streams") {
  std::string text = kHeader;
  for (int i = 0; i < 10; ++i) text += row("a", i * 0.1) + row("b", i * 0.1);
  const auto result = ingest_bsm(write_temp("bsm_two_dev.csv", text).string());
  CHECK(result.trips.size() == 2);
}

TEST_CASE("structural problems throw with a line number") {
  auto expect_throw = [](const std::string& name, const std::string& text,
                         const std::string& needle) {
    try {
      ingest_bsm(write_temp(name, text).string());
      FAIL("expected ingest error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_throw("bsm_bad_header.csv", "dev,id\n", "bad header");
  expect_throw("bsm_bad_cols.csv", std::string(kHeader) + "a,0.0,1,2,3\n", "line 2");
  expect_throw("bsm_bad_num.csv", std::string(kHeader) + "a,zero,1,2,3,4,5,6\n", "line 2");
  CHECK_THROWS_AS(ingest_bsm("/nonexistent/bsm.csv"), std::runtime_error);
}

TEST_CASE("the synthetic generator writes ingestible files") {
  Rng rng(50);
  SynthProfileConfig cfg;
  const fs::path p = fs::temp_directory_path() / "bsm_synth.csv";
  write_synth_bsm_csv(p.string(), 3, 500, 800, cfg, rng);
  const auto result = ingest_bsm(p.string());
  CHECK(result.trips.size() == 3);
  CHECK(result.rows_rejected == 0);
  for (const auto& trip : result.trips) {
    CHECK(trip.records.size() >= 500);
    CHECK(trip.records.size() <= 800);
  }
}

}  // TEST_SUITE
