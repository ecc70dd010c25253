#include <cmath>
#include <sstream>

#include "doctest.h"

#include "cvcs/block_io.hpp"
#include "cvcs/pattern.hpp"
#include "cvcs/rng.hpp"
#include "cvcs/synth.hpp"

using namespace cvcs;

TEST_SUITE("block_io") {

TEST_CASE("round trip preserves the stream to print precision") {
  Rng rng(40);
  SynthProfileConfig profile;
  const auto samples = synth_speed_profile(1234, profile, rng);

  BlockStream original;
  original.header = {100, 0.3, "exact", 99};
  original.blocks = capture_stream(samples, 100, 0.3, SampleMode::ExactM, rng);

  std::stringstream buf;
  write_block_stream(buf, original);
  const BlockStream back = read_block_stream(buf);

  CHECK(back.header.block_len == original.header.block_len);
  CHECK(back.header.ratio == original.header.ratio);
  CHECK(back.header.mode == original.header.mode);
  CHECK(back.header.seed == original.header.seed);
  REQUIRE(back.blocks.size() == original.blocks.size());
  for (std::size_t i = 0; i < back.blocks.size(); ++i) {
    const auto& a = original.blocks[i];
    const auto& b = back.blocks[i];
    CHECK(a.block_seq == b.block_seq);
    CHECK(a.pattern.block_len == b.pattern.block_len);
    REQUIRE(a.pattern.indices == b.pattern.indices);
    for (int k = 0; k < a.pattern.kept(); ++k) {
      // 9 significant digits survive the text round trip.
      CHECK(b.values[k] == doctest::Approx(a.values[k]).epsilon(1e-8));
    }
  }
}

TEST_CASE("second write of a parsed stream is byte-identical") {
  Rng rng(41);
  SynthProfileConfig profile;
  const auto samples = synth_speed_profile(500, profile, rng);
  BlockStream s;
  s.header = {50, 0.5, "bernoulli", 7};
  s.blocks = capture_stream(samples, 50, 0.5, SampleMode::Bernoulli, rng);

  std::stringstream first;
  write_block_stream(first, s);
  std::stringstream reparse(first.str());
  const BlockStream back = read_block_stream(reparse);
  std::stringstream second;
  write_block_stream(second, back);
  CHECK(first.str() == second.str());
}

TEST_CASE("empty-pattern blocks survive the round trip") {
  BlockStream s;
  s.header = {10, 0.1, "bernoulli", 1};
  SampledBlock b;
  b.pattern.block_len = 10;
  b.block_seq = 0;
  s.blocks.push_back(b);

  std::stringstream buf;
  write_block_stream(buf, s);
  const BlockStream back = read_block_stream(buf);
  REQUIRE(back.blocks.size() == 1);
  CHECK(back.blocks[0].pattern.empty());
  CHECK(back.blocks[0].pattern.block_len == 10);
}

TEST_CASE("parse errors carry the line number") {
  auto expect_error_with = [](const std::string& text, const std::string& needle) {
    std::stringstream is(text);
    try {
      read_block_stream(is);
      FAIL("expected a parse error for: " << text);
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
      CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
  };
  expect_error_with("garbage header\n", "bad header");
  expect_error_with("N=10 ratio=0.2 mode=exact seed=1\nnot-a-block\n", "line 2");
  expect_error_with("N=10 ratio=0.2 mode=exact seed=1\n0,10,5:1.0,3:2.0\n", "increasing");
  expect_error_with("N=10 ratio=0.2 mode=exact seed=1\n0,10,12:1.0\n", "out of range");
  expect_error_with("N=10 ratio=0.2 mode=zigzag seed=1\n", "mode");
}

TEST_CASE("value formatting is fixed precision and locale independent") {
  CHECK(format_value(0.5) == "0.5");
  CHECK(format_value(1234567.25) == "1234567.25");
  CHECK(format_value(1.0 / 3.0) == "0.333333333");
  CHECK(format_value(-0.0001) == "-0.0001");
  CHECK(format_value(0.0) == "0");
}

}  // TEST_SUITE
