#include <algorithm>

#include "doctest.h"

#include "cvcs/pattern.hpp"
#include "cvcs/rng.hpp"
#include "cvcs/synth.hpp"

using namespace cvcs;

TEST_SUITE("pattern") {

TEST_CASE("exact-M keeps round(ratio * n) sorted unique indices") {
  Rng rng(1);
  const auto p = make_pattern(200, 0.2, SampleMode::ExactM, rng);
  CHECK(p.kept() == 40);
  CHECK(std::is_sorted(p.indices.begin(), p.indices.end()));
  CHECK(std::adjacent_find(p.indices.begin(), p.indices.end()) == p.indices.end());
  CHECK(p.indices.front() >= 0);
  CHECK(p.indices.back() < 200);
}

TEST_CASE("exact-M at ratio 1 keeps everything") {
  Rng rng(2);
  const auto p = make_pattern(50, 1.0, SampleMode::ExactM, rng);
  CHECK(p.full());
  CHECK(p.kept() == 50);
}

TEST_CASE("exact-M rejects a zero keep count") {
  Rng rng(3);
  CHECK_THROWS_AS(make_pattern(4, 0.01, SampleMode::ExactM, rng), std::invalid_argument);
}

TEST_CASE("bernoulli keep count is ratio * n on average") {
  Rng rng(4);
  long total = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    total += make_pattern(200, 0.2, SampleMode::Bernoulli, rng).kept();
  }
  const double mean = static_cast<double>(total) / trials;
  CHECK(mean > 38.0);
  CHECK(mean < 42.0);
}

TEST_CASE("bernoulli patterns may be empty") {
  Rng rng(5);
  bool saw_empty = false;
  for (int t = 0; t < 2000 && !saw_empty; ++t) {
    saw_empty = make_pattern(4, 0.01, SampleMode::Bernoulli, rng).empty();
  }
  CHECK(saw_empty);
}

TEST_CASE("stream capture: 4967 samples at ratio 0.2 keep exactly 993") {
  Rng data_rng(6);
  SynthProfileConfig cfg;
  const auto samples = synth_speed_profile(4967, cfg, data_rng);

  Rng rng(7);
  const auto blocks = capture_stream(samples, 200, 0.2, SampleMode::ExactM, rng);
  REQUIRE(blocks.size() == 25);  // 24 full blocks + 167-sample tail
  long kept = 0;
  for (const auto& b : blocks) kept += b.pattern.kept();
  CHECK(kept == 993);
  CHECK(blocks.back().pattern.block_len == 167);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    CHECK(blocks[i].block_seq == static_cast<long>(i));
    CHECK(blocks[i].values.size() == blocks[i].pattern.kept());
  }
}

TEST_CASE("captured values are the samples at the kept indices") {
  std::vector<double> samples(100);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = 1000.0 + i;
  Rng rng(8);
  const auto blocks = capture_stream(samples, 40, 0.5, SampleMode::ExactM, rng);
  for (const auto& b : blocks) {
    for (int k = 0; k < b.pattern.kept(); ++k) {
      const long global = b.block_seq * 40 + b.pattern.indices[k];
      CHECK(b.values[k] == samples[static_cast<std::size_t>(global)]);
    }
  }
}

TEST_CASE("identical seeds give identical patterns") {
  Rng a(9), b(9);
  const auto pa = make_pattern(200, 0.3, SampleMode::ExactM, a);
  const auto pb = make_pattern(200, 0.3, SampleMode::ExactM, b);
  CHECK(pa.indices == pb.indices);
}

}  // TEST_SUITE

TEST_SUITE("synth") {

TEST_CASE("profiles are nonnegative and deterministic") {
  SynthProfileConfig cfg;
  Rng a(20), b(20);
  const auto x = synth_speed_profile(3000, cfg, a);
  const auto y = synth_speed_profile(3000, cfg, b);
  CHECK(x == y);
  CHECK(*std::min_element(x.begin(), x.end()) >= 0.0);
  CHECK(*std::max_element(x.begin(), x.end()) <= cfg.max_cruise_mph + cfg.noise_terms * cfg.noise_amp_mph);
}

TEST_CASE("corpus lengths stay inside the requested range") {
  SynthProfileConfig cfg;
  Rng rng(21);
  const auto corpus = synth_corpus(20, 1000, 2000, cfg, rng);
  REQUIRE(corpus.size() == 20);
  for (const auto& trip : corpus) {
    CHECK(trip.size() >= 1000);
    CHECK(trip.size() <= 2000);
  }
}

}  // TEST_SUITE
