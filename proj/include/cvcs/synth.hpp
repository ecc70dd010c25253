#pragma once

#include <cstddef>
#include <vector>

#include "cvcs/rng.hpp"

namespace cvcs {

// Trip-like speed profile: piecewise accel/cruise/decel waypoints with
// band-limited noise on top, clamped at zero. Used by the codec
// benchmarks and tests in place of non-redistributable field data.
struct SynthProfileConfig {
  double rate_hz = 10.0;
  double min_cruise_mph = 25.0;
  double max_cruise_mph = 70.0;
  double cruise_hold_min_s = 60.0;
  double cruise_hold_max_s = 180.0;
  double ramp_mph_per_s = 2.0;
  int noise_terms = 8;
  double noise_amp_mph = 1.0;
  double noise_min_period_s = 30.0;
};

std::vector<double> synth_speed_profile(std::size_t n_samples, const SynthProfileConfig& cfg,
                                        Rng& rng);

// A corpus of independent trips with lengths uniform in [min, max] samples.
std::vector<std::vector<double>> synth_corpus(int n_trips, std::size_t min_samples,
                                              std::size_t max_samples,
                                              const SynthProfileConfig& cfg, Rng& rng);

// BSM-schema CSV for the synthetic corpus (positions integrated from the
// speed trace along a fixed heading).
void write_synth_bsm_csv(const std::string& path, int n_trips, std::size_t min_samples,
                         std::size_t max_samples, const SynthProfileConfig& cfg, Rng& rng);

}  // namespace cvcs
