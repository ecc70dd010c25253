// Serial-vs-parallel block recovery comparison. The parallel path must be
// bit-identical to the serial reference; this tool checks that and reports
// the wall-time ratio on a synthetic corpus.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cvcs/pattern.hpp"
#include "cvcs/rng.hpp"
#include "cvcs/solver.hpp"
#include "cvcs/synth.hpp"

using namespace cvcs;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int n_blocks = 64;
  int block_len = 200;
  double ratio = 0.2;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (!std::strcmp(argv[i], "--blocks")) n_blocks = std::atoi(argv[i + 1]);
    else if (!std::strcmp(argv[i], "--block-len")) block_len = std::atoi(argv[i + 1]);
    else if (!std::strcmp(argv[i], "--ratio")) ratio = std::atof(argv[i + 1]);
    else {
      std::fprintf(stderr, "usage: bench_parallel [--blocks N] [--block-len N] [--ratio R]\n");
      return 2;
    }
  }

  Rng rng(42);
  SynthProfileConfig profile;
  const auto samples =
      synth_speed_profile(static_cast<std::size_t>(n_blocks) * block_len, profile, rng);
  const auto blocks = capture_stream(samples, block_len, ratio, SampleMode::ExactM, rng);

  SolverConfig cfg;
  const auto t_serial0 = std::chrono::steady_clock::now();
  const auto serial = recover_stream_serial(blocks, cfg);
  const double t_serial = seconds_since(t_serial0);

  const auto t_par0 = std::chrono::steady_clock::now();
  const auto parallel = recover_stream(blocks, cfg);
  const double t_par = seconds_since(t_par0);

  bool identical = serial.values.size() == parallel.values.size();
  for (std::size_t i = 0; identical && i < serial.values.size(); ++i) {
    const bool both_nan = std::isnan(serial.values[i]) && std::isnan(parallel.values[i]);
    identical = both_nan || serial.values[i] == parallel.values[i];
  }

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("blocks=%d block_len=%d ratio=%.3f threads=%d\n", n_blocks, block_len, ratio,
              threads);
  std::printf("serial:   %.3f s\n", t_serial);
  std::printf("parallel: %.3f s  (speedup %.2fx)\n", t_par,
              t_par > 0.0 ? t_serial / t_par : 0.0);
  std::printf("outputs bit-identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
