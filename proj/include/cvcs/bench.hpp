#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cvcs/solver.hpp"

namespace cvcs {

struct BenchPoint {
  int block_len = 0;
  double ratio = 0.0;
  double rmse = 0.0;           // Eq-10 style, over the concatenated corpus
  double mean_ms_per_block = 0.0;
  long blocks = 0;
  long degraded = 0;
};

// Compression-ratio / block-size sweep over a trip corpus (exact-M
// sampling, reproducing the fixed M/N grid).
std::vector<BenchPoint> bench_recovery(const std::vector<std::vector<double>>& streams,
                                       std::span<const int> block_lens,
                                       std::span<const double> ratios, const SolverConfig& cfg,
                                       std::uint64_t seed);

// CSV: n,ratio,rmse,blocks,degraded. Wall time goes to a separate file so
// every deterministic output stays byte-identical across runs.
void write_bench_csv(std::ostream& os, std::span<const BenchPoint> points);
// CSV: n,ratio,mean_ms_per_block (measured, not reproducible).
void write_bench_timing_csv(std::ostream& os, std::span<const BenchPoint> points);

}  // namespace cvcs
