#include "cvcs/bench.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cvcs/block_io.hpp"
#include "cvcs/metrics.hpp"
#include "cvcs/pattern.hpp"
#include "cvcs/rng.hpp"

namespace cvcs {

std::vector<BenchPoint> bench_recovery(const std::vector<std::vector<double>>& streams,
                                       std::span<const int> block_lens,
                                       std::span<const double> ratios, const SolverConfig& cfg,
                                       std::uint64_t seed) {
  if (streams.empty()) throw std::invalid_argument("bench_recovery: no streams");

  std::vector<BenchPoint> out;
  const Rng master(seed);
  int combo = 0;
  for (int n : block_lens) {
    for (double ratio : ratios) {
      BenchPoint p;
      p.block_len = n;
      p.ratio = ratio;

      double err2 = 0.0, ref2 = 0.0, total_ms = 0.0;
      for (std::size_t si = 0; si < streams.size(); ++si) {
        const auto& x = streams[si];
        Rng rng = master.split((static_cast<std::uint64_t>(combo) << 32) | si);
        const auto blocks = capture_stream(x, n, ratio, SampleMode::ExactM, rng);
        const auto rec = recover_stream(blocks, cfg);
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double d = x[i] - rec.values[i];
          err2 += d * d;
          ref2 += x[i] * x[i];
        }
        for (const auto& bs : rec.blocks) {
          total_ms += bs.wall_ms;
          ++p.blocks;
          if (bs.recovered && !bs.converged) ++p.degraded;
        }
      }
      p.rmse = ref2 > 0.0 ? std::sqrt(err2 / ref2) : 0.0;
      p.mean_ms_per_block = p.blocks > 0 ? total_ms / p.blocks : 0.0;
      out.push_back(p);
      ++combo;
    }
  }
  return out;
}

void write_bench_csv(std::ostream& os, std::span<const BenchPoint> points) {
  os << "n,ratio,rmse,blocks,degraded\n";
  for (const auto& p : points) {
    os << p.block_len << "," << format_value(p.ratio) << "," << format_value(p.rmse) << ","
       << p.blocks << "," << p.degraded << "\n";
  }
}

void write_bench_timing_csv(std::ostream& os, std::span<const BenchPoint> points) {
  os << "n,ratio,mean_ms_per_block\n";
  for (const auto& p : points) {
    os << p.block_len << "," << format_value(p.ratio) << ","
       << format_value(p.mean_ms_per_block) << "\n";
  }
}

}  // namespace cvcs
