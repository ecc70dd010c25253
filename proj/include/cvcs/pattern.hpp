#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "cvcs/rng.hpp"

namespace cvcs {

enum class SampleMode { ExactM, Bernoulli };

// Which rows of the identity survive the capture step: sorted unique
// indices into [0, block_len).
struct SensingPattern {
  int block_len = 0;
  std::vector<int> indices;

  int kept() const { return static_cast<int>(indices.size()); }
  bool empty() const { return indices.empty(); }
  bool full() const { return kept() == block_len; }
};

// One compressed block: the pattern plus the kept sample values.
struct SampledBlock {
  SensingPattern pattern;
  Eigen::VectorXd values;
  long block_seq = 0;
};

// ExactM draws round(ratio * block_len) indices uniformly without
// replacement; Bernoulli keeps each index independently with probability
// ratio (the online capture rule), so the kept count varies per block and
// may be zero.
SensingPattern make_pattern(int block_len, double ratio, SampleMode mode, Rng& rng);

// Split a sample stream into consecutive blocks of block_len (the final
// partial block keeps its true length) and subsample each independently.
// Exact-M capture always keeps at least one sample per block, even when
// a short tail would round the keep count to zero.
std::vector<SampledBlock> capture_stream(std::span<const double> samples, int block_len,
                                         double ratio, SampleMode mode, Rng& rng);

// Subsample one full block of raw samples with a fresh pattern.
SampledBlock sample_block(std::span<const double> block, double ratio, SampleMode mode,
                          Rng& rng, long block_seq);

}  // namespace cvcs
