#include "cvcs/pattern.hpp"

#include <cmath>
#include <stdexcept>

namespace cvcs {

SensingPattern make_pattern(int block_len, double ratio, SampleMode mode, Rng& rng) {
  if (block_len < 1) throw std::invalid_argument("make_pattern: block_len must be >= 1");
  if (!(ratio > 0.0 && ratio <= 1.0))
    throw std::invalid_argument("make_pattern: ratio must be in (0, 1]");

  SensingPattern p;
  p.block_len = block_len;
  if (mode == SampleMode::ExactM) {
    const int m = static_cast<int>(std::lround(ratio * block_len));
    if (m == 0) throw std::invalid_argument("make_pattern: ratio*block_len rounds to zero");
    p.indices = sample_without_replacement(block_len, m, rng);
  } else {
    for (int i = 0; i < block_len; ++i) {
      if (rng.uniform() <= ratio) p.indices.push_back(i);
    }
  }
  return p;
}

SampledBlock sample_block(std::span<const double> block, double ratio, SampleMode mode,
                          Rng& rng, long block_seq) {
  SampledBlock b;
  b.block_seq = block_seq;
  b.pattern = make_pattern(static_cast<int>(block.size()), ratio, mode, rng);
  b.values.resize(b.pattern.kept());
  for (int i = 0; i < b.pattern.kept(); ++i) {
    b.values[i] = block[b.pattern.indices[i]];
  }
  return b;
}

std::vector<SampledBlock> capture_stream(std::span<const double> samples, int block_len,
                                         double ratio, SampleMode mode, Rng& rng) {
  if (samples.empty()) throw std::invalid_argument("capture_stream: empty sample stream");
  if (block_len < 1) throw std::invalid_argument("capture_stream: block_len must be >= 1");

  std::vector<SampledBlock> out;
  long seq = 0;
  for (std::size_t off = 0; off < samples.size(); off += block_len, ++seq) {
    const std::size_t len = std::min<std::size_t>(block_len, samples.size() - off);
    // A short tail can round its exact-M count down to zero; a capture
    // step that keeps nothing from a present block makes no sense, so the
    // effective ratio is bumped to keep one sample.
    double r = ratio;
    if (mode == SampleMode::ExactM && std::lround(ratio * static_cast<double>(len)) == 0) {
      r = 1.0 / static_cast<double>(len);
    }
    out.push_back(sample_block(samples.subspan(off, len), r, mode, rng, seq));
  }
  return out;
}

}  // namespace cvcs
