#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvcs/pattern.hpp"

namespace cvcs {

// Plain-text compressed-stream format, one stream per file:
//   N=<int> ratio=<real> mode=<exact|bernoulli> seed=<u64>
//   block_seq,block_len,idx0:val0,idx1:val1,...
// Values carry 9 significant digits so golden files diff cleanly.
struct BlockStreamHeader {
  int block_len = 0;
  double ratio = 0.0;
  std::string mode;  // "exact" or "bernoulli"
  std::uint64_t seed = 0;
};

struct BlockStream {
  BlockStreamHeader header;
  std::vector<SampledBlock> blocks;
};

void write_block_stream(std::ostream& os, const BlockStream& stream);
void write_block_stream_file(const std::string& path, const BlockStream& stream);

BlockStream read_block_stream(std::istream& is);
BlockStream read_block_stream_file(const std::string& path);

// Fixed-format float printing used by every CSV/stream writer (9
// significant digits, C locale, no locale-dependent separators).
std::string format_value(double v);

}  // namespace cvcs
