#include "cvcs/obu.hpp"

#include <algorithm>
#include <cmath>

namespace cvcs {

std::vector<CsBlock> assemble_cs_blocks(std::span<const Snapshot> snapshots, int block_len,
                                        long total_ticks) {
  if (block_len < 1) throw std::invalid_argument("assemble_cs_blocks: block_len must be >= 1");
  if (total_ticks < 0) throw std::invalid_argument("assemble_cs_blocks: negative total_ticks");

  const long n_blocks = (total_ticks + block_len - 1) / block_len;
  std::vector<CsBlock> out(static_cast<std::size_t>(n_blocks));
  for (long b = 0; b < n_blocks; ++b) {
    auto& cb = out[static_cast<std::size_t>(b)];
    cb.first_tick = b * block_len;
    cb.block.block_seq = b;
    cb.block.pattern.block_len =
        static_cast<int>(std::min<long>(block_len, total_ticks - b * block_len));
  }

  std::vector<Snapshot> sorted(snapshots.begin(), snapshots.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.capture_tick < b.capture_tick; });

  std::vector<std::vector<double>> vals(out.size());
  for (const auto& s : sorted) {
    if (s.capture_tick < 0 || s.capture_tick >= total_ticks)
      throw std::runtime_error("assemble_cs_blocks: capture_tick outside trip tick range");
    const long b = s.capture_tick / block_len;
    auto& cb = out[static_cast<std::size_t>(b)];
    const int idx = s.capture_tick % block_len;
    if (!cb.block.pattern.indices.empty() && cb.block.pattern.indices.back() == idx)
      throw std::runtime_error("assemble_cs_blocks: duplicate capture_tick " +
                               std::to_string(s.capture_tick));
    cb.block.pattern.indices.push_back(idx);
    cb.segments.push_back(s.segment);
    vals[static_cast<std::size_t>(b)].push_back(s.speed_mph);
  }
  for (std::size_t b = 0; b < out.size(); ++b) {
    out[b].block.values =
        Eigen::Map<Eigen::VectorXd>(vals[b].data(), static_cast<long>(vals[b].size()));
  }
  return out;
}

std::vector<CsBlock> assemble_cs_blocks(const std::vector<UploadEvent>& uploads, int block_len,
                                        long total_ticks) {
  std::vector<Snapshot> all;
  for (const auto& u : uploads) all.insert(all.end(), u.snapshots.begin(), u.snapshots.end());
  return assemble_cs_blocks(all, block_len, total_ticks);
}

std::vector<int> attribute_segments(const CsBlock& cb) {
  const int n = cb.block.pattern.block_len;
  std::vector<int> out(static_cast<std::size_t>(n), 0);
  const auto& idx = cb.block.pattern.indices;
  if (idx.empty()) return {};

  std::size_t k = 0;  // kept snapshot whose index is closest from the left
  for (int i = 0; i < n; ++i) {
    while (k + 1 < idx.size() && idx[k + 1] <= i) ++k;
    int best = static_cast<int>(k);
    if (k + 1 < idx.size()) {
      const int d_left = std::abs(i - idx[k]);
      const int d_right = std::abs(idx[k + 1] - i);
      if (d_right < d_left) best = static_cast<int>(k + 1);  // tie stays with the earlier one
    }
    out[static_cast<std::size_t>(i)] = cb.segments[static_cast<std::size_t>(best)];
  }
  return out;
}

}  // namespace cvcs
