#pragma once

#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "cvcs/pattern.hpp"

namespace cvcs {

struct Snapshot {
  int vehicle_id = 0;
  int capture_tick = 0;  // ticks since trip start at the capture rate
  double time_s = 0.0;
  int segment = 0;  // 1-based
  double speed_mph = 0.0;
};

// Capacity-limited snapshot store with FIFO eviction: when full, inserting
// drops the oldest snapshot.
class ObuBuffer {
 public:
  explicit ObuBuffer(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("ObuBuffer: capacity must be positive");
  }

  void insert(const Snapshot& s) {
    if (static_cast<int>(slots_.size()) == capacity_) {
      slots_.pop_front();
      ++overwritten_;
    }
    slots_.push_back(s);
  }

  // Upload: hand over everything and clear.
  std::vector<Snapshot> take_all() {
    std::vector<Snapshot> out(slots_.begin(), slots_.end());
    slots_.clear();
    return out;
  }

  int size() const { return static_cast<int>(slots_.size()); }
  int capacity() const { return capacity_; }
  long overwritten_count() const { return overwritten_; }
  const std::deque<Snapshot>& slots() const { return slots_; }

 private:
  int capacity_;
  std::deque<Snapshot> slots_;
  long overwritten_ = 0;
};

struct UploadEvent {
  double rsu_mi = 0.0;  // negative for the end-of-run flush
  double time_s = 0.0;
  int vehicle_id = 0;
  std::vector<Snapshot> snapshots;
};

// One compressed block assembled from a vehicle's surviving snapshots,
// plus the segment each kept measurement was taken in (the recovered
// ticks in between inherit the nearest kept segment).
struct CsBlock {
  SampledBlock block;
  std::vector<int> segments;  // parallel to block.pattern.indices
  long first_tick = 0;
};

// Group snapshots by block number (capture_tick div block_len); pattern
// indices are capture_tick mod block_len. Blocks whose snapshots were all
// evicted come out with an empty pattern (unrecoverable). total_ticks
// fixes the tail-block length; duplicated ticks are a data-integrity error.
std::vector<CsBlock> assemble_cs_blocks(std::span<const Snapshot> snapshots, int block_len,
                                        long total_ticks);
std::vector<CsBlock> assemble_cs_blocks(const std::vector<UploadEvent>& uploads, int block_len,
                                        long total_ticks);

// Segment attribution for every tick of the block: nearest kept snapshot
// by tick distance, ties toward the earlier one. Empty blocks -> empty.
std::vector<int> attribute_segments(const CsBlock& block);

}  // namespace cvcs
