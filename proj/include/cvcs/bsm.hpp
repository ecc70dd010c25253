#pragma once

#include <string>
#include <vector>

namespace cvcs {

struct BsmRecord {
  std::string device_id;
  double timestamp_s = 0.0;
  double lat = 0.0;
  double lon = 0.0;
  double speed_mph = 0.0;
  double heading_deg = 0.0;
  double yaw_rate_deg_s = 0.0;
  double confidence_pct = 0.0;
};

struct TripStream {
  std::string device_id;
  int trip_index = 0;  // per-device counter after gap splitting
  std::vector<BsmRecord> records;
};

struct IngestResult {
  std::vector<TripStream> trips;
  std::size_t rows_total = 0;
  std::size_t rows_rejected = 0;
};

struct IngestConfig {
  double nominal_period_s = 0.1;  // 10 Hz BSM rate
  double gap_factor = 2.0;        // gap > factor * period starts a new trip
};

// Parse a BSM-schema CSV into per-device, gap-free trip streams. Rows
// violating the field invariants are counted and skipped, never silently
// dropped; structural problems (missing file, wrong header, wrong column
// count) throw with the offending line number.
IngestResult ingest_bsm(const std::string& path, const IngestConfig& cfg = {});

}  // namespace cvcs
