#include "cvcs/bsm.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cvcs {

namespace {

const char* kHeader =
    "device_id,timestamp_s,lat,lon,speed_mph,heading_deg,yaw_rate_deg_s,confidence_pct";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && p == e;
}

bool valid_record(const BsmRecord& r) {
  return r.speed_mph >= 0.0 && r.yaw_rate_deg_s >= -360.0 && r.yaw_rate_deg_s <= 360.0 &&
         r.confidence_pct >= 0.0 && r.confidence_pct <= 100.0;
}

}  // namespace

IngestResult ingest_bsm(const std::string& path, const IngestConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("ingest_bsm: cannot open " + path);

  std::string line;
  int line_no = 0;
  if (!std::getline(is, line)) throw std::runtime_error("ingest_bsm: empty file " + path);
  ++line_no;
  if (line != kHeader) {
    throw std::runtime_error("ingest_bsm: bad header at line 1 (expected '" +
                             std::string(kHeader) + "')");
  }

  IngestResult result;
  // device -> (trips so far, open trip, last timestamp)
  struct DeviceState {
    int trip_count = 0;
    TripStream open;
    double last_t = 0.0;
    bool has_open = false;
  };
  std::map<std::string, DeviceState> devices;

  auto close_trip = [&](DeviceState& d) {
    if (d.has_open && !d.open.records.empty()) result.trips.push_back(std::move(d.open));
    d.has_open = false;
  };

  const double gap_limit = cfg.gap_factor * cfg.nominal_period_s;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++result.rows_total;
    const auto fields = split_csv(line);
    if (fields.size() != 8) {
      throw std::runtime_error("ingest_bsm: wrong column count at line " +
                               std::to_string(line_no));
    }
    BsmRecord r;
    r.device_id = fields[0];
    if (!parse_double(fields[1], r.timestamp_s) || !parse_double(fields[2], r.lat) ||
        !parse_double(fields[3], r.lon) || !parse_double(fields[4], r.speed_mph) ||
        !parse_double(fields[5], r.heading_deg) || !parse_double(fields[6], r.yaw_rate_deg_s) ||
        !parse_double(fields[7], r.confidence_pct)) {
      throw std::runtime_error("ingest_bsm: unparseable number at line " +
                               std::to_string(line_no));
    }
    auto& d = devices[r.device_id];
    const bool monotone = !d.has_open || r.timestamp_s > d.last_t;
    if (!valid_record(r) || !monotone) {
      ++result.rows_rejected;
      continue;
    }
    if (d.has_open && r.timestamp_s - d.last_t > gap_limit) {
      close_trip(d);
    }
    if (!d.has_open) {
      d.open = TripStream{r.device_id, d.trip_count++, {}};
      d.has_open = true;
    }
    d.last_t = r.timestamp_s;
    d.open.records.push_back(std::move(r));
  }
  for (auto& [id, d] : devices) close_trip(d);
  return result;
}

}  // namespace cvcs
