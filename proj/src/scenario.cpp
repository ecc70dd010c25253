#include "cvcs/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cvcs {

double Scenario::rate_for_interval(int j) const {
  if (arrival_pattern == ArrivalPattern::Constant) return constant_rate_vph;
  const int triplet = (j - 1) / 3;  // intervals 1..12 -> triplets 0..3
  return varying_rates_vph[std::min(triplet, 3)];
}

int Scenario::interval_of_time(double t) const {
  int j = static_cast<int>(std::ceil(t / interval_s));
  if (j < 1) j = 1;
  if (j > n_intervals()) j = n_intervals();
  return j;
}

Scenario build_scenario(const Scenario& config) {
  const Scenario& c = config;
  if (!(c.mpr >= 0.0 && c.mpr <= 1.0)) throw ConfigError("mpr", "must be in [0, 1]");
  if (c.obu_capacity < 1) throw ConfigError("obu_capacity", "must be positive");
  if (c.capture_rate_hz != 1 && c.capture_rate_hz != 10)
    throw ConfigError("capture_rate_hz", "must be 1 or 10");
  if (!(c.compression_ratio > 0.0 && c.compression_ratio <= 1.0))
    throw ConfigError("compression_ratio", "must be in (0, 1]");
  if (c.cs_block_len < 1) throw ConfigError("cs_block_len", "must be positive");
  if (std::abs(c.n_segments * c.segment_len_mi - 5.0) > 1e-9)
    throw ConfigError("segment_len_mi", "corridor must be n_segments * segment_len_mi = 5.0 mi");
  if (std::abs(c.sim_duration_s / c.interval_s - 12.0) > 1e-9)
    throw ConfigError("interval_s", "sim_duration_s / interval_s must be 12 intervals");
  if (!(c.dt_s > 0.0)) throw ConfigError("dt_s", "must be positive");
  if (c.capture_rate_hz * c.dt_s > 1.0 + 1e-12)
    throw ConfigError("capture_rate_hz", "capture rate faster than the simulation step");
  if (c.closure.enabled) {
    if (c.closure.first_segment < 1 || c.closure.last_segment > c.n_segments ||
        c.closure.first_segment > c.closure.last_segment)
      throw ConfigError("lane_closure", "bad segment range");
    if (c.closure.first_interval < 1 || c.closure.last_interval > c.n_intervals() ||
        c.closure.first_interval > c.closure.last_interval)
      throw ConfigError("lane_closure", "bad interval range");
    if (c.closure.lane != 0 && c.closure.lane != 1)
      throw ConfigError("lane_closure", "lane must be 0 or 1");
  }
  Scenario out = c;
  // Cap the compressed-capture block length so that a full block's expected
  // kept count (ratio * N) fits in the OBU.  With longer blocks every block
  // would lose its oldest samples to FIFO eviction, so the solver would see
  // measurements clustered at the block tail and extrapolate over the rest;
  // shorter blocks keep the measurements spread over the whole support.
  const int cap_ticks =
      std::max(1, static_cast<int>(std::floor(c.obu_capacity / c.compression_ratio)));
  out.cs_block_len = std::min(c.cs_block_len, cap_ticks);
  return out;
}

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

namespace {

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw ConfigError(key, "not a number: " + v);
  }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  Scenario s;
  for (const auto& [key, val] : parse_kv_text(text)) {
    if (key == "seed") s.seed = static_cast<std::uint64_t>(std::stoull(val));
    else if (key == "mpr") s.mpr = to_double(key, val);
    else if (key == "obu_capacity") s.obu_capacity = static_cast<int>(to_double(key, val));
    else if (key == "capture_rate_hz") s.capture_rate_hz = static_cast<int>(to_double(key, val));
    else if (key == "compression_ratio") s.compression_ratio = to_double(key, val);
    else if (key == "cs_block_len") s.cs_block_len = static_cast<int>(to_double(key, val));
    else if (key == "arrival_pattern") {
      if (val == "constant") s.arrival_pattern = ArrivalPattern::Constant;
      else if (val == "varying") s.arrival_pattern = ArrivalPattern::Varying;
      else throw ConfigError(key, "must be constant or varying");
    } else if (key == "constant_rate_vph") s.constant_rate_vph = to_double(key, val);
    else if (key == "sim_duration_s") s.sim_duration_s = to_double(key, val);
    else if (key == "interval_s") s.interval_s = to_double(key, val);
    else if (key == "n_segments") s.n_segments = static_cast<int>(to_double(key, val));
    else if (key == "segment_len_mi") s.segment_len_mi = to_double(key, val);
    else if (key == "dt_s") s.dt_s = to_double(key, val);
    else if (key == "lane_closure") {
      if (val == "on") s.closure.enabled = true;
      else if (val == "off") s.closure.enabled = false;
      else throw ConfigError(key, "must be on or off");
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  return build_scenario(s);
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_scenario_text(ss.str());
}

}  // namespace cvcs
