#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace cvcs {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config error [" + field + "]: " + what), field(field) {}
  std::string field;
};

enum class ArrivalPattern { Constant, Varying };

// Longitudinal dynamics constants (SI units).
struct IdmParams {
  double v0 = 29.0;      // desired speed, m/s (~65 mph)
  double headway = 1.5;  // s
  double accel = 1.2;    // m/s^2
  double brake = 2.0;    // comfortable deceleration, m/s^2
  double s0 = 2.0;       // jam gap, m
  double veh_len = 5.0;  // m
};

struct LaneClosure {
  bool enabled = true;
  int first_segment = 5;   // 1-based, inclusive
  int last_segment = 6;    // inclusive
  int first_interval = 7;  // 1-based, inclusive
  int last_interval = 9;   // inclusive
  int lane = 1;            // inner lane
};

struct Scenario {
  std::uint64_t seed = 1;
  double mpr = 0.6;
  int obu_capacity = 300;
  int capture_rate_hz = 10;       // 1 or 10
  double compression_ratio = 0.2; // CS pipeline
  int cs_block_len = 200;
  ArrivalPattern arrival_pattern = ArrivalPattern::Constant;
  double constant_rate_vph = 2400.0;
  std::array<double, 4> varying_rates_vph = {1200.0, 2400.0, 4800.0, 1200.0};
  double sim_duration_s = 3600.0;
  double interval_s = 300.0;
  int n_segments = 10;
  double segment_len_mi = 0.5;
  double dt_s = 0.1;
  LaneClosure closure;
  IdmParams idm;

  int n_intervals() const { return static_cast<int>(sim_duration_s / interval_s); }
  int n_steps() const { return static_cast<int>(sim_duration_s / dt_s + 0.5); }
  double corridor_len_mi() const { return n_segments * segment_len_mi; }
  int steps_per_tick() const { return static_cast<int>(1.0 / (capture_rate_hz * dt_s) + 0.5); }
  // Arrival rate (veh/h) in 1-based interval j.
  double rate_for_interval(int j) const;
  // 1-based interval containing time t (t in ((j-1)*interval, j*interval]).
  int interval_of_time(double t) const;
};

// Validated copy; throws ConfigError naming the offending field.
Scenario build_scenario(const Scenario& config);

// Plain `key = value` declarative text, `#` comments, [section] headers
// ignored. Unknown keys are an error.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// Key/value helpers shared with the sweep-grid config parser.
std::map<std::string, std::string> parse_kv_text(const std::string& text);

constexpr double kMiToM = 1609.344;
constexpr double kMphToMps = 0.44704;

}  // namespace cvcs
