#include "cvcs/synth.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "cvcs/block_io.hpp"

namespace cvcs {

std::vector<double> synth_speed_profile(std::size_t n_samples, const SynthProfileConfig& cfg,
                                        Rng& rng) {
  if (n_samples == 0) throw std::invalid_argument("synth_speed_profile: n_samples == 0");
  const double dt = 1.0 / cfg.rate_hz;
  const double duration = n_samples * dt;

  // Waypoints: start and end at 0, cruise levels in between.
  struct Waypoint {
    double t, v;
  };
  std::vector<Waypoint> wp;
  wp.push_back({0.0, 0.0});
  double t = 0.0;
  double v = 0.0;
  while (t < duration) {
    const double target =
        cfg.min_cruise_mph + rng.uniform() * (cfg.max_cruise_mph - cfg.min_cruise_mph);
    const double ramp = std::abs(target - v) / cfg.ramp_mph_per_s;
    t += ramp;
    wp.push_back({t, target});
    v = target;
    const double hold =
        cfg.cruise_hold_min_s + rng.uniform() * (cfg.cruise_hold_max_s - cfg.cruise_hold_min_s);
    t += hold;
    wp.push_back({t, target});
  }
  // Final deceleration to rest.
  wp.push_back({t + v / cfg.ramp_mph_per_s, 0.0});

  // Band-limited noise: a few slow cosines with random phase.
  std::vector<double> amp(cfg.noise_terms), omega(cfg.noise_terms), phase(cfg.noise_terms);
  for (int k = 0; k < cfg.noise_terms; ++k) {
    amp[k] = cfg.noise_amp_mph * (0.3 + 0.7 * rng.uniform());
    const double period = cfg.noise_min_period_s * (1.0 + 3.0 * rng.uniform());
    omega[k] = 2.0 * M_PI / period;
    phase[k] = 2.0 * M_PI * rng.uniform();
  }

  std::vector<double> out(n_samples);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double ti = i * dt;
    while (seg + 1 < wp.size() - 1 && wp[seg + 1].t <= ti) ++seg;
    const auto& a = wp[seg];
    const auto& b = wp[seg + 1];
    const double frac = (b.t > a.t) ? std::min(1.0, (ti - a.t) / (b.t - a.t)) : 1.0;
    double s = a.v + frac * (b.v - a.v);
    for (int k = 0; k < cfg.noise_terms; ++k) s += amp[k] * std::cos(omega[k] * ti + phase[k]);
    out[i] = std::max(0.0, s);
  }
  return out;
}

std::vector<std::vector<double>> synth_corpus(int n_trips, std::size_t min_samples,
                                              std::size_t max_samples,
                                              const SynthProfileConfig& cfg, Rng& rng) {
  std::vector<std::vector<double>> trips;
  trips.reserve(n_trips);
  for (int i = 0; i < n_trips; ++i) {
    Rng trip_rng = rng.split(static_cast<std::uint64_t>(i));
    const std::size_t n =
        min_samples + static_cast<std::size_t>(trip_rng.uniform_below(max_samples - min_samples + 1));
    trips.push_back(synth_speed_profile(n, cfg, trip_rng));
  }
  return trips;
}

void write_synth_bsm_csv(const std::string& path, int n_trips, std::size_t min_samples,
                         std::size_t max_samples, const SynthProfileConfig& cfg, Rng& rng) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "device_id,timestamp_s,lat,lon,speed_mph,heading_deg,yaw_rate_deg_s,confidence_pct\n";

  const double dt = 1.0 / cfg.rate_hz;
  auto trips = synth_corpus(n_trips, min_samples, max_samples, cfg, rng);
  for (int d = 0; d < static_cast<int>(trips.size()); ++d) {
    Rng aux = rng.split(0x10000u + d);
    const double heading = 360.0 * aux.uniform();
    const double lat0 = 42.0 + 0.5 * aux.uniform();
    const double lon0 = -83.8 + 0.5 * aux.uniform();
    double along_mi = 0.0;
    double t0 = 1.0e5 * (d + 1);
    for (std::size_t i = 0; i < trips[d].size(); ++i) {
      const double v = trips[d][i];
      along_mi += v / 3600.0 * dt;
      const double yaw = 4.0 * (aux.uniform() - 0.5);
      const double conf = 60.0 + 40.0 * aux.uniform();
      os << "veh" << d << "," << format_value(t0 + i * dt) << ","
         << format_value(lat0 + along_mi / 69.0 * std::cos(heading * M_PI / 180.0)) << ","
         << format_value(lon0 + along_mi / 51.0 * std::sin(heading * M_PI / 180.0)) << ","
         << format_value(v) << "," << format_value(heading) << "," << format_value(yaw) << ","
         << format_value(conf) << "\n";
    }
  }
}

}  // namespace cvcs
