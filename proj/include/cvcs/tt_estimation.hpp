#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvcs/scenario.hpp"
#include "cvcs/traffic_sim.hpp"

namespace cvcs {

// Harmonic space mean speed of detector spot speeds (mph). Speeds below
// v_floor are clamped before inversion so queued crawl cannot blow up the
// estimate.
double space_mean_speed_harmonic(std::span<const double> speeds_mph, double v_floor_mph = 1.0);

// Probe space mean speed: arithmetic mean of the per-step mean speeds.
// Steps with no observation (nullopt) are excluded from the outer average;
// strict mode keeps them in the denominator (the literal textbook form).
// Returns nullopt when no step carries data.
std::optional<double> space_mean_speed_probe(std::span<const std::optional<double>> step_means,
                                             bool strict = false);

struct TtCell {
  double tt_s = 0.0;
  long support = 0;
};

struct TravelTimeTable {
  std::string source;  // GR | LP | CV | CS
  int n_segments = 0;
  int n_intervals = 0;
  std::vector<std::optional<TtCell>> cells;

  const std::optional<TtCell>& cell(int segment, int interval) const {
    return cells[static_cast<std::size_t>(segment - 1) * n_intervals + (interval - 1)];
  }
  std::optional<TtCell>& cell(int segment, int interval) {
    return cells[static_cast<std::size_t>(segment - 1) * n_intervals + (interval - 1)];
  }
};

struct ProbeTableOptions {
  bool strict_step_average = false;
};

// Eq-style travel-time tables: tt = L_s / vbar, absent where the source
// saw nothing in the cell.
TravelTimeTable build_table_probe(const std::string& source, const SpeedGrid& grid,
                                  const Scenario& scenario, const ProbeTableOptions& = {});
TravelTimeTable build_table_lp(std::span<const DetectorRecord> records, const Scenario& scenario,
                               double v_floor_mph = 1.0);

struct MapeResult {
  double mape = 0.0;
  int cells_used = 0;
  int cells_missing = 0;
  bool defined = false;
};

// Mean absolute percentage error over segments first_segment..S and
// intervals first_interval..T. Ground truth must be complete over the
// window; estimate cells that are absent are excluded and counted.
MapeResult mape(const TravelTimeTable& estimate, const TravelTimeTable& ground_truth,
                int first_segment = 2, int first_interval = 4);

// CSV: source,segment,interval,tt_s,support (absent cells -> empty fields).
void write_table_csv(std::ostream& os, const TravelTimeTable& table);

}  // namespace cvcs
