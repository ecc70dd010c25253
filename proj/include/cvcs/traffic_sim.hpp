#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "cvcs/obu.hpp"
#include "cvcs/rng.hpp"
#include "cvcs/scenario.hpp"
#include "cvcs/solver.hpp"

namespace cvcs {

class SimulationIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DetectorRecord {
  int segment = 0;  // 1-based; detector sits at the downstream end
  double time_s = 0.0;
  int vehicle_id = 0;
  double speed_mph = 0.0;
};

// Speed observations accumulated on the (segment, step) grid; the probe
// space-mean-speed estimator consumes per-step means from it.
struct SpeedGrid {
  int n_segments = 0;
  int n_steps = 0;
  double dt = 0.0;
  std::vector<double> sum;
  std::vector<long> count;

  SpeedGrid() = default;
  SpeedGrid(int segments, int steps, double dt_s)
      : n_segments(segments), n_steps(steps), dt(dt_s),
        sum(static_cast<std::size_t>(segments) * steps, 0.0),
        count(static_cast<std::size_t>(segments) * steps, 0) {}

  // segment 1-based, step 1-based
  std::size_t at(int segment, int step) const {
    return static_cast<std::size_t>(segment - 1) * n_steps + (step - 1);
  }
  void add(int segment, int step, double speed_mph) {
    const auto i = at(segment, step);
    sum[i] += speed_mph;
    ++count[i];
  }
};

struct Arrival {
  double time_s = 0.0;
  bool is_cv = false;
};

// Piecewise-homogeneous Poisson arrivals at the interval-dependent rate.
std::vector<Arrival> spawn_arrivals(const Scenario& scenario, Rng& rng);

// IDM longitudinal acceleration. gap is bumper-to-bumper (may be +inf),
// closing_speed = own speed minus leader speed.
double idm_accel(const IdmParams& p, double speed, double gap, double closing_speed);

struct VehicleStats {
  int id = 0;
  bool is_cv = false;
  double entry_time_s = 0.0;
  double exit_time_s = -1.0;  // -1: still on the road at sim end
  long total_ticks = 0;
  long fixed_captured = 0, fixed_evicted = 0, fixed_uploaded = 0, fixed_flushed = 0;
  long cs_captured = 0, cs_evicted = 0, cs_uploaded = 0, cs_flushed = 0;
};

struct SimLog {
  SpeedGrid gr;  // ground truth: every vehicle, every step
  SpeedGrid cv;  // uploaded fixed-rate snapshots at their capture steps
  SpeedGrid cs;  // recovered CS speeds at their tick steps
  std::vector<DetectorRecord> detectors;
  std::vector<VehicleStats> vehicles;
  long arrivals_scheduled = 0;
  long entered = 0;
  long exited = 0;
  long cs_blocks_total = 0;
  long cs_blocks_empty = 0;     // unrecoverable (all snapshots evicted)
  long cs_blocks_degraded = 0;  // solver stopped at max_iters
  long closed_lane_violations = 0;  // vehicle-steps on the closed lane inside the closure
};

struct RunOptions {
  SolverConfig solver;
  std::ostream* trajectories_csv = nullptr;  // time_s,vehicle_id,lane,segment,speed_mph
  std::ostream* uploads_cv_csv = nullptr;    // time_s,rsu_mi,vehicle_id,capture_tick,segment,speed
  std::ostream* uploads_cs_csv = nullptr;
};

struct Vehicle {
  int id = 0;
  int lane = 0;  // 0 = outer, 1 = inner
  double pos_m = 0.0;
  double speed_mps = 0.0;
  bool is_cv = false;
  int entry_step = 0;
  double entry_time_s = 0.0;
  int next_boundary = 1;
  double cooldown_s = 0.0;
  int cv_index = -1;
};

// Single-threaded stepwise simulation of the two-lane corridor. Vehicles
// follow IDM, merge out of the closed lane under gap acceptance, and CVs
// run both capture pipelines against the same trajectory.
class Simulation {
 public:
  explicit Simulation(const Scenario& scenario, RunOptions opts = {});
  ~Simulation();

  void step();
  void run_to_end();  // remaining steps plus finish()
  void finish();      // end-of-run buffer flush and CS recovery

  // Test hooks.
  void disable_arrivals();
  int inject_vehicle(int lane, double pos_m, double speed_mps, bool is_cv);

  int step_index() const;
  double time_s() const;
  const std::vector<Vehicle>& active_vehicles() const;
  const Scenario& scenario() const;
  SimLog& log();
  SimLog take_log();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SimLog run_scenario(const Scenario& scenario, RunOptions opts = {});

}  // namespace cvcs
