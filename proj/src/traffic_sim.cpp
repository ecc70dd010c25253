#include "cvcs/traffic_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>

#include "cvcs/block_io.hpp"
#include "cvcs/dct.hpp"

namespace cvcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// The closed lane starts emptying this long before the closure interval,
// so that no vehicle is caught inside the closed region when it begins.
constexpr double kClosureLeadS = 90.0;
constexpr double kMergeZoneMi = 0.25;
constexpr double kLaneChangeCooldownS = 5.0;
// Posted work-zone speed through the taper and past the works while the
// closure is active.  8 mph: the resulting single-lane capacity sits
// well below the corridor inflow, which is what makes the queue grow and
// spill upstream.
constexpr double kWorkZoneSpeedMps = 3.6;
// Upper clamp for speeds reconstructed from compressed captures; sparse
// recovery can overshoot at sharp speed transitions.
constexpr double kMaxPlausibleMph = 85.0;
// Reconstructed ticks are only trusted within this distance (in ticks)
// of a kept sample; measured error grows monotonically with distance to
// the nearest measurement.
constexpr int kRecoveryTrustTicks = 1;
// Entry admits a waiting vehicle as soon as the previous one has cleared
// its own length plus this slack.  Entrants start at speed zero and hold
// position until the IDM gap opens, so a small slack lets the entry point
// discharge like a queue and deliver the scheduled demand instead of
// throttling it.
constexpr double kEntryMinGapM = 0.5;

double mph(double mps) { return mps / kMphToMps; }

}  // namespace

double idm_accel(const IdmParams& p, double speed, double gap, double closing_speed) {
  const double free_term = std::pow(speed / p.v0, 4.0);
  if (!std::isfinite(gap)) return p.accel * (1.0 - free_term);
  const double s_star =
      p.s0 + std::max(0.0, speed * p.headway +
                               speed * closing_speed / (2.0 * std::sqrt(p.accel * p.brake)));
  const double s = std::max(gap, 0.01);
  return p.accel * (1.0 - free_term - (s_star / s) * (s_star / s));
}

std::vector<Arrival> spawn_arrivals(const Scenario& sc, Rng& rng) {
  std::vector<Arrival> out;
  for (int j = 1; j <= sc.n_intervals(); ++j) {
    const double rate_per_s = sc.rate_for_interval(j) / 3600.0;
    if (rate_per_s <= 0.0) continue;
    double t = (j - 1) * sc.interval_s;
    const double t_end = j * sc.interval_s;
    for (;;) {
      t += rng.exponential(rate_per_s);
      if (t >= t_end) break;
      out.push_back({t, rng.uniform() < sc.mpr});
    }
  }
  return out;
}

struct CvState {
  ObuBuffer fixed;
  ObuBuffer cs;
  Rng keep_rng;
  long ticks_fired = 0;
  long max_tick = -1;
  std::vector<Snapshot> cs_uploaded;
  VehicleStats stats;

  CvState(int capacity, Rng rng) : fixed(capacity), cs(capacity), keep_rng(rng) {}
};

struct Simulation::Impl {
  Scenario sc;
  RunOptions opts;
  SimLog log;

  double seg_len_m = 0.0;
  double corridor_m = 0.0;
  double closure_start_m = 0.0;
  double closure_end_m = 0.0;
  double merge_zone_m = 0.0;
  double obstacle_on_s = 0.0;   // virtual obstacle window (includes lead time)
  double obstacle_off_s = 0.0;
  double strict_on_s = 0.0;     // the closure intervals proper
  double strict_off_s = 0.0;

  int k = 0;  // completed steps
  std::vector<Vehicle> veh;
  std::vector<std::unique_ptr<CvState>> cv_states;
  std::vector<int> order[2];  // vehicle indices per lane, ascending position
  std::deque<Arrival> pending;
  std::vector<Arrival> schedule;
  std::size_t next_arrival = 0;
  int next_id = 0;
  bool arrivals_enabled = true;
  bool finished = false;

  Impl(const Scenario& scenario, RunOptions options)
      : sc(build_scenario(scenario)), opts(std::move(options)) {
    seg_len_m = sc.segment_len_mi * kMiToM;
    corridor_m = sc.corridor_len_mi() * kMiToM;
    closure_start_m = (sc.closure.first_segment - 1) * seg_len_m;
    closure_end_m = sc.closure.last_segment * seg_len_m;
    merge_zone_m = closure_start_m - kMergeZoneMi * kMiToM;
    strict_on_s = (sc.closure.first_interval - 1) * sc.interval_s;
    strict_off_s = sc.closure.last_interval * sc.interval_s;
    obstacle_on_s = strict_on_s - kClosureLeadS;
    obstacle_off_s = strict_off_s;

    log.gr = SpeedGrid(sc.n_segments, sc.n_steps(), sc.dt_s);
    log.cv = SpeedGrid(sc.n_segments, sc.n_steps(), sc.dt_s);
    log.cs = SpeedGrid(sc.n_segments, sc.n_steps(), sc.dt_s);

    Rng master(sc.seed);
    Rng arrival_rng = master.split(1);
    schedule = spawn_arrivals(sc, arrival_rng);
    log.arrivals_scheduled = static_cast<long>(schedule.size());

    if (opts.trajectories_csv)
      *opts.trajectories_csv << "time_s,vehicle_id,lane,segment,speed_mph\n";
    if (opts.uploads_cv_csv)
      *opts.uploads_cv_csv << "time_s,rsu_mi,vehicle_id,capture_tick,segment,speed\n";
    if (opts.uploads_cs_csv)
      *opts.uploads_cs_csv << "time_s,rsu_mi,vehicle_id,capture_tick,segment,speed\n";
  }

  bool obstacle_active(double t) const {
    return sc.closure.enabled && t > obstacle_on_s && t <= obstacle_off_s;
  }
  bool strict_closure(double t) const {
    return sc.closure.enabled && t > strict_on_s && t <= strict_off_s;
  }

  int segment_of(double pos) const {
    int s = static_cast<int>(pos / seg_len_m) + 1;
    return std::min(std::max(s, 1), sc.n_segments);
  }

  void rebuild_orders() {
    order[0].clear();
    order[1].clear();
    for (int i = 0; i < static_cast<int>(veh.size()); ++i) order[veh[i].lane].push_back(i);
    for (auto& o : order) {
      std::sort(o.begin(), o.end(),
                [&](int a, int b) { return veh[a].pos_m < veh[b].pos_m; });
    }
  }

  // Position of vehicle vi within its lane order; -1 if not found.
  int order_pos(int vi) const {
    const auto& o = order[veh[vi].lane];
    for (int i = 0; i < static_cast<int>(o.size()); ++i) {
      if (o[i] == vi) return i;
    }
    return -1;
  }

  // Leader/follower lookup in a lane around position pos (excluding vi).
  int leader_in_lane(int lane, double pos, int exclude) const {
    for (int idx : order[lane]) {
      if (idx == exclude) continue;
      if (veh[idx].pos_m >= pos) return idx;
    }
    return -1;
  }
  int follower_in_lane(int lane, double pos, int exclude) const {
    int found = -1;
    for (int idx : order[lane]) {
      if (idx == exclude) continue;
      if (veh[idx].pos_m < pos) found = idx;
      else break;
    }
    return found;
  }

  double gap_between(const Vehicle& rear, const Vehicle& front) const {
    return front.pos_m - sc.idm.veh_len - rear.pos_m;
  }

  // IDM acceleration including the virtual closure obstacle.
  double accel_for(const Vehicle& v, int leader, double t) const {
    double a;
    if (leader >= 0) {
      a = idm_accel(sc.idm, v.speed_mps, gap_between(v, veh[leader]),
                    v.speed_mps - veh[leader].speed_mps);
    } else {
      a = idm_accel(sc.idm, v.speed_mps, kInf, 0.0);
    }
    // Drivers only react to the closure once they reach the signed merge
    // zone, so merging is late and concentrated; that is what lets the
    // bottleneck break down and send a shockwave upstream.
    if (obstacle_active(t) && v.lane == sc.closure.lane && v.pos_m >= merge_zone_m &&
        v.pos_m < closure_start_m) {
      const double a_obs = idm_accel(sc.idm, v.speed_mps, closure_start_m - v.pos_m, v.speed_mps);
      a = std::min(a, a_obs);
    }
    // Reduced speed through the signed work zone (taper plus the closed
    // segments), both lanes.
    if (obstacle_active(t) && v.pos_m >= merge_zone_m && v.pos_m < closure_end_m) {
      IdmParams slow = sc.idm;
      slow.v0 = kWorkZoneSpeedMps;
      const double a_wz = leader >= 0
                              ? idm_accel(slow, v.speed_mps, gap_between(v, veh[leader]),
                                          v.speed_mps - veh[leader].speed_mps)
                              : idm_accel(slow, v.speed_mps, kInf, 0.0);
      a = std::min(a, a_wz);
    }
    return a;
  }

  bool try_lane_change(int vi, double t, bool mandatory) {
    Vehicle& v = veh[vi];
    const int target = 1 - v.lane;

    // Never move into the closed lane near or inside the closure.
    if (obstacle_active(t) && target == sc.closure.lane && v.pos_m >= merge_zone_m - 100.0 &&
        v.pos_m < closure_end_m) {
      return false;
    }

    const int new_leader = leader_in_lane(target, v.pos_m, vi);
    const int new_follower = follower_in_lane(target, v.pos_m, vi);

    const double lead_gap = new_leader >= 0 ? gap_between(v, veh[new_leader]) : kInf;
    const double lag_gap = new_follower >= 0 ? gap_between(veh[new_follower], v) : kInf;
    const double min_gap = mandatory ? 0.3 : 0.5;
    // The new follower may brake to a stop within one step but still
    // travels half a step at its old speed, so the lag gap must cover that.
    const double min_lag =
        min_gap + (new_follower >= 0 ? 0.1 * veh[new_follower].speed_mps : 0.0);
    if (lead_gap < min_gap || lag_gap < min_lag) return false;

    const double my_accel =
        new_leader >= 0 ? idm_accel(sc.idm, v.speed_mps, lead_gap,
                                    v.speed_mps - veh[new_leader].speed_mps)
                        : idm_accel(sc.idm, v.speed_mps, kInf, 0.0);
    const double follower_accel =
        new_follower >= 0
            ? idm_accel(sc.idm, veh[new_follower].speed_mps, lag_gap,
                        veh[new_follower].speed_mps - v.speed_mps)
            : 0.0;

    const double self_limit = mandatory ? -8.0 : -1.5 * sc.idm.brake;
    // How much braking a merge may impose on the new follower grows as the
    // merging vehicle runs out of road: near the closure point drivers
    // force their way in regardless, which is what breaks the open lane
    // into stop-and-go and caps work-zone throughput.
    double follower_limit = -1.5 * sc.idm.brake;
    if (mandatory) {
      const double zone_len = closure_start_m - merge_zone_m;
      const double u =
          std::clamp(1.0 - (closure_start_m - v.pos_m) / zone_len, 0.0, 1.0);
      follower_limit = -(6.0 + 6.0 * u * u);
    }
    if (my_accel < self_limit || follower_accel < follower_limit) return false;

    if (!mandatory) {
      const int cur_leader = leader_in_lane(v.lane, v.pos_m, vi);
      const double cur_accel = accel_for(v, cur_leader, t);
      if (my_accel - cur_accel < 0.3) return false;
    }

    // Apply: move vi between the per-lane order lists.
    auto& from = order[v.lane];
    from.erase(std::find(from.begin(), from.end(), vi));
    v.lane = target;
    auto& to = order[target];
    to.insert(std::upper_bound(to.begin(), to.end(), vi,
                               [&](int a, int b) { return veh[a].pos_m < veh[b].pos_m; }),
              vi);
    v.cooldown_s = kLaneChangeCooldownS;
    return true;
  }

  void lane_change_phase(double t) {
    // Front-to-back over both lanes (merged by position, downstream first).
    std::vector<int> all;
    all.reserve(veh.size());
    for (int i = 0; i < static_cast<int>(veh.size()); ++i) all.push_back(i);
    std::sort(all.begin(), all.end(), [&](int a, int b) {
      if (veh[a].pos_m != veh[b].pos_m) return veh[a].pos_m > veh[b].pos_m;
      return veh[a].id < veh[b].id;
    });

    for (int vi : all) {
      Vehicle& v = veh[vi];
      const bool must_merge = obstacle_active(t) && v.lane == sc.closure.lane &&
                              v.pos_m >= merge_zone_m && v.pos_m < closure_start_m;
      if (must_merge) {
        try_lane_change(vi, t, /*mandatory=*/true);
      } else if (v.cooldown_s <= 0.0) {
        try_lane_change(vi, t, /*mandatory=*/false);
      }
    }
  }

  void upload_buffer(Vehicle& v, ObuBuffer& buf, double t, double rsu_mi, bool is_cs,
                     bool flush) {
    auto snaps = buf.take_all();
    CvState& st = *cv_states[v.cv_index];
    auto& uploaded = is_cs ? st.stats.cs_uploaded : st.stats.fixed_uploaded;
    auto& flushed = is_cs ? st.stats.cs_flushed : st.stats.fixed_flushed;
    (flush ? flushed : uploaded) += static_cast<long>(snaps.size());

    std::ostream* sink = is_cs ? opts.uploads_cs_csv : opts.uploads_cv_csv;
    for (const auto& s : snaps) {
      if (sink) {
        *sink << format_value(t) << "," << format_value(rsu_mi) << "," << s.vehicle_id << ","
              << s.capture_tick << "," << s.segment << "," << format_value(s.speed_mph) << "\n";
      }
      if (is_cs) {
        st.cs_uploaded.push_back(s);
      } else {
        const int step = static_cast<int>(std::lround(s.time_s / sc.dt_s));
        if (step >= 1 && step <= sc.n_steps()) log.cv.add(s.segment, step, s.speed_mph);
      }
    }
  }

  void recover_cs(Vehicle& v) {
    CvState& st = *cv_states[v.cv_index];
    const long total_ticks = st.max_tick + 1;
    if (total_ticks <= 0) return;
    auto blocks = assemble_cs_blocks(std::span<const Snapshot>(st.cs_uploaded), sc.cs_block_len,
                                     total_ticks);
    for (const auto& cb : blocks) {
      ++log.cs_blocks_total;
      if (cb.block.pattern.empty()) {
        ++log.cs_blocks_empty;
        continue;
      }
      Eigen::VectorXd x;
      if (cb.block.pattern.full()) {
        x = cb.block.values;
      } else {
        SolveStatus status;
        // Central recovery exempts the speed baseline from the l1 penalty
        // (SolverConfig::center); plain minimum-l1 reconstructions of a
        // signal with a large constant component are biased low between
        // measurements.
        SolverConfig cfg = opts.solver;
        cfg.center = true;
        x = idct(solve_basis_pursuit_best_effort(cb.block, cfg, status));
        if (!status.converged) ++log.cs_blocks_degraded;
      }
      const auto segs = attribute_segments(cb);
      // Reconstruction error grows with distance to the nearest kept
      // sample, so only ticks within kRecoveryTrustTicks of a measurement
      // are reported.  Ticks outside the measured span of the block are
      // pure extrapolation and always dropped; reported values are
      // clamped to a physical speed range.
      const auto& kept = cb.block.pattern.indices;
      const int lo = kept.front();
      const int hi = kept.back();
      std::size_t near = 0;  // index of the nearest-or-next kept sample
      for (int i = lo; i <= hi; ++i) {
        while (near + 1 < kept.size() && kept[near] < i) ++near;
        const int dist = std::min(near > 0 ? i - kept[near - 1] : kept[near] - i,
                                  std::abs(kept[near] - i));
        if (dist > kRecoveryTrustTicks) continue;
        const long tick = cb.first_tick + i;
        const int step = v.entry_step + static_cast<int>(tick) * sc.steps_per_tick();
        if (step >= 1 && step <= sc.n_steps())
          log.cs.add(segs[i], step, std::clamp(x[i], 0.0, kMaxPlausibleMph));
      }
    }
  }

  void retire(Vehicle& v, double t, bool at_end) {
    if (v.cv_index >= 0) {
      CvState& st = *cv_states[v.cv_index];
      upload_buffer(v, st.fixed, t, at_end ? -1.0 : sc.corridor_len_mi(), false, at_end);
      upload_buffer(v, st.cs, t, at_end ? -1.0 : sc.corridor_len_mi(), true, at_end);
      recover_cs(v);
      st.stats.id = v.id;
      st.stats.is_cv = true;
      st.stats.entry_time_s = v.entry_time_s;
      st.stats.exit_time_s = at_end ? -1.0 : t;
      st.stats.total_ticks = st.max_tick + 1;
      st.stats.fixed_captured = st.ticks_fired;
      st.stats.cs_evicted = st.cs.overwritten_count();
      st.stats.fixed_evicted = st.fixed.overwritten_count();
      log.vehicles.push_back(st.stats);
    } else {
      VehicleStats s;
      s.id = v.id;
      s.is_cv = v.is_cv;
      s.entry_time_s = v.entry_time_s;
      s.exit_time_s = at_end ? -1.0 : t;
      log.vehicles.push_back(s);
    }
    if (!at_end) ++log.exited;
  }

  int add_vehicle(int lane, double pos, double speed, bool is_cv, int entry_step,
                  double entry_time) {
    Vehicle v;
    v.id = next_id++;
    v.lane = lane;
    v.pos_m = pos;
    v.speed_mps = speed;
    v.is_cv = is_cv;
    v.entry_step = entry_step;
    v.entry_time_s = entry_time;
    v.next_boundary = static_cast<int>(pos / seg_len_m) + 1;
    v.cooldown_s = kLaneChangeCooldownS;
    if (is_cv) {
      v.cv_index = static_cast<int>(cv_states.size());
      Rng master(sc.seed);
      cv_states.push_back(std::make_unique<CvState>(
          sc.obu_capacity, master.split(0x20000u + static_cast<std::uint64_t>(v.id))));
    }
    veh.push_back(v);
    ++log.entered;
    return v.id;
  }

  void try_entries(double t, int entry_step) {
    while (!pending.empty()) {
      double gap[2];
      for (int l = 0; l < 2; ++l) {
        gap[l] = kInf;
        if (!order[l].empty()) {
          gap[l] = veh[order[l].front()].pos_m - sc.idm.veh_len;
        }
      }
      const int lane = gap[0] >= gap[1] ? 0 : 1;
      if (gap[lane] < kEntryMinGapM) break;

      const Arrival a = pending.front();
      pending.pop_front();
      const int vi = add_vehicle(lane, 0.0, 0.0, a.is_cv, entry_step, t);
      order[lane].insert(order[lane].begin(), static_cast<int>(veh.size()) - 1);
      (void)vi;
    }
  }

  void sample_and_capture(double t1, int step) {
    const bool strict = strict_closure(t1);
    for (auto& v : veh) {
      const int seg = segment_of(v.pos_m);
      const double v_mph = mph(v.speed_mps);
      log.gr.add(seg, step, v_mph);
      if (strict && v.lane == sc.closure.lane && seg >= sc.closure.first_segment &&
          seg <= sc.closure.last_segment) {
        ++log.closed_lane_violations;
      }
      if (opts.trajectories_csv) {
        *opts.trajectories_csv << format_value(t1) << "," << v.id << "," << v.lane << "," << seg
                               << "," << format_value(v_mph) << "\n";
      }
      if (v.cv_index >= 0) {
        const int since = step - v.entry_step;
        if (since >= 0 && since % sc.steps_per_tick() == 0) {
          CvState& st = *cv_states[v.cv_index];
          const int tick = since / sc.steps_per_tick();
          Snapshot s{v.id, tick, t1, seg, v_mph};
          st.fixed.insert(s);
          ++st.ticks_fired;
          st.max_tick = std::max<long>(st.max_tick, tick);
          // Online capture rule: keep the tick when the uniform draw does
          // not exceed the compression ratio.
          if (st.keep_rng.uniform() <= sc.compression_ratio) {
            st.cs.insert(s);
            ++st.stats.cs_captured;
          }
        }
      }
    }
  }

  void do_step() {
    if (finished) throw std::logic_error("Simulation: step() after finish()");
    const double t1 = (k + 1) * sc.dt_s;

    rebuild_orders();
    lane_change_phase(t1);

    // Longitudinal update from a frozen snapshot of speeds/positions.
    std::vector<double> accel(veh.size());
    for (int l = 0; l < 2; ++l) {
      const auto& o = order[l];
      for (std::size_t i = 0; i < o.size(); ++i) {
        const int leader = (i + 1 < o.size()) ? o[i + 1] : -1;
        accel[o[i]] = accel_for(veh[o[i]], leader, t1);
      }
    }
    for (std::size_t i = 0; i < veh.size(); ++i) {
      Vehicle& v = veh[i];
      const double v_new = std::max(0.0, v.speed_mps + accel[i] * sc.dt_s);
      v.pos_m += 0.5 * (v.speed_mps + v_new) * sc.dt_s;
      v.speed_mps = v_new;
      v.cooldown_s = std::max(0.0, v.cooldown_s - sc.dt_s);
    }

    // Collision check: a negative gap means the dynamics are broken.
    for (int l = 0; l < 2; ++l) {
      const auto& o = order[l];
      for (std::size_t i = 0; i + 1 < o.size(); ++i) {
        if (gap_between(veh[o[i]], veh[o[i + 1]]) < -1e-6) {
          throw SimulationIntegrityError(
              "collision between vehicles " + std::to_string(veh[o[i]].id) + " and " +
              std::to_string(veh[o[i + 1]].id) + " at t=" + std::to_string(t1));
        }
      }
    }

    // Boundary crossings: detector record and, for CVs, an RSU upload.
    for (auto& v : veh) {
      while (v.next_boundary <= sc.n_segments &&
             v.pos_m >= v.next_boundary * seg_len_m) {
        const int b = v.next_boundary;
        log.detectors.push_back({b, t1, v.id, mph(v.speed_mps)});
        if (v.cv_index >= 0) {
          CvState& st = *cv_states[v.cv_index];
          const double rsu_mi = b * sc.segment_len_mi;
          upload_buffer(v, st.fixed, t1, rsu_mi, false, false);
          upload_buffer(v, st.cs, t1, rsu_mi, true, false);
        }
        ++v.next_boundary;
      }
    }

    // Retire vehicles past the corridor end.
    for (std::size_t i = 0; i < veh.size();) {
      if (veh[i].pos_m >= corridor_m) {
        retire(veh[i], t1, false);
        veh.erase(veh.begin() + static_cast<long>(i));
      } else {
        ++i;
      }
    }
    rebuild_orders();

    if (arrivals_enabled) {
      while (next_arrival < schedule.size() && schedule[next_arrival].time_s <= t1) {
        pending.push_back(schedule[next_arrival++]);
      }
      try_entries(t1, k + 1);
    }

    sample_and_capture(t1, k + 1);
    ++k;
  }

  void do_finish() {
    if (finished) return;
    finished = true;
    const double t_end = k * sc.dt_s;
    for (auto& v : veh) retire(v, t_end, true);
    veh.clear();
    std::sort(log.vehicles.begin(), log.vehicles.end(),
              [](const VehicleStats& a, const VehicleStats& b) { return a.id < b.id; });
  }
};

Simulation::Simulation(const Scenario& scenario, RunOptions opts)
    : impl_(std::make_unique<Impl>(scenario, std::move(opts))) {}
Simulation::~Simulation() = default;

void Simulation::step() { impl_->do_step(); }

void Simulation::run_to_end() {
  while (impl_->k < impl_->sc.n_steps()) impl_->do_step();
  impl_->do_finish();
}

void Simulation::finish() { impl_->do_finish(); }

void Simulation::disable_arrivals() { impl_->arrivals_enabled = false; }

int Simulation::inject_vehicle(int lane, double pos_m, double speed_mps, bool is_cv) {
  const int id = impl_->add_vehicle(lane, pos_m, speed_mps, is_cv, impl_->k, impl_->k * impl_->sc.dt_s);
  impl_->rebuild_orders();
  return id;
}

int Simulation::step_index() const { return impl_->k; }
double Simulation::time_s() const { return impl_->k * impl_->sc.dt_s; }
const std::vector<Vehicle>& Simulation::active_vehicles() const { return impl_->veh; }
const Scenario& Simulation::scenario() const { return impl_->sc; }
SimLog& Simulation::log() { return impl_->log; }
SimLog Simulation::take_log() { return std::move(impl_->log); }

SimLog run_scenario(const Scenario& scenario, RunOptions opts) {
  Simulation sim(scenario, std::move(opts));
  sim.run_to_end();
  return sim.take_log();
}

}  // namespace cvcs
