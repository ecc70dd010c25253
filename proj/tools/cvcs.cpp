// cvcs: command-line front end.
//
// Subcommands: compress, recover, bench, simulate, sweep, report. Each
// takes a key=value config file plus --seed / --out-dir overrides. All
// artifacts land under --out-dir together with a manifest listing every
// file and the hash of the effective configuration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cvcs/bench.hpp"
#include "cvcs/block_io.hpp"
#include "cvcs/bsm.hpp"
#include "cvcs/metrics.hpp"
#include "cvcs/pattern.hpp"
#include "cvcs/scenario.hpp"
#include "cvcs/solver.hpp"
#include "cvcs/svg_report.hpp"
#include "cvcs/sweep.hpp"
#include "cvcs/synth.hpp"
#include "cvcs/traffic_sim.hpp"
#include "cvcs/tt_estimation.hpp"

namespace fs = std::filesystem;
using namespace cvcs;

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
};

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Every artifact of a run carries the same hash: the config file text plus
// any command-line override, so identical invocations hash identically.
class Manifest {
 public:
  Manifest(const CommonArgs& args, const std::string& config_text) : out_dir_(args.out_dir) {
    std::string effective = config_text;
    if (args.seed) effective += "\nseed_override=" + std::to_string(*args.seed) + "\n";
    hash_ = hex64(fnv1a64(effective));
    fs::create_directories(out_dir_);
  }

  std::ofstream create(const std::string& name) {
    artifacts_.push_back(name);
    std::ofstream os(fs::path(out_dir_) / name);
    if (!os) throw std::runtime_error("cannot create output file: " + name);
    return os;
  }

  void put(const std::string& name, const std::string& content) {
    auto os = create(name);
    os << content;
  }

  std::string path_of(const std::string& name) const {
    return (fs::path(out_dir_) / name).string();
  }

  void finalize() {
    std::ofstream os(fs::path(out_dir_) / "manifest.csv");
    os << "artifact,config_hash\n";
    for (const auto& a : artifacts_) os << a << "," << hash_ << "\n";
    os << "manifest.csv," << hash_ << "\n";
  }

 private:
  std::string out_dir_;
  std::string hash_;
  std::vector<std::string> artifacts_;
};

// ---- config helpers ------------------------------------------------------

class Config {
 public:
  explicit Config(const std::string& text) : kv_(parse_kv_text(text)) {}

  std::string str(const std::string& key, const std::string& def) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    used_.insert(key);
    return it->second;
  }
  double num(const std::string& key, double def) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    used_.insert(key);
    try {
      return std::stod(it->second);
    } catch (...) {
      throw ConfigError(key, "not a number: " + it->second);
    }
  }
  long integer(const std::string& key, long def) {
    return static_cast<long>(num(key, static_cast<double>(def)));
  }
  std::uint64_t u64(const std::string& key, std::uint64_t def) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    used_.insert(key);
    return std::stoull(it->second);
  }
  std::vector<double> num_list(const std::string& key, std::vector<double> def) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    used_.insert(key);
    std::vector<double> out;
    std::istringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.find_first_not_of(" \t") == std::string::npos) continue;
      out.push_back(std::stod(item));
    }
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
  }

  // Reject typos: everything in the file must have been consumed.
  void check_all_used() const {
    for (const auto& [key, val] : kv_) {
      if (!used_.count(key)) throw ConfigError(key, "unknown key");
    }
  }

  // Re-serialize the keys NOT consumed so far (used to forward scenario /
  // sweep keys to their own parsers after stripping CLI-level keys).
  std::string remainder_text() const {
    std::string out;
    for (const auto& [key, val] : kv_) {
      if (!used_.count(key)) out += key + " = " + val + "\n";
    }
    return out;
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

SolverConfig solver_from(Config& cfg) {
  SolverConfig s;
  s.max_iters = static_cast<int>(cfg.integer("solver_max_iters", s.max_iters));
  s.primal_tol = cfg.num("solver_tol", s.primal_tol);
  s.dual_tol = cfg.num("solver_tol", s.dual_tol);
  return s;
}

std::vector<std::vector<double>> load_streams(Config& cfg, std::uint64_t seed,
                                              std::size_t* rejected = nullptr) {
  const std::string input = cfg.str("input", "");
  if (!input.empty()) {
    const auto result = ingest_bsm(input);
    if (rejected) *rejected = result.rows_rejected;
    std::vector<std::vector<double>> streams;
    for (const auto& trip : result.trips) {
      std::vector<double> s;
      s.reserve(trip.records.size());
      for (const auto& r : trip.records) s.push_back(r.speed_mph);
      streams.push_back(std::move(s));
    }
    if (streams.empty()) throw std::runtime_error("no trips ingested from " + input);
    return streams;
  }
  const int trips = static_cast<int>(cfg.integer("synth_trips", 10));
  const auto min_samples = static_cast<std::size_t>(cfg.integer("synth_min_samples", 3000));
  const auto max_samples = static_cast<std::size_t>(cfg.integer("synth_max_samples", 6000));
  SynthProfileConfig profile;
  Rng rng = Rng(seed).split(0xC0FFEE);
  return synth_corpus(trips, min_samples, max_samples, profile, rng);
}

// ---- compress ------------------------------------------------------------

int cmd_compress(const CommonArgs& args) {
  const std::string text = read_file(args.config_path);
  Config cfg(text);
  Manifest manifest(args, text);

  const std::uint64_t seed = args.seed.value_or(cfg.u64("seed", 1));
  const int block_len = static_cast<int>(cfg.integer("block_len", 200));
  const double ratio = cfg.num("ratio", 0.2);
  const std::string mode_str = cfg.str("mode", "exact");
  const SampleMode mode = mode_str == "bernoulli" ? SampleMode::Bernoulli : SampleMode::ExactM;
  if (mode_str != "exact" && mode_str != "bernoulli")
    throw ConfigError("mode", "must be exact or bernoulli");

  std::size_t rejected = 0;
  const auto streams = load_streams(cfg, seed, &rejected);
  cfg.check_all_used();

  const Rng master(seed);
  auto summary = manifest.create("compress_summary.csv");
  summary << "trip,samples,blocks,kept_samples\n";
  for (std::size_t i = 0; i < streams.size(); ++i) {
    Rng rng = master.split(i);
    BlockStream bs;
    bs.header = {block_len, ratio, mode_str, seed};
    bs.blocks = capture_stream(streams[i], block_len, ratio, mode, rng);
    long kept = 0;
    for (const auto& b : bs.blocks) kept += b.pattern.kept();
    char name[64];
    std::snprintf(name, sizeof name, "trip_%04zu.blocks", i);
    auto os = manifest.create(name);
    write_block_stream(os, bs);
    summary << i << "," << streams[i].size() << "," << bs.blocks.size() << "," << kept << "\n";
  }
  if (rejected > 0) std::cerr << "ingest: " << rejected << " rows rejected\n";
  manifest.finalize();
  std::cout << "compressed " << streams.size() << " streams -> " << args.out_dir << "\n";
  return 0;
}

// ---- recover -------------------------------------------------------------

int cmd_recover(const CommonArgs& args) {
  const std::string text = read_file(args.config_path);
  Config cfg(text);
  Manifest manifest(args, text);
  const SolverConfig solver = solver_from(cfg);

  std::vector<fs::path> inputs;
  const std::string single = cfg.str("input", "");
  const std::string dir = cfg.str("input_dir", "");
  if (!single.empty()) inputs.emplace_back(single);
  if (!dir.empty()) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".blocks") inputs.push_back(entry.path());
    }
    std::sort(inputs.begin(), inputs.end());
  }
  if (inputs.empty()) throw ConfigError("input", "no block-stream inputs (input= or input_dir=)");
  cfg.check_all_used();

  auto summary = manifest.create("recover_summary.csv");
  summary << "stream,blocks,gap_blocks,degraded_blocks\n";
  for (const auto& path : inputs) {
    const BlockStream bs = read_block_stream_file(path.string());
    const StreamRecovery rec = recover_stream(bs.blocks, solver);
    const std::string stem = path.stem().string();

    auto values = manifest.create(stem + "_recovered.csv");
    values << "index,value\n";
    for (std::size_t i = 0; i < rec.values.size(); ++i) {
      values << i << ",";
      if (!std::isnan(rec.values[i])) values << format_value(rec.values[i]);
      values << "\n";
    }

    auto blocks = manifest.create(stem + "_blocks.csv");
    blocks << "block_seq,block_len,kept,iterations,converged,recovered\n";
    long gaps = 0, degraded = 0;
    for (const auto& b : rec.blocks) {
      blocks << b.block_seq << "," << b.block_len << "," << b.kept << "," << b.iterations << ","
             << (b.converged ? 1 : 0) << "," << (b.recovered ? 1 : 0) << "\n";
      if (!b.recovered) ++gaps;
      if (b.recovered && !b.converged) ++degraded;
    }
    summary << stem << "," << rec.blocks.size() << "," << gaps << "," << degraded << "\n";
  }
  manifest.finalize();
  std::cout << "recovered " << inputs.size() << " streams -> " << args.out_dir << "\n";
  return 0;
}

// ---- bench ---------------------------------------------------------------

int cmd_bench(const CommonArgs& args) {
  const std::string text = read_file(args.config_path);
  Config cfg(text);
  Manifest manifest(args, text);

  const std::uint64_t seed = args.seed.value_or(cfg.u64("seed", 1));
  const SolverConfig solver = solver_from(cfg);
  const auto lens_d = cfg.num_list("block_lens", {100, 200, 500, 1000});
  std::vector<int> block_lens;
  for (double v : lens_d) block_lens.push_back(static_cast<int>(v));
  const auto ratios = cfg.num_list("ratios", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  const int binned_len = static_cast<int>(cfg.integer("binned_block_len", 200));
  const double binned_ratio = cfg.num("binned_ratio", 0.2);

  const auto streams = load_streams(cfg, seed);
  cfg.check_all_used();

  const auto points = bench_recovery(streams, block_lens, ratios, solver, seed);
  {
    auto os = manifest.create("bench.csv");
    write_bench_csv(os, points);
  }
  {
    auto os = manifest.create("bench_timing.csv");
    write_bench_timing_csv(os, points);
  }

  std::vector<Series> rmse_series, time_series;
  for (int n : block_lens) {
    Series sr{"N=" + std::to_string(n), {}};
    Series st{"N=" + std::to_string(n), {}};
    for (const auto& p : points) {
      if (p.block_len != n) continue;
      sr.points.emplace_back(p.ratio, p.rmse);
      st.points.emplace_back(p.ratio, p.mean_ms_per_block);
    }
    rmse_series.push_back(std::move(sr));
    time_series.push_back(std::move(st));
  }
  manifest.put("bench_rmse.svg", line_chart_svg("Recovery error by compression ratio",
                                                "compression ratio (M/N)", "normalized RMSE",
                                                rmse_series));
  manifest.put("bench_time.svg", line_chart_svg("Recovery time by compression ratio",
                                                "compression ratio (M/N)", "ms per block",
                                                time_series));

  // Binned accuracy report at one representative operating point.
  {
    const Rng master = Rng(seed).split(0xB1);
    std::vector<BinnedSample> samples;
    for (std::size_t si = 0; si < streams.size(); ++si) {
      Rng rng = master.split(si);
      const auto blocks = capture_stream(streams[si], binned_len, binned_ratio,
                                         SampleMode::ExactM, rng);
      const auto rec = recover_stream(blocks, solver);
      for (std::size_t i = 0; i < streams[si].size(); ++i) {
        BinnedSample s;
        s.original = s.bin_value = streams[si][i];
        s.recovered_ok = !std::isnan(rec.values[i]);
        s.recovered = s.recovered_ok ? rec.values[i] : 0.0;
        samples.push_back(s);
      }
    }
    const auto report = binned_report(samples, Binning::Speed10Mph);
    auto os = manifest.create("binned_speed.csv");
    write_report_csv(os, report);
  }
  manifest.finalize();
  std::cout << "bench: " << points.size() << " grid points -> " << args.out_dir << "\n";
  return 0;
}

// ---- simulate ------------------------------------------------------------

// Interval-mean speed per (segment, interval) cell; NaN where no data.
std::vector<double> interval_mean_speeds(const SpeedGrid& grid, const Scenario& sc) {
  const int steps_per_interval = sc.n_steps() / sc.n_intervals();
  std::vector<double> cells(static_cast<std::size_t>(sc.n_segments) * sc.n_intervals(),
                            std::numeric_limits<double>::quiet_NaN());
  for (int s = 1; s <= sc.n_segments; ++s) {
    for (int j = 1; j <= sc.n_intervals(); ++j) {
      double sum = 0.0;
      long count = 0;
      for (int step = (j - 1) * steps_per_interval + 1; step <= j * steps_per_interval; ++step) {
        const auto i = grid.at(s, step);
        sum += grid.sum[i];
        count += grid.count[i];
      }
      if (count > 0)
        cells[static_cast<std::size_t>(s - 1) * sc.n_intervals() + (j - 1)] = sum / count;
    }
  }
  return cells;
}

int cmd_simulate(const CommonArgs& args) {
  const std::string text = read_file(args.config_path);
  Config cfg(text);
  Manifest manifest(args, text);

  RunOptions opts;
  opts.solver = solver_from(cfg);
  const bool want_trajectories = cfg.str("write_trajectories", "off") == "on";
  const bool want_uploads = cfg.str("write_uploads", "off") == "on";

  Scenario sc = parse_scenario_text(cfg.remainder_text());
  if (args.seed) sc.seed = *args.seed;

  std::ofstream traj, up_cv, up_cs;
  if (want_trajectories) {
    traj = manifest.create("trajectories.csv");
    opts.trajectories_csv = &traj;
  }
  if (want_uploads) {
    up_cv = manifest.create("uploads_cv.csv");
    up_cs = manifest.create("uploads_cs.csv");
    opts.uploads_cv_csv = &up_cv;
    opts.uploads_cs_csv = &up_cs;
  }

  SimLog log = run_scenario(sc, std::move(opts));

  {
    auto os = manifest.create("detectors.csv");
    os << "segment,time_s,vehicle_id,speed_mph\n";
    for (const auto& d : log.detectors) {
      os << d.segment << "," << format_value(d.time_s) << "," << d.vehicle_id << ","
         << format_value(d.speed_mph) << "\n";
    }
  }

  const auto gr = build_table_probe("GR", log.gr, sc);
  const auto cv = build_table_probe("CV", log.cv, sc);
  const auto cs = build_table_probe("CS", log.cs, sc);
  const auto lp = build_table_lp(log.detectors, sc);
  for (const auto* t : {&gr, &lp, &cv, &cs}) {
    std::string name = "tt_" + t->source + ".csv";
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    auto os = manifest.create(name);
    write_table_csv(os, *t);
  }

  {
    auto os = manifest.create("mape_summary.csv");
    os << "source,mape,cells_used,cells_missing\n";
    for (const auto* t : {&lp, &cv, &cs}) {
      const auto m = mape(*t, gr);
      os << t->source << "," << format_value(m.mape) << "," << m.cells_used << ","
         << m.cells_missing << "\n";
    }
  }

  {
    auto os = manifest.create("sim_summary.csv");
    os << "arrivals_scheduled,entered,exited,cs_blocks_total,cs_blocks_empty,"
          "cs_blocks_degraded,closed_lane_violations\n";
    os << log.arrivals_scheduled << "," << log.entered << "," << log.exited << ","
       << log.cs_blocks_total << "," << log.cs_blocks_empty << "," << log.cs_blocks_degraded
       << "," << log.closed_lane_violations << "\n";
  }

  {
    auto os = manifest.create("vehicles.csv");
    os << "id,is_cv,entry_time_s,exit_time_s,total_ticks,fixed_captured,fixed_evicted,"
          "fixed_uploaded,fixed_flushed,cs_captured,cs_evicted,cs_uploaded,cs_flushed\n";
    for (const auto& v : log.vehicles) {
      os << v.id << "," << (v.is_cv ? 1 : 0) << "," << format_value(v.entry_time_s) << ","
         << format_value(v.exit_time_s) << "," << v.total_ticks << "," << v.fixed_captured << ","
         << v.fixed_evicted << "," << v.fixed_uploaded << "," << v.fixed_flushed << ","
         << v.cs_captured << "," << v.cs_evicted << "," << v.cs_uploaded << "," << v.cs_flushed
         << "\n";
    }
  }

  manifest.put("speed_gr.svg",
               heatmap_svg("Ground-truth interval-mean speed (mph)", "interval", "segment",
                           sc.n_segments, sc.n_intervals(), interval_mean_speeds(log.gr, sc)));
  manifest.put("speed_cs.svg",
               heatmap_svg("Recovered-stream interval-mean speed (mph)", "interval", "segment",
                           sc.n_segments, sc.n_intervals(), interval_mean_speeds(log.cs, sc)));

  manifest.finalize();
  std::cout << "simulate: " << log.entered << " vehicles entered, " << log.exited
            << " exited -> " << args.out_dir << "\n";
  return 0;
}

// ---- sweep ---------------------------------------------------------------

void sweep_charts(Manifest& manifest, const std::vector<SweepAggregate>& aggs) {
  // MAPE vs capacity: one CV and one CS series per (rate, ratio) combo.
  std::map<std::string, Series> cv_series, cs_series;
  for (const auto& a : aggs) {
    const std::string combo =
        std::to_string(a.rate_hz) + " Hz, q=" + format_value(a.ratio);
    cv_series["CV " + combo].points.emplace_back(a.capacity, a.mean_cv);
    cs_series["CS " + combo].points.emplace_back(a.capacity, a.mean_cs);
  }
  std::vector<Series> lines;
  for (auto& [label, s] : cv_series) {
    s.label = label;
    std::sort(s.points.begin(), s.points.end());
    lines.push_back(std::move(s));
  }
  for (auto& [label, s] : cs_series) {
    s.label = label;
    std::sort(s.points.begin(), s.points.end());
    lines.push_back(std::move(s));
  }
  manifest.put("mape_vs_capacity.svg",
               line_chart_svg("Travel-time MAPE vs buffer capacity", "buffer capacity (snapshots)",
                              "mean MAPE", lines));

  BarSeries bar_cv{"CV", {}}, bar_cs{"CS", {}};
  for (const auto& a : aggs) {
    bar_cv.entries.push_back({a.key, a.mean_cv, a.std_cv});
    bar_cs.entries.push_back({a.key, a.mean_cs, a.std_cs});
  }
  manifest.put("mape_bars.svg",
               bar_chart_svg("Mean MAPE by rate-ratio-capacity", "mean MAPE", {bar_cv, bar_cs}));
}

int cmd_sweep(const CommonArgs& args) {
  const std::string text = read_file(args.config_path);
  Config cfg(text);
  Manifest manifest(args, text);

  const int workers = static_cast<int>(cfg.integer("workers", 0));
  SweepGrid grid = parse_sweep_text(cfg.remainder_text());
  if (args.seed) grid.master_seed = *args.seed;

  const SweepResult result = run_sweep(grid, workers);
  {
    auto os = manifest.create("sweep_rows.csv");
    write_sweep_rows_csv(os, result);
  }
  {
    auto os = manifest.create("sweep_aggregates.csv");
    write_sweep_aggregates_csv(os, result);
  }
  sweep_charts(manifest, result.aggregates);
  manifest.finalize();

  long failed = 0;
  for (const auto& r : result.rows) failed += r.failed ? 1 : 0;
  std::cout << "sweep: " << result.rows.size() << " runs (" << failed << " failed), "
            << result.aggregates.size() << " grid points -> " << args.out_dir << "\n";
  return failed == 0 ? 0 : 1;
}

// ---- report --------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw std::runtime_error("report error: missing column '" + name + "'");
  }
};

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open results file: " + path);
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!s.empty() && s.back() == ',') out.push_back("");
    return out;
  };
  if (!std::getline(is, line)) throw std::runtime_error("report error: empty file " + path);
  t.header = split(line);
  while (std::getline(is, line)) {
    if (!line.empty()) t.rows.push_back(split(line));
  }
  if (t.rows.empty()) throw std::runtime_error("report error: no data rows in " + path);
  return t;
}

int cmd_report(const CommonArgs& args) {
  const std::string text = read_file(args.config_path);
  Config cfg(text);
  Manifest manifest(args, text);

  const std::string aggregates = cfg.str("aggregates", "");
  const std::string table = cfg.str("table", "");
  if (aggregates.empty() && table.empty())
    throw ConfigError("aggregates", "nothing to report (need aggregates= or table=)");
  cfg.check_all_used();

  if (!aggregates.empty()) {
    const CsvTable t = read_csv(aggregates);
    const int c_key = t.column("key");
    const int c_rate = t.column("rate_hz");
    const int c_ratio = t.column("ratio");
    const int c_cap = t.column("capacity");
    const int c_cv = t.column("mean_mape_cv");
    const int c_cs = t.column("mean_mape_cs");
    const int c_scv = t.column("std_mape_cv");
    const int c_scs = t.column("std_mape_cs");
    std::vector<SweepAggregate> aggs;
    for (const auto& row : t.rows) {
      SweepAggregate a;
      a.key = row[c_key];
      a.rate_hz = std::stoi(row[c_rate]);
      a.ratio = std::stod(row[c_ratio]);
      a.capacity = std::stoi(row[c_cap]);
      a.mean_cv = std::stod(row[c_cv]);
      a.mean_cs = std::stod(row[c_cs]);
      a.std_cv = std::stod(row[c_scv]);
      a.std_cs = std::stod(row[c_scs]);
      aggs.push_back(std::move(a));
    }
    sweep_charts(manifest, aggs);
  }

  if (!table.empty()) {
    const CsvTable t = read_csv(table);
    const int c_src = t.column("source");
    const int c_seg = t.column("segment");
    const int c_int = t.column("interval");
    const int c_tt = t.column("tt_s");
    int n_seg = 0, n_int = 0;
    for (const auto& row : t.rows) {
      n_seg = std::max(n_seg, std::stoi(row[c_seg]));
      n_int = std::max(n_int, std::stoi(row[c_int]));
    }
    std::vector<double> cells(static_cast<std::size_t>(n_seg) * n_int,
                              std::numeric_limits<double>::quiet_NaN());
    std::string source = t.rows.front()[c_src];
    for (const auto& row : t.rows) {
      if (row[c_tt].empty()) continue;
      const int s = std::stoi(row[c_seg]);
      const int j = std::stoi(row[c_int]);
      cells[static_cast<std::size_t>(s - 1) * n_int + (j - 1)] = std::stod(row[c_tt]);
    }
    manifest.put("tt_heatmap.svg",
                 heatmap_svg("Segment travel time (s), source " + source, "interval", "segment",
                             n_seg, n_int, cells));
  }

  manifest.finalize();
  std::cout << "report -> " << args.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed capture of vehicle speed streams: codec, corridor "
               "simulation, and travel-time evaluation"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const CommonArgs&);
    CommonArgs args;
  };
  Sub subs[] = {
      {"compress", "Subsample speed streams into block-stream files", cmd_compress, {}},
      {"recover", "Reconstruct block-stream files", cmd_recover, {}},
      {"bench", "Block-size / ratio recovery benchmark", cmd_bench, {}},
      {"simulate", "Run one corridor scenario", cmd_simulate, {}},
      {"sweep", "Run a scenario grid with replications", cmd_sweep, {}},
      {"report", "Render charts from result CSVs", cmd_report, {}},
  };
  for (auto& sub : subs) {
    auto* cmd = app.add_subcommand(sub.name, sub.help);
    cmd->add_option("config", sub.args.config_path, "key=value config file")->required();
    cmd->add_option("--seed", sub.args.seed, "override the config seed");
    cmd->add_option("--out-dir", sub.args.out_dir, "output directory (default: out)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& sub : subs) {
      if (app.get_subcommand(sub.name)->parsed()) return sub.fn(sub.args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
