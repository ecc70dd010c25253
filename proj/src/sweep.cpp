#include "cvcs/sweep.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cvcs/block_io.hpp"
#include "cvcs/rng.hpp"
#include "cvcs/tt_estimation.hpp"
#include "cvcs/traffic_sim.hpp"

namespace cvcs {

const char* arrival_name(ArrivalPattern p) {
  return p == ArrivalPattern::Constant ? "constant" : "varying";
}

void SweepGrid::validate() const {
  if (obu_capacities.empty() || rates_hz.empty() || ratios.empty() || mprs.empty() ||
      arrivals.empty())
    throw ConfigError("sweep", "empty grid axis");
  if (replications < 1) throw ConfigError("replications", "must be >= 1");
}

namespace {

SweepRow run_one(const SweepGrid& grid, const SweepRow& params) {
  SweepRow row = params;
  try {
    Scenario sc = grid.base;
    sc.obu_capacity = row.capacity;
    sc.capture_rate_hz = row.rate_hz;
    sc.compression_ratio = row.ratio;
    sc.mpr = row.mpr;
    sc.arrival_pattern = row.arrival;
    sc.seed = row.seed;

    RunOptions opts;
    opts.solver = grid.solver;
    SimLog log = run_scenario(sc, std::move(opts));

    const auto gr = build_table_probe("GR", log.gr, sc);
    const auto cv = build_table_probe("CV", log.cv, sc);
    const auto cs = build_table_probe("CS", log.cs, sc);
    const auto lp = build_table_lp(log.detectors, sc);

    const auto m_lp = mape(lp, gr);
    const auto m_cv = mape(cv, gr);
    const auto m_cs = mape(cs, gr);
    row.mape_lp = m_lp.mape;
    row.mape_cv = m_cv.mape;
    row.mape_cs = m_cs.mape;
    row.missing_lp = m_lp.cells_missing;
    row.missing_cv = m_cv.cells_missing;
    row.missing_cs = m_cs.cells_missing;
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

double stddev(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / (xs.size() - 1));
}

}  // namespace

SweepResult run_sweep(const SweepGrid& grid, int workers) {
  grid.validate();

  std::vector<SweepRow> jobs;
  Rng master(grid.master_seed);
  std::uint64_t scenario_index = 0;
  for (ArrivalPattern arr : grid.arrivals) {
    for (double mpr : grid.mprs) {
      for (int rate : grid.rates_hz) {
        for (double ratio : grid.ratios) {
          for (int cap : grid.obu_capacities) {
            for (int rep = 1; rep <= grid.replications; ++rep) {
              SweepRow r;
              r.capacity = cap;
              r.rate_hz = rate;
              r.ratio = ratio;
              r.mpr = mpr;
              r.arrival = arr;
              r.replication = rep;
              r.seed = master.split(scenario_index).split(static_cast<std::uint64_t>(rep)).next_u64();
              jobs.push_back(r);
            }
            ++scenario_index;
          }
        }
      }
    }
  }

#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#else
  (void)workers;
#endif

  SweepResult result;
  result.rows.resize(jobs.size());
  const long n = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    result.rows[static_cast<std::size_t>(i)] = run_one(grid, jobs[static_cast<std::size_t>(i)]);
  }

  // Aggregate by grid point, in job order.
  for (std::size_t i = 0; i < result.rows.size(); i += grid.replications) {
    SweepAggregate agg;
    const auto& first = result.rows[i];
    agg.capacity = first.capacity;
    agg.rate_hz = first.rate_hz;
    agg.ratio = first.ratio;
    agg.mpr = first.mpr;
    agg.arrival = first.arrival;
    agg.key = std::to_string(first.rate_hz) + "-" + format_value(first.ratio) + "-" +
              std::to_string(first.capacity);
    std::vector<double> lp, cv, cs;
    for (int rep = 0; rep < grid.replications; ++rep) {
      const auto& r = result.rows[i + rep];
      if (r.failed) continue;
      lp.push_back(r.mape_lp);
      cv.push_back(r.mape_cv);
      cs.push_back(r.mape_cs);
    }
    agg.runs = static_cast<int>(lp.size());
    auto mean = [](const std::vector<double>& xs) {
      double s = 0.0;
      for (double x : xs) s += x;
      return xs.empty() ? 0.0 : s / xs.size();
    };
    agg.mean_lp = mean(lp);
    agg.mean_cv = mean(cv);
    agg.mean_cs = mean(cs);
    agg.std_lp = stddev(lp, agg.mean_lp);
    agg.std_cv = stddev(cv, agg.mean_cv);
    agg.std_cs = stddev(cs, agg.mean_cs);
    agg.relative_reduction =
        agg.mean_cv > 0.0 ? (agg.mean_cv - agg.mean_cs) / agg.mean_cv : 0.0;
    result.aggregates.push_back(std::move(agg));
  }
  return result;
}

void write_sweep_rows_csv(std::ostream& os, const SweepResult& result) {
  os << "arrival,mpr,rate_hz,ratio,capacity,replication,seed,mape_lp,mape_cv,mape_cs,"
        "missing_lp,missing_cv,missing_cs,failed,error\n";
  for (const auto& r : result.rows) {
    os << arrival_name(r.arrival) << "," << format_value(r.mpr) << "," << r.rate_hz << ","
       << format_value(r.ratio) << "," << r.capacity << "," << r.replication << "," << r.seed
       << "," << format_value(r.mape_lp) << "," << format_value(r.mape_cv) << ","
       << format_value(r.mape_cs) << "," << r.missing_lp << "," << r.missing_cv << ","
       << r.missing_cs << "," << (r.failed ? 1 : 0) << "," << r.error << "\n";
  }
}

void write_sweep_aggregates_csv(std::ostream& os, const SweepResult& result) {
  os << "key,arrival,mpr,rate_hz,ratio,capacity,runs,mean_mape_lp,std_mape_lp,mean_mape_cv,"
        "std_mape_cv,mean_mape_cs,std_mape_cs,relative_reduction\n";
  for (const auto& a : result.aggregates) {
    os << a.key << "," << arrival_name(a.arrival) << "," << format_value(a.mpr) << ","
       << a.rate_hz << "," << format_value(a.ratio) << "," << a.capacity << "," << a.runs << ","
       << format_value(a.mean_lp) << "," << format_value(a.std_lp) << ","
       << format_value(a.mean_cv) << "," << format_value(a.std_cv) << ","
       << format_value(a.mean_cs) << "," << format_value(a.std_cs) << ","
       << format_value(a.relative_reduction) << "\n";
  }
}

namespace {

template <typename T, typename F>
std::vector<T> parse_list(const std::string& key, const std::string& val, F parse_one) {
  std::vector<T> out;
  std::istringstream ss(val);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(parse_one(item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

}  // namespace

SweepGrid parse_sweep_text(const std::string& text) {
  SweepGrid g;
  for (const auto& [key, val] : parse_kv_text(text)) {
    if (key == "obu_capacities") {
      g.obu_capacities = parse_list<int>(key, val, [](const std::string& s) { return std::stoi(s); });
    } else if (key == "rates_hz") {
      g.rates_hz = parse_list<int>(key, val, [](const std::string& s) { return std::stoi(s); });
    } else if (key == "ratios") {
      g.ratios = parse_list<double>(key, val, [](const std::string& s) { return std::stod(s); });
    } else if (key == "mprs") {
      g.mprs = parse_list<double>(key, val, [](const std::string& s) { return std::stod(s); });
    } else if (key == "arrival_patterns") {
      g.arrivals = parse_list<ArrivalPattern>(key, val, [&](const std::string& s) {
        if (s == "constant") return ArrivalPattern::Constant;
        if (s == "varying") return ArrivalPattern::Varying;
        throw ConfigError(key, "must be constant or varying");
      });
    } else if (key == "replications") {
      g.replications = std::stoi(val);
    } else if (key == "master_seed") {
      g.master_seed = std::stoull(val);
    } else if (key == "lane_closure") {
      g.base.closure.enabled = (val == "on");
    } else if (key == "solver_max_iters") {
      g.solver.max_iters = std::stoi(val);
    } else if (key == "solver_tol") {
      g.solver.primal_tol = g.solver.dual_tol = std::stod(val);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  g.validate();
  return g;
}

SweepGrid load_sweep_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open sweep file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_sweep_text(ss.str());
}

}  // namespace cvcs
