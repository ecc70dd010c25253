#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cvcs/scenario.hpp"
#include "cvcs/solver.hpp"

namespace cvcs {

struct SweepGrid {
  std::vector<int> obu_capacities = {50, 100, 150, 200, 250, 300};
  std::vector<int> rates_hz = {1, 10};
  std::vector<double> ratios = {0.2, 0.5};
  std::vector<double> mprs = {0.6};
  std::vector<ArrivalPattern> arrivals = {ArrivalPattern::Constant};
  int replications = 5;
  std::uint64_t master_seed = 1;
  Scenario base;       // everything the axes do not override
  SolverConfig solver;

  void validate() const;
  std::size_t points() const {
    return obu_capacities.size() * rates_hz.size() * ratios.size() * mprs.size() *
           arrivals.size();
  }
};

struct SweepRow {
  int capacity = 0;
  int rate_hz = 0;
  double ratio = 0.0;
  double mpr = 0.0;
  ArrivalPattern arrival = ArrivalPattern::Constant;
  int replication = 0;
  std::uint64_t seed = 0;
  double mape_lp = 0.0, mape_cv = 0.0, mape_cs = 0.0;
  int missing_lp = 0, missing_cv = 0, missing_cs = 0;
  bool failed = false;
  std::string error;
};

struct SweepAggregate {
  int capacity = 0;
  int rate_hz = 0;
  double ratio = 0.0;
  double mpr = 0.0;
  ArrivalPattern arrival = ArrivalPattern::Constant;
  std::string key;  // "rate-ratio-capacity"
  int runs = 0;
  double mean_lp = 0.0, std_lp = 0.0;
  double mean_cv = 0.0, std_cv = 0.0;
  double mean_cs = 0.0, std_cs = 0.0;
  double relative_reduction = 0.0;  // (mean_cv - mean_cs) / mean_cv
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepAggregate> aggregates;
};

// Run every grid point x replication; per-run failures are recorded in
// the row and the sweep continues. Grid points run in parallel up to
// `workers` (0 = all available).
SweepResult run_sweep(const SweepGrid& grid, int workers = 0);

void write_sweep_rows_csv(std::ostream& os, const SweepResult& result);
void write_sweep_aggregates_csv(std::ostream& os, const SweepResult& result);

SweepGrid parse_sweep_text(const std::string& text);
SweepGrid load_sweep_file(const std::string& path);

const char* arrival_name(ArrivalPattern p);

}  // namespace cvcs
