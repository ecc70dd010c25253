#include "cvcs/tt_estimation.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cvcs/block_io.hpp"

namespace cvcs {

double space_mean_speed_harmonic(std::span<const double> speeds_mph, double v_floor_mph) {
  if (speeds_mph.empty())
    throw std::invalid_argument("space_mean_speed_harmonic: no observations");
  double inv_sum = 0.0;
  for (double v : speeds_mph) inv_sum += 1.0 / std::max(v, v_floor_mph);
  return static_cast<double>(speeds_mph.size()) / inv_sum;
}

std::optional<double> space_mean_speed_probe(std::span<const std::optional<double>> step_means,
                                             bool strict) {
  double sum = 0.0;
  long nonempty = 0;
  for (const auto& m : step_means) {
    if (m) {
      sum += *m;
      ++nonempty;
    }
  }
  if (nonempty == 0) return std::nullopt;
  const long denom = strict ? static_cast<long>(step_means.size()) : nonempty;
  return sum / static_cast<double>(denom);
}

namespace {

std::optional<TtCell> cell_from_speed(std::optional<double> vbar_mph, long support,
                                      double segment_len_mi) {
  if (!vbar_mph || !(*vbar_mph > 0.0)) return std::nullopt;
  return TtCell{segment_len_mi / *vbar_mph * 3600.0, support};
}

}  // namespace

TravelTimeTable build_table_probe(const std::string& source, const SpeedGrid& grid,
                                  const Scenario& sc, const ProbeTableOptions& opts) {
  TravelTimeTable table;
  table.source = source;
  table.n_segments = sc.n_segments;
  table.n_intervals = sc.n_intervals();
  table.cells.resize(static_cast<std::size_t>(sc.n_segments) * sc.n_intervals());

  const int steps_per_interval = static_cast<int>(sc.interval_s / grid.dt + 0.5);
  std::vector<std::optional<double>> means(static_cast<std::size_t>(steps_per_interval));
  for (int s = 1; s <= sc.n_segments; ++s) {
    for (int j = 1; j <= sc.n_intervals(); ++j) {
      long support = 0;
      for (int i = 0; i < steps_per_interval; ++i) {
        const int step = (j - 1) * steps_per_interval + i + 1;
        const auto idx = grid.at(s, step);
        if (grid.count[idx] > 0) {
          means[static_cast<std::size_t>(i)] = grid.sum[idx] / grid.count[idx];
          support += grid.count[idx];
        } else {
          means[static_cast<std::size_t>(i)] = std::nullopt;
        }
      }
      table.cell(s, j) = cell_from_speed(
          space_mean_speed_probe(means, opts.strict_step_average), support, sc.segment_len_mi);
    }
  }
  return table;
}

TravelTimeTable build_table_lp(std::span<const DetectorRecord> records, const Scenario& sc,
                               double v_floor_mph) {
  TravelTimeTable table;
  table.source = "LP";
  table.n_segments = sc.n_segments;
  table.n_intervals = sc.n_intervals();
  table.cells.resize(static_cast<std::size_t>(sc.n_segments) * sc.n_intervals());

  std::vector<std::vector<double>> grouped(
      static_cast<std::size_t>(sc.n_segments) * sc.n_intervals());
  for (const auto& r : records) {
    if (r.segment < 1 || r.segment > sc.n_segments) continue;
    const int j = sc.interval_of_time(r.time_s);
    grouped[static_cast<std::size_t>(r.segment - 1) * sc.n_intervals() + (j - 1)].push_back(
        r.speed_mph);
  }
  for (int s = 1; s <= sc.n_segments; ++s) {
    for (int j = 1; j <= sc.n_intervals(); ++j) {
      const auto& speeds = grouped[static_cast<std::size_t>(s - 1) * sc.n_intervals() + (j - 1)];
      if (speeds.empty()) continue;
      table.cell(s, j) =
          cell_from_speed(space_mean_speed_harmonic(speeds, v_floor_mph),
                          static_cast<long>(speeds.size()), sc.segment_len_mi);
    }
  }
  return table;
}

MapeResult mape(const TravelTimeTable& estimate, const TravelTimeTable& ground_truth,
                int first_segment, int first_interval) {
  if (estimate.n_segments != ground_truth.n_segments ||
      estimate.n_intervals != ground_truth.n_intervals) {
    throw std::invalid_argument("mape: table shapes differ");
  }
  MapeResult result;
  double sum = 0.0;
  for (int s = first_segment; s <= ground_truth.n_segments; ++s) {
    for (int j = first_interval; j <= ground_truth.n_intervals; ++j) {
      const auto& gr = ground_truth.cell(s, j);
      if (!gr) {
        throw std::runtime_error("mape: ground truth missing at segment " + std::to_string(s) +
                                 ", interval " + std::to_string(j));
      }
      const auto& est = estimate.cell(s, j);
      if (!est) {
        ++result.cells_missing;
        continue;
      }
      sum += std::abs(est->tt_s - gr->tt_s) / gr->tt_s;
      ++result.cells_used;
    }
  }
  if (result.cells_used > 0) {
    result.mape = sum / result.cells_used;
    result.defined = true;
  }
  return result;
}

void write_table_csv(std::ostream& os, const TravelTimeTable& table) {
  os << "source,segment,interval,tt_s,support\n";
  for (int s = 1; s <= table.n_segments; ++s) {
    for (int j = 1; j <= table.n_intervals; ++j) {
      os << table.source << "," << s << "," << j << ",";
      const auto& c = table.cell(s, j);
      if (c) os << format_value(c->tt_s) << "," << c->support;
      else os << ",";
      os << "\n";
    }
  }
}

}  // namespace cvcs
