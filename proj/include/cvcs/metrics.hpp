#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cvcs {

// ||x_o - x_hat||_2 / ||x_o||_2. Throws on length mismatch or zero
// reference norm (the metric is undefined there).
double rmse_normalized(std::span<const double> x_o, std::span<const double> x_hat);
double rmse_normalized(const Eigen::VectorXd& x_o, const Eigen::VectorXd& x_hat);

// Count of coefficients with |a_j| > threshold.
int sparsity_count(const Eigen::VectorXd& coeffs, double threshold);

enum class Binning {
  Speed10Mph,       // 8 bins, 10 mph apart, clamped to [0, 80)
  YawRate60Deg,     // 12 bins covering [-360, 360)
  Confidence10Pct,  // 10 bins covering [0, 100]
};

struct BinnedSample {
  double original = 0.0;
  double recovered = 0.0;
  double bin_value = 0.0;   // attribute the record is binned by (original value)
  bool recovered_ok = true;  // false for samples lost to unrecoverable blocks
};

struct RecoveryReport {
  struct Bin {
    std::string label;
    std::size_t count = 0;
    std::optional<double> rmse;  // absent when the bin is empty
  };
  double overall_rmse = 0.0;
  std::vector<Bin> per_bin;
  double unrecoverable_fraction = 0.0;
};

// Per-bin normalized RMSE; each bin is scored as its own data series so
// bins with very different sample counts stay comparable. Bin membership
// is decided by the original value; edges are left-closed.
RecoveryReport binned_report(std::span<const BinnedSample> samples, Binning binning);

int bin_index(Binning binning, double value);
std::string bin_label(Binning binning, int index);
int bin_count(Binning binning);

// CSV rows `bin,count,rmse` plus a trailing `overall,...` row.
void write_report_csv(std::ostream& os, const RecoveryReport& report);

}  // namespace cvcs
