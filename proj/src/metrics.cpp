#include "cvcs/metrics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cvcs/block_io.hpp"

namespace cvcs {

double rmse_normalized(std::span<const double> x_o, std::span<const double> x_hat) {
  if (x_o.size() != x_hat.size())
    throw std::invalid_argument("rmse_normalized: length mismatch");
  double ref = 0.0, err = 0.0;
  for (std::size_t i = 0; i < x_o.size(); ++i) {
    ref += x_o[i] * x_o[i];
    const double d = x_o[i] - x_hat[i];
    err += d * d;
  }
  if (ref == 0.0) throw std::domain_error("rmse_normalized: zero reference norm");
  return std::sqrt(err / ref);
}

double rmse_normalized(const Eigen::VectorXd& x_o, const Eigen::VectorXd& x_hat) {
  return rmse_normalized(std::span<const double>(x_o.data(), x_o.size()),
                         std::span<const double>(x_hat.data(), x_hat.size()));
}

int sparsity_count(const Eigen::VectorXd& coeffs, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("sparsity_count: threshold must be > 0");
  int n = 0;
  for (int i = 0; i < coeffs.size(); ++i) {
    if (std::abs(coeffs[i]) > threshold) ++n;
  }
  return n;
}

int bin_count(Binning binning) {
  switch (binning) {
    case Binning::Speed10Mph: return 8;
    case Binning::YawRate60Deg: return 12;
    case Binning::Confidence10Pct: return 10;
  }
  return 0;
}

int bin_index(Binning binning, double value) {
  int idx = 0;
  switch (binning) {
    case Binning::Speed10Mph: idx = static_cast<int>(std::floor(value / 10.0)); break;
    case Binning::YawRate60Deg: idx = static_cast<int>(std::floor((value + 360.0) / 60.0)); break;
    case Binning::Confidence10Pct: idx = static_cast<int>(std::floor(value / 10.0)); break;
  }
  const int n = bin_count(binning);
  return std::min(std::max(idx, 0), n - 1);
}

std::string bin_label(Binning binning, int index) {
  switch (binning) {
    case Binning::Speed10Mph:
      if (index == 0) return "0-10";
      return std::to_string(index * 10 + 1) + "-" + std::to_string((index + 1) * 10);
    case Binning::YawRate60Deg: {
      const int lo = -360 + index * 60;
      return "[" + std::to_string(lo) + "," + std::to_string(lo + 60) + ")";
    }
    case Binning::Confidence10Pct:
      return std::to_string(index * 10) + "-" + std::to_string((index + 1) * 10) + "%";
  }
  return "?";
}

RecoveryReport binned_report(std::span<const BinnedSample> samples, Binning binning) {
  const int nbins = bin_count(binning);
  std::vector<double> ref(nbins, 0.0), err(nbins, 0.0);
  std::vector<std::size_t> count(nbins, 0);

  double ref_all = 0.0, err_all = 0.0;
  std::size_t lost = 0;
  for (const auto& s : samples) {
    if (!s.recovered_ok) {
      ++lost;
      continue;
    }
    const int b = bin_index(binning, s.bin_value);
    const double d = s.original - s.recovered;
    ref[b] += s.original * s.original;
    err[b] += d * d;
    ++count[b];
    ref_all += s.original * s.original;
    err_all += d * d;
  }

  RecoveryReport report;
  report.overall_rmse = ref_all > 0.0 ? std::sqrt(err_all / ref_all) : 0.0;
  report.unrecoverable_fraction =
      samples.empty() ? 0.0 : static_cast<double>(lost) / static_cast<double>(samples.size());
  for (int b = 0; b < nbins; ++b) {
    RecoveryReport::Bin bin;
    bin.label = bin_label(binning, b);
    bin.count = count[b];
    if (count[b] > 0 && ref[b] > 0.0) bin.rmse = std::sqrt(err[b] / ref[b]);
    report.per_bin.push_back(std::move(bin));
  }
  return report;
}

void write_report_csv(std::ostream& os, const RecoveryReport& report) {
  os << "bin,count,rmse\n";
  for (const auto& b : report.per_bin) {
    os << b.label << "," << b.count << ",";
    if (b.rmse) os << format_value(*b.rmse);
    os << "\n";
  }
  std::size_t total = 0;
  for (const auto& b : report.per_bin) total += b.count;
  os << "overall," << total << "," << format_value(report.overall_rmse) << "\n";
}

}  // namespace cvcs
