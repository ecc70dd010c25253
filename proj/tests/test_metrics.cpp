#include <sstream>
#include <vector>

#include "doctest.h"

#include "cvcs/metrics.hpp"

using namespace cvcs;

TEST_SUITE("metrics") {

TEST_CASE("normalized error on hand-computed values") {
  const std::vector<double> ref{2.0, 0.0};
  const std::vector<double> zero{0.0, 0.0};
  CHECK(rmse_normalized(ref, zero) == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> five{5.0};
  const std::vector<double> one{1.0};
  CHECK(rmse_normalized(five, one) == doctest::Approx(0.8).epsilon(1e-12));

  CHECK(rmse_normalized(ref, ref) == 0.0);
}

TEST_CASE("normalized error is scale invariant") {
  const std::vector<double> ref{1.0, -2.0, 3.0, 0.5};
  const std::vector<double> est{1.1, -1.9, 2.8, 0.6};
  std::vector<double> ref_s, est_s;
  for (double v : ref) ref_s.push_back(17.5 * v);
  for (double v : est) est_s.push_back(17.5 * v);
  CHECK(rmse_normalized(ref_s, est_s) == doctest::Approx(rmse_normalized(ref, est)).epsilon(1e-12));
}

TEST_CASE("degenerate inputs are rejected") {
  const std::vector<double> a{1.0, 2.0};
  const std::vector<double> b{1.0};
  CHECK_THROWS_AS(rmse_normalized(a, b), std::invalid_argument);
  const std::vector<double> z{0.0, 0.0};
  CHECK_THROWS_AS(rmse_normalized(z, a), std::domain_error);
}

TEST_CASE("sparsity counting") {
  Eigen::VectorXd a(5);
  a << 0.0, 0.5, -0.01, 2.0, -3.0;
  CHECK(sparsity_count(a, 0.1) == 3);
  CHECK(sparsity_count(a, 2.5) == 1);
  CHECK_THROWS_AS(sparsity_count(a, 0.0), std::invalid_argument);
}

TEST_CASE("bin edges are left-closed and clamped") {
  CHECK(bin_index(Binning::Speed10Mph, 0.0) == 0);
  CHECK(bin_index(Binning::Speed10Mph, 9.999) == 0);
  CHECK(bin_index(Binning::Speed10Mph, 10.0) == 1);
  CHECK(bin_index(Binning::Speed10Mph, 79.0) == 7);
  CHECK(bin_index(Binning::Speed10Mph, 500.0) == 7);   // clamp high
  CHECK(bin_index(Binning::Speed10Mph, -1.0) == 0);    // clamp low
  CHECK(bin_index(Binning::YawRate60Deg, -360.0) == 0);
  CHECK(bin_index(Binning::YawRate60Deg, 0.0) == 6);
  CHECK(bin_index(Binning::YawRate60Deg, 359.9) == 11);
  CHECK(bin_index(Binning::Confidence10Pct, 100.0) == 9);
  CHECK(bin_count(Binning::Speed10Mph) == 8);
  CHECK(bin_count(Binning::YawRate60Deg) == 12);
  CHECK(bin_count(Binning::Confidence10Pct) == 10);
}

TEST_CASE("single occupied bin scores the same as overall") {
  std::vector<BinnedSample> samples;
  for (int i = 0; i < 10; ++i) {
    BinnedSample s;
    s.original = s.bin_value = 35.0 + 0.1 * i;  // all in the 30-40 bin
    s.recovered = s.original + 0.5;
    samples.push_back(s);
  }
  const auto report = binned_report(samples, Binning::Speed10Mph);
  REQUIRE(report.per_bin.size() == 8);
  const auto& bin = report.per_bin[3];
  CHECK(bin.count == 10);
  REQUIRE(bin.rmse.has_value());
  CHECK(*bin.rmse == doctest::Approx(report.overall_rmse).epsilon(1e-12));
  for (int b = 0; b < 8; ++b) {
    if (b != 3) CHECK_FALSE(report.per_bin[b].rmse.has_value());
  }
  CHECK(report.unrecoverable_fraction == 0.0);
}

TEST_CASE("unrecoverable samples are excluded and counted") {
  std::vector<BinnedSample> samples(4);
  for (int i = 0; i < 4; ++i) {
    samples[i].original = samples[i].bin_value = 20.0;
    samples[i].recovered = 20.0;
  }
  samples[3].recovered_ok = false;
  const auto report = binned_report(samples, Binning::Speed10Mph);
  CHECK(report.unrecoverable_fraction == doctest::Approx(0.25));
  CHECK(report.per_bin[2].count == 3);
  CHECK(report.overall_rmse == 0.0);
}

TEST_CASE("report CSV shape") {
  std::vector<BinnedSample> samples(1);
  samples[0].original = samples[0].bin_value = 5.0;
  samples[0].recovered = 4.0;
  const auto report = binned_report(samples, Binning::Speed10Mph);
  std::ostringstream os;
  write_report_csv(os, report);
  const std::string text = os.str();
  CHECK(text.rfind("bin,count,rmse\n", 0) == 0);
  CHECK(text.find("overall,1,0.2\n") != std::string::npos);
}

}  // TEST_SUITE
