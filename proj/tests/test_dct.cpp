#include <cmath>

#include "doctest.h"

#include "cvcs/dct.hpp"
#include "cvcs/rng.hpp"

using namespace cvcs;

namespace {

// Independent construction of the synthesis matrix, entry by entry, with
// no shared code with the implementation under test.
Eigen::MatrixXd reference_synthesis_matrix(int n) {
  Eigen::MatrixXd psi(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double k = j == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
      psi(i, j) = k * std::cos(M_PI * j * (i + 0.5) / n);
    }
  }
  return psi;
}

Eigen::VectorXd random_vector(int n, Rng& rng) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = 2.0 * rng.uniform() - 1.0;
  return x;
}

}  // namespace

TEST_SUITE("dct") {

TEST_CASE("synthesis matrix matches the entrywise reference") {
  for (int n : {4, 16, 100, 200}) {
    const Eigen::MatrixXd diff = idct_matrix(n) - reference_synthesis_matrix(n);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("basis is orthonormal") {
  for (int n : {4, 16, 100, 200}) {
    const auto& psi = idct_matrix(n);
    const Eigen::MatrixXd gram = psi.transpose() * psi;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    CHECK((gram - eye).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("analysis and synthesis are inverse") {
  Rng rng(11);
  for (int n : {4, 16, 100, 200}) {
    for (int rep = 0; rep < 10; ++rep) {
      const Eigen::VectorXd x = random_vector(n, rng);
      const Eigen::VectorXd back = idct(dct_forward(x));
      CHECK((x - back).norm() / x.norm() < 1e-12);
    }
  }
}

TEST_CASE("transform preserves the l2 norm") {
  Rng rng(12);
  for (int n : {16, 100}) {
    const Eigen::VectorXd x = random_vector(n, rng);
    CHECK(dct_forward(x).norm() == doctest::Approx(x.norm()).epsilon(1e-12));
  }
}

TEST_CASE("constant signal concentrates on the first coefficient") {
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(100, 3.0);
  const Eigen::VectorXd a = dct_forward(x);
  CHECK(a[0] == doctest::Approx(3.0 * std::sqrt(100.0)));
  CHECK(a.tail(99).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("empty input is rejected") {
  CHECK_THROWS_AS(dct_forward(Eigen::VectorXd()), std::invalid_argument);
  CHECK_THROWS_AS(idct(Eigen::VectorXd()), std::invalid_argument);
}

}  // TEST_SUITE
