#include "cvcs/dct.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace cvcs {

namespace {

std::mutex g_cache_mutex;
std::map<int, std::unique_ptr<Eigen::MatrixXd>> g_cache;

Eigen::MatrixXd build_idct(int n) {
  Eigen::MatrixXd psi(n, n);
  const double k0 = 1.0 / std::sqrt(static_cast<double>(n));
  const double kj = std::sqrt(2.0 / static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    const double scale = (j == 0) ? k0 : kj;
    for (int i = 0; i < n; ++i) {
      psi(i, j) = scale * std::cos(M_PI * j * (i + 0.5) / n);
    }
  }
  return psi;
}

}  // namespace

const Eigen::MatrixXd& idct_matrix(int n) {
  if (n < 1) throw std::invalid_argument("idct_matrix: n must be >= 1");
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_cache.find(n);
  if (it == g_cache.end()) {
    it = g_cache.emplace(n, std::make_unique<Eigen::MatrixXd>(build_idct(n))).first;
  }
  return *it->second;
}

Eigen::VectorXd dct_forward(const Eigen::VectorXd& x) {
  if (x.size() == 0) throw std::invalid_argument("dct_forward: empty input");
  const auto& psi = idct_matrix(static_cast<int>(x.size()));
  return psi.transpose() * x;
}

Eigen::VectorXd idct(const Eigen::VectorXd& coeffs) {
  if (coeffs.size() == 0) throw std::invalid_argument("idct: empty input");
  const auto& psi = idct_matrix(static_cast<int>(coeffs.size()));
  return psi * coeffs;
}

}  // namespace cvcs
