#pragma once

#include <Eigen/Dense>

namespace cvcs {

// Orthonormal DCT-II basis pair. The synthesis matrix (IDCT) has entry
//   psi[i][j] = k(j) * cos(pi * j * (i + 0.5) / n),
// k(0) = 1/sqrt(n), k(j>=1) = sqrt(2/n), so psi is orthogonal and the
// analysis transform is its transpose.

// Synthesis (IDCT) matrix, n x n. Cached per n; thread-safe.
const Eigen::MatrixXd& idct_matrix(int n);

// Analysis transform: coefficients of x in the DCT domain.
Eigen::VectorXd dct_forward(const Eigen::VectorXd& x);

// Synthesis transform: signal from DCT coefficients.
Eigen::VectorXd idct(const Eigen::VectorXd& coeffs);

}  // namespace cvcs
