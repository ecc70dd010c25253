#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvcs/pattern.hpp"

namespace cvcs {

struct SolverConfig {
  int max_iters = 4000;
  double primal_tol = 1e-4;
  double dual_tol = 1e-4;
  double penalty = 1.0;  // ADMM rho
  // Experimental: rescale the columns of theta to unit l2 norm before
  // solving (the theoretical setup). Off in the default pipeline.
  bool normalize_columns = false;
  // Exempt the signal baseline from the l1 penalty: solve on the
  // measurements with their mean subtracted, then fold the mean back into
  // the DC coefficient (the usual unpenalized-intercept practice).
  // Without this, minimum-l1 reconstructions of signals with a large
  // baseline (speeds) are biased low between measurements, since trading
  // the DC level down cheapens the objective.  Off by default so that the
  // plain objective is exactly the l1 program the optimality oracle
  // checks; the traffic pipeline's central recovery turns it on.
  bool center = false;

  void validate() const;
};

struct SolveStatus {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
};

class SolverNotConverged : public std::runtime_error {
 public:
  SolverNotConverged(const SolveStatus& status, const std::string& what)
      : std::runtime_error(what), status(status) {}
  SolveStatus status;
};

class BlockUnrecoverable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Basis pursuit, min ||alpha||_1 s.t. theta * alpha = y, where row i of
// theta is row pattern.indices[i] of the IDCT matrix. Solved by ADMM with
// soft-threshold updates; the feasibility projection is a direct formula
// because the selected IDCT rows are orthonormal (theta * theta^T = I).
// Throws SolverNotConverged after max_iters; the returned iterate is
// always exactly feasible.
Eigen::VectorXd solve_basis_pursuit(const SampledBlock& block, const SolverConfig& cfg,
                                    SolveStatus* status = nullptr);

// As above but never throws on non-convergence: returns the last (still
// feasible) iterate and reports residuals through status.
Eigen::VectorXd solve_basis_pursuit_best_effort(const SampledBlock& block,
                                                const SolverConfig& cfg, SolveStatus& status);

// Recovered signal of length block_len: idct of the basis-pursuit solution.
// Full patterns short-circuit (the system is determined).
Eigen::VectorXd recover_block(const SampledBlock& block, const SolverConfig& cfg,
                              SolveStatus* status = nullptr);

struct BlockStatus {
  long block_seq = 0;
  int block_len = 0;
  int kept = 0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double wall_ms = 0.0;
  bool recovered = false;   // false => gap (empty pattern)
  bool converged = false;   // degraded blocks keep their last iterate
};

struct StreamRecovery {
  std::vector<double> values;  // NaN over gap regions
  std::vector<BlockStatus> blocks;

  std::size_t gap_count() const;
};

// Per-block recovery of a whole stream. Blocks are independent, so the
// parallel path and the serial reference produce bit-identical output.
StreamRecovery recover_stream(const std::vector<SampledBlock>& blocks, const SolverConfig& cfg);
StreamRecovery recover_stream_serial(const std::vector<SampledBlock>& blocks,
                                     const SolverConfig& cfg);

}  // namespace cvcs
