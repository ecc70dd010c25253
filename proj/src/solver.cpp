#include "cvcs/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "cvcs/dct.hpp"

namespace cvcs {

void SolverConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be positive");
  if (!(primal_tol > 0.0)) throw std::invalid_argument("SolverConfig: primal_tol must be positive");
  if (!(dual_tol > 0.0)) throw std::invalid_argument("SolverConfig: dual_tol must be positive");
  if (!(penalty > 0.0)) throw std::invalid_argument("SolverConfig: penalty must be positive");
}

namespace {

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& psi, const std::vector<int>& rows) {
  Eigen::MatrixXd out(rows.size(), psi.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = psi.row(rows[i]);
  return out;
}

inline void soft_threshold(const Eigen::VectorXd& v, double kappa, Eigen::VectorXd& out) {
  out = (v.array() - kappa).max(0.0) - (-v.array() - kappa).max(0.0);
}

Eigen::VectorXd admm_bp(const Eigen::MatrixXd& theta, const Eigen::VectorXd& y,
                        const SolverConfig& cfg, SolveStatus& st, bool orthonormal_rows) {
  const int n = static_cast<int>(theta.cols());
  const double rho = cfg.penalty;

  // Projection onto {a : theta a = y}. With orthonormal rows the Gram
  // matrix is the identity; otherwise factor it once.
  Eigen::LLT<Eigen::MatrixXd> gram_llt;
  if (!orthonormal_rows) gram_llt.compute(theta * theta.transpose());
  auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd resid = theta * v - y;
    if (!orthonormal_rows) resid = gram_llt.solve(resid);
    return v - theta.transpose() * resid;
  };

  // Warm start from the minimum-norm feasible point.
  Eigen::VectorXd z = orthonormal_rows ? Eigen::VectorXd(theta.transpose() * y) : project(Eigen::VectorXd::Zero(n));
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd x = z;
  Eigen::VectorXd z_prev(n);

  st = SolveStatus{};
  for (int it = 1; it <= cfg.max_iters; ++it) {
    x = project(z - u);
    z_prev.swap(z);
    soft_threshold(x + u, 1.0 / rho, z);
    u += x - z;

    const double r = (x - z).norm();
    const double s = rho * (z - z_prev).norm();
    st.iterations = it;
    st.primal_residual = r;
    st.dual_residual = s;
    const double scale = std::max({x.norm(), z.norm(), 1.0});
    if (r <= cfg.primal_tol * scale && s <= cfg.dual_tol * std::max(rho * u.norm(), 1.0)) {
      st.converged = true;
      break;
    }
  }
  return x;  // exactly feasible by construction
}

}  // namespace

Eigen::VectorXd solve_basis_pursuit_best_effort(const SampledBlock& block,
                                                const SolverConfig& cfg, SolveStatus& st) {
  cfg.validate();
  const SensingPattern& p = block.pattern;
  if (p.empty()) throw BlockUnrecoverable("solve_basis_pursuit: empty sensing pattern");
  if (block.values.size() != p.kept())
    throw std::invalid_argument("solve_basis_pursuit: values/pattern length mismatch");

  if (p.full()) {
    // Determined system: alpha = psi^T x with x the (sorted, complete) samples.
    st = SolveStatus{};
    st.converged = true;
    return dct_forward(block.values);
  }

  const auto& psi = idct_matrix(p.block_len);
  Eigen::MatrixXd theta = select_rows(psi, p.indices);

  Eigen::VectorXd y = block.values;
  double baseline = 0.0;
  if (cfg.center) {
    baseline = y.mean();
    y.array() -= baseline;
  }

  Eigen::VectorXd alpha;
  if (cfg.normalize_columns) {
    Eigen::VectorXd col_norms = theta.colwise().norm();
    for (int j = 0; j < theta.cols(); ++j) {
      if (col_norms[j] > 0) theta.col(j) /= col_norms[j];
    }
    alpha = admm_bp(theta, y, cfg, st, /*orthonormal_rows=*/false);
    for (int j = 0; j < alpha.size(); ++j) {
      if (col_norms[j] > 0) alpha[j] /= col_norms[j];
    }
  } else {
    alpha = admm_bp(theta, y, cfg, st, /*orthonormal_rows=*/true);
  }
  if (cfg.center) {
    // A constant baseline b is b * sqrt(N) in the DC coefficient of the
    // orthonormal DCT basis.
    alpha[0] += baseline * std::sqrt(static_cast<double>(p.block_len));
  }
  return alpha;
}

Eigen::VectorXd solve_basis_pursuit(const SampledBlock& block, const SolverConfig& cfg,
                                    SolveStatus* status) {
  SolveStatus local;
  SolveStatus& st = status ? *status : local;
  Eigen::VectorXd alpha = solve_basis_pursuit_best_effort(block, cfg, st);
  if (!st.converged) {
    throw SolverNotConverged(st, "solve_basis_pursuit: no convergence after " +
                                     std::to_string(cfg.max_iters) + " iterations");
  }
  return alpha;
}

Eigen::VectorXd recover_block(const SampledBlock& block, const SolverConfig& cfg,
                              SolveStatus* status) {
  const SensingPattern& p = block.pattern;
  if (p.empty()) throw BlockUnrecoverable("recover_block: empty sensing pattern");

  if (p.full()) {
    if (status) {
      *status = SolveStatus{};
      status->converged = true;
    }
    Eigen::VectorXd x(p.block_len);
    for (int i = 0; i < p.kept(); ++i) x[p.indices[i]] = block.values[i];
    return x;
  }
  return idct(solve_basis_pursuit(block, cfg, status));
}

std::size_t StreamRecovery::gap_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (!b.recovered) ++n;
  }
  return n;
}

namespace {

void recover_one(const SampledBlock& block, const SolverConfig& cfg, double* out,
                 BlockStatus& bs) {
  bs.block_seq = block.block_seq;
  bs.block_len = block.pattern.block_len;
  bs.kept = block.pattern.kept();

  const auto t0 = std::chrono::steady_clock::now();
  if (block.pattern.empty()) {
    for (int i = 0; i < bs.block_len; ++i) out[i] = std::numeric_limits<double>::quiet_NaN();
    bs.recovered = false;
  } else if (block.pattern.full()) {
    for (int i = 0; i < bs.block_len; ++i) out[block.pattern.indices[i]] = block.values[i];
    bs.recovered = true;
    bs.converged = true;
  } else {
    // Non-converged blocks keep their last feasible iterate, flagged degraded.
    SolveStatus st;
    Eigen::VectorXd x = idct(solve_basis_pursuit_best_effort(block, cfg, st));
    bs.recovered = true;
    bs.converged = st.converged;
    bs.iterations = st.iterations;
    bs.primal_residual = st.primal_residual;
    bs.dual_residual = st.dual_residual;
    for (int i = 0; i < bs.block_len; ++i) out[i] = x[i];
  }
  const auto t1 = std::chrono::steady_clock::now();
  bs.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
}

StreamRecovery recover_stream_impl(const std::vector<SampledBlock>& blocks,
                                   const SolverConfig& cfg, bool parallel) {
  cfg.validate();
  std::vector<std::size_t> offsets(blocks.size() + 1, 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    offsets[i + 1] = offsets[i] + blocks[i].pattern.block_len;
  }

  StreamRecovery out;
  out.values.assign(offsets.back(), 0.0);
  out.blocks.resize(blocks.size());

  const long nb = static_cast<long>(blocks.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < nb; ++i) {
    recover_one(blocks[i], cfg, out.values.data() + offsets[i], out.blocks[i]);
  }
  return out;
}

}  // namespace

StreamRecovery recover_stream(const std::vector<SampledBlock>& blocks, const SolverConfig& cfg) {
  return recover_stream_impl(blocks, cfg, true);
}

StreamRecovery recover_stream_serial(const std::vector<SampledBlock>& blocks,
                                     const SolverConfig& cfg) {
  return recover_stream_impl(blocks, cfg, false);
}

}  // namespace cvcs
