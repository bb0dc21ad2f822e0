#include "efk/lowrank.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>

#include "efk/errors.hpp"
#include "efk/kernels.hpp"

namespace efk {

namespace {

Matrix apply_reaction(const Matrix& w) {
  Matrix out(w.rows(), w.cols());
  const std::size_t n = static_cast<std::size_t>(w.size());
  kernels::parallel::reaction(std::span(w.data(), n), std::span(out.data(), n));
  return out;
}

void require_finite(const Matrix& w, const char* where) {
  if (!w.allFinite())
    throw NumericsError(std::string(where) + ": non-finite entries");
}

// Classical RK4 with `substeps` equal substeps over [0, tau].
template <class Rhs>
Matrix rk4(Matrix y, double tau, int substeps, Rhs&& rhs) {
  const double dt = tau / substeps;
  for (int s = 0; s < substeps; ++s) {
    const Matrix k1 = rhs(y);
    const Matrix k2 = rhs(y + 0.5 * dt * k1);
    const Matrix k3 = rhs(y + 0.5 * dt * k2);
    const Matrix k4 = rhs(y + dt * k3);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

// Orthonormal basis of span([basis | extra]) that keeps `basis` as its
// leading columns. Directions of `extra` that are numerically inside
// span(basis) are pruned, so the result may have fewer than 2r columns.
Matrix augment_basis(const Matrix& basis, const Matrix& extra) {
  const long n = basis.rows();
  const long r = basis.cols();
  Matrix residual = extra - basis * (basis.transpose() * extra);
  residual -= basis * (basis.transpose() * residual);

  const long room = n - r;
  if (room <= 0)
    return basis;
  Eigen::ColPivHouseholderQR<Matrix> qr(residual);
  const double scale = std::max(extra.norm(), std::numeric_limits<double>::min());
  const auto& rr = qr.matrixR();
  long keep = 0;
  const long diag = std::min(rr.rows(), rr.cols());
  while (keep < diag && keep < room && std::abs(rr(keep, keep)) > 1e-10 * scale)
    ++keep;
  if (keep == 0)
    return basis;

  Matrix q = qr.householderQ() * Matrix::Identity(n, keep);
  // One more projection pass keeps the joint basis orthonormal to round-off.
  q -= basis * (basis.transpose() * q);
  Eigen::HouseholderQR<Matrix> requr(q);
  q = requr.householderQ() * Matrix::Identity(n, keep);

  Matrix out(n, r + keep);
  out << basis, q;
  return out;
}

struct Svd {
  Matrix u, v;
  Eigen::VectorXd sigma;
};

Svd thin_svd(const Matrix& w, const char* where) {
  require_finite(w, where);
  Eigen::BDCSVD<Matrix> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw NumericsError(std::string(where) + ": SVD failed");
  return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
}

LowRankState from_svd(const PeriodicGrid& grid, const Svd& svd, int r, const Matrix* rotate_left,
                      const Matrix* rotate_right) {
  LowRankState out;
  out.grid = grid;
  out.left = rotate_left ? Matrix(*rotate_left * svd.u.leftCols(r)) : Matrix(svd.u.leftCols(r));
  out.right = rotate_right ? Matrix(*rotate_right * svd.v.leftCols(r)) : Matrix(svd.v.leftCols(r));
  out.core = svd.sigma.head(r).asDiagonal();
  return out;
}

}  // namespace

void validate(const TruncationPolicy& policy) {
  if (!(policy.theta > 0.0))
    throw std::invalid_argument("truncation tolerance theta must be positive");
  if (policy.r_min < 1 || policy.r_max < policy.r_min)
    throw std::invalid_argument("truncation ranks must satisfy 1 <= r_min <= r_max");
}

int select_rank(const Eigen::VectorXd& sigma, const TruncationPolicy& policy) {
  validate(policy);
  const int n = static_cast<int>(sigma.size());
  if (n == 0)
    throw std::invalid_argument("select_rank: empty spectrum");
  const double tol = policy.mode == TruncationMode::relative ? policy.theta * sigma.norm()
                                                             : policy.theta;
  // tail2[r] = sum_{i >= r} sigma_i^2, accumulated from the smallest value up.
  std::vector<double> tail2(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i)
    tail2[i] = tail2[i + 1] + sigma[i] * sigma[i];
  int r = n;
  for (int k = 0; k <= n; ++k) {
    if (std::sqrt(tail2[k]) <= tol) {
      r = k;
      break;
    }
  }
  const int upper = std::min(policy.r_max, n);
  return std::clamp(r, std::min(policy.r_min, upper), upper);
}

LowRankState truncated_svd(const Field& w, const TruncationPolicy& policy) {
  const Svd svd = thin_svd(w.values, "truncated_svd");
  return from_svd(w.grid, svd, select_rank(svd.sigma, policy), nullptr, nullptr);
}

LowRankState truncate_fixed(const Field& w, int r) {
  const int full = static_cast<int>(std::min(w.values.rows(), w.values.cols()));
  if (r < 1 || r > full)
    throw std::invalid_argument("truncate_fixed: rank " + std::to_string(r) + " outside [1, " +
                                std::to_string(full) + "]");
  const Svd svd = thin_svd(w.values, "truncate_fixed");
  return from_svd(w.grid, svd, r, nullptr, nullptr);
}

Field reconstruct(const LowRankState& x) {
  return Field(x.grid, x.left * x.core * x.right.transpose());
}

LowRankState rank_adaptive_nonlinear_step(const LowRankState& x, double tau,
                                          const TruncationPolicy& policy,
                                          const IntegratorOptions& options) {
  if (!(tau > 0.0))
    throw std::invalid_argument("rank_adaptive_nonlinear_step: tau must be positive");
  if (options.rk_substeps < 1)
    throw std::invalid_argument("rank_adaptive_nonlinear_step: need at least one RK substep");
  validate(policy);
  const int m = options.rk_substeps;
  const Matrix& u = x.left;
  const Matrix& v = x.right;

  // K-step: dK/dt = f(K V^T) V
  const Matrix k = rk4(u * x.core, tau, m, [&](const Matrix& kk) -> Matrix {
    return apply_reaction(kk * v.transpose()) * v;
  });
  // L-step: dL/dt = f(U L^T)^T U
  const Matrix l = rk4(v * x.core.transpose(), tau, m, [&](const Matrix& ll) -> Matrix {
    return apply_reaction(u * ll.transpose()).transpose() * u;
  });
  require_finite(k, "K-step");
  require_finite(l, "L-step");

  const Matrix u_hat = augment_basis(u, k);
  const Matrix v_hat = augment_basis(v, l);

  // S-step (Galerkin on the augmented bases).
  const Matrix s0 = (u_hat.transpose() * u) * x.core * (v.transpose() * v_hat);
  const Matrix s = rk4(s0, tau, m, [&](const Matrix& ss) -> Matrix {
    return u_hat.transpose() * apply_reaction(u_hat * ss * v_hat.transpose()) * v_hat;
  });

  const Svd svd = thin_svd(s, "S-step truncation");
  return from_svd(x.grid, svd, select_rank(svd.sigma, policy), &u_hat, &v_hat);
}

LowRankState biharmonic_flow_lowrank(const LowRankState& x, double tau, const SpectrumTables& spec,
                                     const TruncationPolicy& policy,
                                     const IntegratorOptions& options) {
  const Field dense = apply_biharmonic_exp(reconstruct(x), tau, spec);
  if (options.biharmonic_fixed_rank)
    return truncate_fixed(dense, x.rank());
  return truncated_svd(dense, policy);
}

LowRankState laplacian_flow_lowrank(const LowRankState& x, double tau, const SpectrumTables& spec) {
  const int r = x.rank();
  Eigen::HouseholderQR<Matrix> left_qr(apply_exp_x(x.left, tau, spec));
  Eigen::HouseholderQR<Matrix> right_qr(apply_exp_y(x.right, tau, spec));
  const Matrix r_left = left_qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const Matrix r_right = right_qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();

  LowRankState out;
  out.grid = x.grid;
  out.left = left_qr.householderQ() * Matrix::Identity(x.left.rows(), r);
  out.right = right_qr.householderQ() * Matrix::Identity(x.right.rows(), r);
  out.core = r_left * x.core * r_right.transpose();
  return out;
}

LowRankState alrs_step(const LowRankState& x, double tau, const SpectrumTables& spec,
                       const TruncationPolicy& policy, const IntegratorOptions& options) {
  const LowRankState w = rank_adaptive_nonlinear_step(x, tau, policy, options);
  const LowRankState kk = biharmonic_flow_lowrank(w, tau, spec, policy, options);
  return laplacian_flow_lowrank(kk, tau, spec);
}

LowRankState alrs_run(const LowRankState& u0, double tau, int steps, const SpectrumTables& spec,
                      const TruncationPolicy& policy, const LowRankObserver& observer,
                      const IntegratorOptions& options) {
  if (steps < 0)
    throw std::invalid_argument("alrs_run: negative step count");
  LowRankState u = u0;
  for (int k = 1; k <= steps; ++k) {
    u = alrs_step(u, tau, spec, policy, options);
    if (observer)
      observer(k, u);
  }
  return u;
}

int effective_rank(const Matrix& w, double rel_threshold) {
  require_finite(w, "effective_rank");
  Eigen::BDCSVD<Matrix> svd(w);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma[0] == 0.0)
    return 0;
  const double cut = rel_threshold * sigma[0];
  return static_cast<int>((sigma.array() > cut).count());
}

}  // namespace efk
