#pragma once

#include <functional>
#include <limits>

#include "efk/spectral.hpp"

namespace efk {

/// Factored state left * core * right^T with orthonormal left/right columns.
struct LowRankState {
  PeriodicGrid grid;
  Matrix left;   // n_x x r
  Matrix core;   // r x r
  Matrix right;  // n_y x r

  int rank() const { return static_cast<int>(core.rows()); }
};

enum class TruncationMode {
  absolute,  // discarded singular-value tail <= theta
  relative,  // discarded tail <= theta * ||W||_F
};

/// Rank selection for every truncation. theta is the Frobenius tolerance on
/// the discarded tail; the retained rank is clamped to [r_min, r_max].
struct TruncationPolicy {
  double theta = 1e-3;
  int r_min = 1;
  int r_max = std::numeric_limits<int>::max();
  TruncationMode mode = TruncationMode::absolute;
};

/// Knobs of the low-rank substeps that are not part of the truncation rule.
struct IntegratorOptions {
  /// RK4 substeps per step inside the K-, L- and S-steps.
  int rk_substeps = 4;
  /// Compress the biharmonic substep back to the incoming rank instead of by tolerance.
  bool biharmonic_fixed_rank = false;
};

/// Throws std::invalid_argument unless theta > 0 and 1 <= r_min <= r_max.
void validate(const TruncationPolicy& policy);

/// Smallest rank whose discarded tail of `sigma` (descending) meets the
/// policy, clamped to [r_min, min(r_max, sigma.size())].
int select_rank(const Eigen::VectorXd& sigma, const TruncationPolicy& policy);

/// Tolerance-driven SVD compression of a dense field.
LowRankState truncated_svd(const Field& w, const TruncationPolicy& policy);

/// Best rank-r approximation (Eckart-Young).
LowRankState truncate_fixed(const Field& w, int r);

Field reconstruct(const LowRankState& x);

/// One step of the rank-adaptive augmented basis-update & Galerkin
/// integrator for dW/dt = P(W) f(W). Output rank is at most twice the input rank.
LowRankState rank_adaptive_nonlinear_step(const LowRankState& x, double tau,
                                          const TruncationPolicy& policy,
                                          const IntegratorOptions& options = {});

/// Densify, apply exp(tau Atilde), recompress.
LowRankState biharmonic_flow_lowrank(const LowRankState& x, double tau, const SpectrumTables& spec,
                                     const TruncationPolicy& policy,
                                     const IntegratorOptions& options = {});

/// exp(tau A_x) X exp(tau A_y) on the factors; rank is preserved exactly.
LowRankState laplacian_flow_lowrank(const LowRankState& x, double tau, const SpectrumTables& spec);

LowRankState alrs_step(const LowRankState& x, double tau, const SpectrumTables& spec,
                       const TruncationPolicy& policy, const IntegratorOptions& options = {});

using LowRankObserver = std::function<void(int step, const LowRankState& state)>;

LowRankState alrs_run(const LowRankState& u0, double tau, int steps, const SpectrumTables& spec,
                      const TruncationPolicy& policy, const LowRankObserver& observer = {},
                      const IntegratorOptions& options = {});

/// Number of singular values above rel_threshold * sigma_1; 0 for the zero matrix.
int effective_rank(const Matrix& w, double rel_threshold);
inline int effective_rank(const Field& w, double rel_threshold) {
  return effective_rank(w.values, rel_threshold);
}

}  // namespace efk
