#pragma once

#include "efk/lowrank.hpp"
#include "efk/spectral.hpp"

namespace efk {

/// One row of the per-step time series.
struct RunRecord {
  int step = 0;
  double time = 0.0;
  double max_norm = 0.0;
  double energy = 0.0;
  int rank = 0;
};

/// Relative singular-value threshold used for the rank of dense fields.
inline constexpr double kEffectiveRankThreshold = 1e-3;

double max_norm(const Field& w);

/// h_x h_y sum[(kappa/2)(delta W)^2 - (1/2) W delta W + F(W)], with delta the
/// periodic 5-point Laplacian. The middle term is the summation-by-parts form
/// of (1/2)|grad W|^2.
double discrete_energy(const Field& w, const SpectrumTables& spec);

struct ErrorMetrics {
  double err_inf = 0.0;
  double err_l2 = 0.0;
  double relerr = 0.0;
};

/// Max-abs, discrete L2 (sqrt(h_x h_y) * Frobenius) and relative Frobenius
/// errors of `u` against `reference`. Throws std::invalid_argument on shape
/// mismatch or a zero reference.
ErrorMetrics error_metrics(const Field& u, const Field& reference, const PeriodicGrid& grid);

/// log(e_coarse / e_fine) / log(s_coarse / s_fine). NaN when either ratio is 1
/// or an input is not positive.
double observed_order(double e_coarse, double e_fine, double s_coarse, double s_fine);

RunRecord record_step(int step, double tau, const Field& state, const SpectrumTables& spec);
RunRecord record_step(int step, double tau, const LowRankState& state, const SpectrumTables& spec);

}  // namespace efk
