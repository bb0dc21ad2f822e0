#include "efk/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "efk/kernels.hpp"

namespace efk {

namespace {
std::span<const double> flat(const Field& w) {
  return std::span(w.values.data(), static_cast<std::size_t>(w.values.size()));
}
}  // namespace

double max_norm(const Field& w) { return kernels::parallel::max_abs(flat(w)); }

double discrete_energy(const Field& w, const SpectrumTables& spec) {
  const Field lap = apply_laplacian(w, spec);
  const PeriodicGrid& g = spec.grid();
  return g.cell_area() *
         kernels::parallel::energy_density_sum(flat(w), flat(lap), g.n_x, spec.kappa());
}

ErrorMetrics error_metrics(const Field& u, const Field& reference, const PeriodicGrid& grid) {
  require_shape(u, grid);
  require_shape(reference, grid);
  const double ref_norm = reference.values.norm();
  if (ref_norm == 0.0)
    throw std::invalid_argument("error_metrics: zero reference field");
  const Matrix diff = u.values - reference.values;
  ErrorMetrics m;
  m.err_inf = diff.cwiseAbs().maxCoeff();
  m.err_l2 = std::sqrt(grid.cell_area()) * diff.norm();
  m.relerr = diff.norm() / ref_norm;
  return m;
}

double observed_order(double e_coarse, double e_fine, double s_coarse, double s_fine) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!(e_coarse > 0.0 && e_fine > 0.0 && s_coarse > 0.0 && s_fine > 0.0))
    return nan;
  if (s_coarse == s_fine)
    return nan;
  return std::log(e_coarse / e_fine) / std::log(s_coarse / s_fine);
}

RunRecord record_step(int step, double tau, const Field& state, const SpectrumTables& spec) {
  RunRecord r;
  r.step = step;
  r.time = step * tau;
  r.max_norm = max_norm(state);
  r.energy = discrete_energy(state, spec);
  r.rank = effective_rank(state, kEffectiveRankThreshold);
  return r;
}

RunRecord record_step(int step, double tau, const LowRankState& state, const SpectrumTables& spec) {
  const Field dense = reconstruct(state);
  RunRecord r;
  r.step = step;
  r.time = step * tau;
  r.max_norm = max_norm(dense);
  r.energy = discrete_energy(dense, spec);
  r.rank = state.rank();
  return r;
}

}  // namespace efk
