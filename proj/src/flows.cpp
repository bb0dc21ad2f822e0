#include "efk/flows.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

#include "efk/kernels.hpp"

namespace efk {

double nonlinear_flow_scalar(double u0, double tau) {
  if (!(tau >= 0.0))
    throw std::invalid_argument("nonlinear_flow_scalar: tau must be nonnegative");
  return kernels::logistic_cubic_flow(u0, tau);
}

Field nonlinear_flow_field(const Field& w, double tau) {
  if (!(tau >= 0.0))
    throw std::invalid_argument("nonlinear_flow_field: tau must be nonnegative");
  Field out(w.grid, Matrix(w.values.rows(), w.values.cols()));
  const std::size_t n = static_cast<std::size_t>(w.values.size());
  kernels::parallel::nonlinear_flow(std::span(w.values.data(), n), std::span(out.values.data(), n),
                                    tau);
  return out;
}

Field laplacian_flow_full(const Field& phi, double tau, const SpectrumTables& spec) {
  return apply_laplacian_exp(phi, tau, spec);
}

Field frs_step(const Field& u, double tau, const SpectrumTables& spec) {
  if (!(tau > 0.0))
    throw std::invalid_argument("frs_step: tau must be positive");
  return laplacian_flow_full(apply_biharmonic_exp(nonlinear_flow_field(u, tau), tau, spec), tau,
                             spec);
}

Field frs_run(const Field& u0, double tau, int steps, const SpectrumTables& spec,
              const FieldObserver& observer) {
  if (steps < 0)
    throw std::invalid_argument("frs_run: negative step count");
  Field u = u0;
  for (int k = 1; k <= steps; ++k) {
    u = frs_step(u, tau, spec);
    if (observer)
      observer(k, u);
  }
  return u;
}

}  // namespace efk
