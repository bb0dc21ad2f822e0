#pragma once

#include <functional>

#include "efk/spectral.hpp"

namespace efk {

/// f(u) = u - u^3
inline double reaction(double u) { return u - u * u * u; }

/// Exact solution at time tau >= 0 of du/dt = u - u^3, u(0) = u0.
double nonlinear_flow_scalar(double u0, double tau);

/// Elementwise nonlinear_flow_scalar. Maps [-1, 1] into itself.
Field nonlinear_flow_field(const Field& w, double tau);

/// Exact flow of dPsi/dt = A_x Psi + Psi A_y, i.e. exp(tau A_x) Psi exp(tau A_y).
Field laplacian_flow_full(const Field& phi, double tau, const SpectrumTables& spec);

/// One Lie splitting step: nonlinear flow, then the biharmonic exponential,
/// then the Laplacian exponential.
Field frs_step(const Field& u, double tau, const SpectrumTables& spec);

using FieldObserver = std::function<void(int step, const Field& state)>;

/// Applies frs_step `steps` times, calling `observer` (if set) after each step.
Field frs_run(const Field& u0, double tau, int steps, const SpectrumTables& spec,
              const FieldObserver& observer = {});

}  // namespace efk
