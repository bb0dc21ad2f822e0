#pragma once

// Data-parallel inner loops of the solver. Every kernel exists twice: a plain
// serial loop kept as the reference, and an OpenMP version used by the
// production path. Reductions accumulate per-column partial sums and combine
// them in a fixed order, so both variants return bit-identical results
// regardless of the thread count.

#include <cmath>
#include <complex>
#include <span>

namespace efk::kernels {

using complex = std::complex<double>;

/// Exact flow of du/dt = u - u^3 over time tau >= 0.
inline double logistic_cubic_flow(double u0, double tau) {
  const double u2 = u0 * u0;
  return u0 / std::sqrt(u2 + (1.0 - u2) * std::exp(-2.0 * tau));
}

/// F(u) = (u^2 - 1)^2 / 4
inline double double_well(double u) {
  const double s = u * u - 1.0;
  return 0.25 * s * s;
}

namespace serial {

void nonlinear_flow(std::span<const double> in, std::span<double> out, double tau);
/// out = in - in^3
void reaction(std::span<const double> in, std::span<double> out);
void exp_multiplier(std::span<const double> eigenvalues, double tau, std::span<double> out);
void scale_spectrum(std::span<complex> data, std::span<const double> multiplier);
/// out = scale * real(in); returns max |imag(in)| * scale.
double extract_real(std::span<const complex> in, std::span<double> out, double scale);
double max_abs(std::span<const double> values);
/// Sum over all entries of (kappa/2) lap^2 - (1/2) w lap + F(w); column-major, `rows` per column.
double energy_density_sum(std::span<const double> w, std::span<const double> lap, long rows,
                          double kappa);
/// Periodic 5-point Laplacian of a column-major field with `rows` nodes along x.
void laplacian_stencil(std::span<const double> in, std::span<double> out, long rows, double h_x,
                       double h_y);

}  // namespace serial

namespace parallel {

void nonlinear_flow(std::span<const double> in, std::span<double> out, double tau);
void reaction(std::span<const double> in, std::span<double> out);
void exp_multiplier(std::span<const double> eigenvalues, double tau, std::span<double> out);
void scale_spectrum(std::span<complex> data, std::span<const double> multiplier);
double extract_real(std::span<const complex> in, std::span<double> out, double scale);
double max_abs(std::span<const double> values);
double energy_density_sum(std::span<const double> w, std::span<const double> lap, long rows,
                          double kappa);
void laplacian_stencil(std::span<const double> in, std::span<double> out, long rows, double h_x,
                       double h_y);

}  // namespace parallel

/// Threads the OpenMP kernels will use (1 when built without OpenMP).
int max_threads();

}  // namespace efk::kernels
