#include "efk/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "efk/errors.hpp"
#include "efk/kernels.hpp"

namespace efk {

namespace detail {

namespace {
// FFTW's planner is not re-entrant; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftPlans {
  fftw_plan forward_2d = nullptr, backward_2d = nullptr;
  fftw_plan forward_x = nullptr, backward_x = nullptr;
  fftw_plan forward_y = nullptr, backward_y = nullptr;

  FftPlans(int n_x, int n_y) {
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::vector<kernels::complex> buf(static_cast<std::size_t>(n_x) * n_y);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    // Column-major n_x x n_y is row-major n_y x n_x.
    forward_2d = fftw_plan_dft_2d(n_y, n_x, p, p, FFTW_FORWARD, flags);
    backward_2d = fftw_plan_dft_2d(n_y, n_x, p, p, FFTW_BACKWARD, flags);
    forward_x = fftw_plan_dft_1d(n_x, p, p, FFTW_FORWARD, flags);
    backward_x = fftw_plan_dft_1d(n_x, p, p, FFTW_BACKWARD, flags);
    forward_y = fftw_plan_dft_1d(n_y, p, p, FFTW_FORWARD, flags);
    backward_y = fftw_plan_dft_1d(n_y, p, p, FFTW_BACKWARD, flags);
    if (!forward_2d || !backward_2d || !forward_x || !backward_x || !forward_y || !backward_y)
      throw NumericsError("FFTW planning failed");
  }

  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    for (fftw_plan p : {forward_2d, backward_2d, forward_x, backward_x, forward_y, backward_y})
      if (p)
        fftw_destroy_plan(p);
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
};

}  // namespace detail

namespace {

using kernels::complex;

void execute(fftw_plan plan, std::vector<complex>& data, std::size_t offset = 0) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data() + offset);
  fftw_execute_dft(plan, p, p);
}

void check_residue(double residue, double norm, const char* where) {
  if (!(residue <= 1e-9 * (1.0 + norm)))
    throw NumericsError(std::string(where) + ": imaginary residue " + std::to_string(residue) +
                        " after inverse FFT");
}

Eigen::VectorXd circulant_eigenvalues(int n, double h) {
  Eigen::VectorXd lam(n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(k * std::numbers::pi / n);
    lam[k] = -4.0 / (h * h) * s * s;
  }
  return lam;
}

// Columnwise exp(tau A_s) for one axis.
Matrix apply_exp_axis(const Matrix& m, double tau, const Eigen::VectorXd& lambda,
                      fftw_plan forward, fftw_plan backward, const char* where) {
  const long n = lambda.size();
  if (m.rows() != n)
    throw std::invalid_argument(std::string(where) + ": expected " + std::to_string(n) +
                                " rows, got " + std::to_string(m.rows()));
  std::vector<double> mult(n);
  kernels::serial::exp_multiplier(std::span(lambda.data(), n), tau, mult);
  Matrix out(m.rows(), m.cols());
  std::vector<complex> buf(n);
  const double norm = m.norm();
  for (long c = 0; c < m.cols(); ++c) {
    for (long i = 0; i < n; ++i)
      buf[i] = complex(m(i, c), 0.0);
    execute(forward, buf);
    kernels::serial::scale_spectrum(buf, mult);
    execute(backward, buf);
    const double residue =
        kernels::serial::extract_real(buf, std::span(out.col(c).data(), n), 1.0 / n);
    check_residue(residue, norm, where);
  }
  return out;
}

}  // namespace

SpectrumTables::SpectrumTables(const PeriodicGrid& grid, double kappa)
    : grid_(grid), kappa_(kappa) {
  if (!(kappa > 0.0))
    throw std::invalid_argument("build_spectrum: kappa must be positive");
  if (grid.n_x < 2 || grid.n_y < 2 || !(grid.h_x > 0.0) || !(grid.h_y > 0.0))
    throw std::invalid_argument("build_spectrum: invalid grid");
  lambda_x_ = circulant_eigenvalues(grid.n_x, grid.h_x);
  lambda_y_ = circulant_eigenvalues(grid.n_y, grid.h_y);
  lambda_laplacian_ = lambda_x_.replicate(1, grid.n_y) + lambda_y_.transpose().replicate(grid.n_x, 1);
  lambda_biharmonic_ = -kappa * lambda_laplacian_.array().square().matrix();
  plans_ = std::make_shared<const detail::FftPlans>(grid.n_x, grid.n_y);
}

SpectrumTables build_spectrum(const PeriodicGrid& grid, double kappa) {
  return SpectrumTables(grid, kappa);
}

Field apply_spectral_multiplier(const Field& h, const Matrix& multiplier,
                                const SpectrumTables& spec) {
  const PeriodicGrid& g = spec.grid();
  require_shape(h, g);
  if (multiplier.rows() != g.n_x || multiplier.cols() != g.n_y)
    throw std::invalid_argument("apply_spectral_multiplier: multiplier shape mismatch");
  const std::size_t n = static_cast<std::size_t>(g.n_x) * g.n_y;
  std::vector<complex> buf(n);
  const double* src = h.values.data();
  for (std::size_t i = 0; i < n; ++i)
    buf[i] = complex(src[i], 0.0);
  execute(spec.plans().forward_2d, buf);
  kernels::parallel::scale_spectrum(buf, std::span(multiplier.data(), n));
  execute(spec.plans().backward_2d, buf);
  Field out(g);
  const double residue =
      kernels::parallel::extract_real(buf, std::span(out.values.data(), n), 1.0 / n);
  check_residue(residue, h.values.norm(), "apply_spectral_multiplier");
  return out;
}

Field apply_laplacian(const Field& h, const SpectrumTables& spec) {
  const PeriodicGrid& g = spec.grid();
  require_shape(h, g);
  Field out(g);
  const std::size_t n = static_cast<std::size_t>(g.n_x) * g.n_y;
  kernels::parallel::laplacian_stencil(std::span(h.values.data(), n),
                                       std::span(out.values.data(), n), g.n_x, g.h_x, g.h_y);
  return out;
}

Field apply_laplacian_fft(const Field& h, const SpectrumTables& spec) {
  return apply_spectral_multiplier(h, spec.lambda_laplacian(), spec);
}

Field apply_biharmonic(const Field& h, const SpectrumTables& spec) {
  return apply_spectral_multiplier(h, spec.lambda_biharmonic(), spec);
}

namespace {
Matrix exp_table(const Matrix& eigenvalues, double tau) {
  Matrix mult(eigenvalues.rows(), eigenvalues.cols());
  const std::size_t n = static_cast<std::size_t>(eigenvalues.size());
  kernels::parallel::exp_multiplier(std::span(eigenvalues.data(), n), tau,
                                    std::span(mult.data(), n));
  return mult;
}
}  // namespace

Field apply_biharmonic_exp(const Field& h, double tau, const SpectrumTables& spec) {
  if (!(tau > 0.0))
    throw std::invalid_argument("apply_biharmonic_exp: tau must be positive");
  return apply_spectral_multiplier(h, exp_table(spec.lambda_biharmonic(), tau), spec);
}

Field apply_laplacian_exp(const Field& h, double tau, const SpectrumTables& spec) {
  return apply_spectral_multiplier(h, exp_table(spec.lambda_laplacian(), tau), spec);
}

Matrix apply_exp_x(const Matrix& m, double tau, const SpectrumTables& spec) {
  return apply_exp_axis(m, tau, spec.lambda_x(), spec.plans().forward_x,
                        spec.plans().backward_x, "apply_exp_x");
}

Matrix apply_exp_y(const Matrix& m, double tau, const SpectrumTables& spec) {
  return apply_exp_axis(m, tau, spec.lambda_y(), spec.plans().forward_y,
                        spec.plans().backward_y, "apply_exp_y");
}

}  // namespace efk
