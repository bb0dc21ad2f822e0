#pragma once

#include <memory>

#include "efk/grid.hpp"

namespace efk {

namespace detail {
struct FftPlans;
}

/// Eigenvalues of the periodic second-difference matrices A_x, A_y and of the
/// stabilized biharmonic operator -kappa (A_x (+) A_y)^2, together with the
/// FFT plans used to apply functions of these operators. Immutable after
/// construction; safe to share across threads.
class SpectrumTables {
 public:
  SpectrumTables(const PeriodicGrid& grid, double kappa);

  const PeriodicGrid& grid() const { return grid_; }
  double kappa() const { return kappa_; }

  /// lambda_x[k] = -(4/h_x^2) sin^2(k pi / n_x)
  const Eigen::VectorXd& lambda_x() const { return lambda_x_; }
  const Eigen::VectorXd& lambda_y() const { return lambda_y_; }
  /// lambda_x[i] + lambda_y[j]
  const Matrix& lambda_laplacian() const { return lambda_laplacian_; }
  /// -kappa (lambda_x[i] + lambda_y[j])^2
  const Matrix& lambda_biharmonic() const { return lambda_biharmonic_; }

  const detail::FftPlans& plans() const { return *plans_; }

 private:
  PeriodicGrid grid_;
  double kappa_;
  Eigen::VectorXd lambda_x_, lambda_y_;
  Matrix lambda_laplacian_, lambda_biharmonic_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

/// Throws std::invalid_argument if kappa <= 0.
SpectrumTables build_spectrum(const PeriodicGrid& grid, double kappa);

/// Periodic 5-point stencil delta_s applied directly in physical space.
Field apply_laplacian(const Field& h, const SpectrumTables& spec);

/// Same operator through the 2D FFT (diagonal multiply by lambda_x + lambda_y).
Field apply_laplacian_fft(const Field& h, const SpectrumTables& spec);

/// Z = real(ifft2(lambda_biharmonic .* fft2(H))).
Field apply_biharmonic(const Field& h, const SpectrumTables& spec);

/// exp(tau * Atilde) applied through the same pipeline; tau must be positive.
Field apply_biharmonic_exp(const Field& h, double tau, const SpectrumTables& spec);

/// exp(tau * A) on the full 2D field, one FFT pair with multiplier
/// exp(tau (lambda_x[i] + lambda_y[j])). Any real tau is accepted.
Field apply_laplacian_exp(const Field& h, double tau, const SpectrumTables& spec);

/// General 2D spectral multiplier: real(ifft2(multiplier .* fft2(H))).
Field apply_spectral_multiplier(const Field& h, const Matrix& multiplier,
                                const SpectrumTables& spec);

/// exp(tau A_x) M, columnwise 1D FFT; M has n_x rows.
Matrix apply_exp_x(const Matrix& m, double tau, const SpectrumTables& spec);
/// exp(tau A_y) M, columnwise 1D FFT; M has n_y rows.
Matrix apply_exp_y(const Matrix& m, double tau, const SpectrumTables& spec);

}  // namespace efk
