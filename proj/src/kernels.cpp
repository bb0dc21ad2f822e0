#include "efk/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace efk::kernels {

namespace {

double energy_column(const double* w, const double* lap, long rows, double kappa) {
  double acc = 0.0;
  for (long i = 0; i < rows; ++i)
    acc += 0.5 * kappa * lap[i] * lap[i] - 0.5 * w[i] * lap[i] + double_well(w[i]);
  return acc;
}

void stencil_column(const double* in, double* out, long rows, long cols, long j, double ihx2,
                    double ihy2) {
  const double* c = in + j * rows;
  const double* left = in + ((j + cols - 1) % cols) * rows;
  const double* right = in + ((j + 1) % cols) * rows;
  double* o = out + j * rows;
  for (long i = 0; i < rows; ++i) {
    const long im = (i == 0) ? rows - 1 : i - 1;
    const long ip = (i == rows - 1) ? 0 : i + 1;
    o[i] = (c[im] - 2.0 * c[i] + c[ip]) * ihx2 + (left[i] - 2.0 * c[i] + right[i]) * ihy2;
  }
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

void nonlinear_flow(std::span<const double> in, std::span<double> out, double tau) {
  assert(in.size() == out.size());
  for (std::size_t i = 0; i < in.size(); ++i)
    out[i] = logistic_cubic_flow(in[i], tau);
}

void reaction(std::span<const double> in, std::span<double> out) {
  assert(in.size() == out.size());
  for (std::size_t i = 0; i < in.size(); ++i)
    out[i] = in[i] - in[i] * in[i] * in[i];
}

void exp_multiplier(std::span<const double> eigenvalues, double tau, std::span<double> out) {
  assert(eigenvalues.size() == out.size());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    out[i] = std::exp(tau * eigenvalues[i]);
}

void scale_spectrum(std::span<complex> data, std::span<const double> multiplier) {
  assert(data.size() == multiplier.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    data[i] *= multiplier[i];
}

double extract_real(std::span<const complex> in, std::span<double> out, double scale) {
  assert(in.size() == out.size());
  double residue = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = scale * in[i].real();
    residue = std::max(residue, std::abs(in[i].imag()));
  }
  return residue * scale;
}

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values)
    m = std::max(m, std::abs(v));
  return m;
}

double energy_density_sum(std::span<const double> w, std::span<const double> lap, long rows,
                          double kappa) {
  assert(w.size() == lap.size() && rows > 0);
  const long cols = static_cast<long>(w.size()) / rows;
  std::vector<double> partial(cols);
  for (long j = 0; j < cols; ++j)
    partial[j] = energy_column(w.data() + j * rows, lap.data() + j * rows, rows, kappa);
  double total = 0.0;
  for (double p : partial)
    total += p;
  return total;
}

void laplacian_stencil(std::span<const double> in, std::span<double> out, long rows, double h_x,
                       double h_y) {
  assert(in.size() == out.size() && rows > 0);
  const long cols = static_cast<long>(in.size()) / rows;
  const double ihx2 = 1.0 / (h_x * h_x);
  const double ihy2 = 1.0 / (h_y * h_y);
  for (long j = 0; j < cols; ++j)
    stencil_column(in.data(), out.data(), rows, cols, j, ihx2, ihy2);
}

}  // namespace serial

namespace parallel {

void nonlinear_flow(std::span<const double> in, std::span<double> out, double tau) {
  assert(in.size() == out.size());
  const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i)
    out[i] = logistic_cubic_flow(in[i], tau);
}

void reaction(std::span<const double> in, std::span<double> out) {
  assert(in.size() == out.size());
  const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i)
    out[i] = in[i] - in[i] * in[i] * in[i];
}

void exp_multiplier(std::span<const double> eigenvalues, double tau, std::span<double> out) {
  assert(eigenvalues.size() == out.size());
  const long n = static_cast<long>(eigenvalues.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i)
    out[i] = std::exp(tau * eigenvalues[i]);
}

void scale_spectrum(std::span<complex> data, std::span<const double> multiplier) {
  assert(data.size() == multiplier.size());
  const long n = static_cast<long>(data.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i)
    data[i] *= multiplier[i];
}

double extract_real(std::span<const complex> in, std::span<double> out, double scale) {
  assert(in.size() == out.size());
  const long n = static_cast<long>(in.size());
  double residue = 0.0;
#pragma omp parallel for schedule(static) reduction(max : residue)
  for (long i = 0; i < n; ++i) {
    out[i] = scale * in[i].real();
    residue = std::max(residue, std::abs(in[i].imag()));
  }
  return residue * scale;
}

double max_abs(std::span<const double> values) {
  const long n = static_cast<long>(values.size());
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (long i = 0; i < n; ++i)
    m = std::max(m, std::abs(values[i]));
  return m;
}

double energy_density_sum(std::span<const double> w, std::span<const double> lap, long rows,
                          double kappa) {
  assert(w.size() == lap.size() && rows > 0);
  const long cols = static_cast<long>(w.size()) / rows;
  std::vector<double> partial(cols);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < cols; ++j)
    partial[j] = energy_column(w.data() + j * rows, lap.data() + j * rows, rows, kappa);
  double total = 0.0;
  for (double p : partial)
    total += p;
  return total;
}

void laplacian_stencil(std::span<const double> in, std::span<double> out, long rows, double h_x,
                       double h_y) {
  assert(in.size() == out.size() && rows > 0);
  const long cols = static_cast<long>(in.size()) / rows;
  const double ihx2 = 1.0 / (h_x * h_x);
  const double ihy2 = 1.0 / (h_y * h_y);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < cols; ++j)
    stencil_column(in.data(), out.data(), rows, cols, j, ihx2, ihy2);
}

}  // namespace parallel

}  // namespace efk::kernels
