#include <doctest.h>

#include "dense_oracles.hpp"
#include "efk/diagnostics.hpp"
#include "efk/flows.hpp"
#include "efk/lowrank.hpp"
#include "efk/problems.hpp"

using namespace efk;
namespace o = efk::oracle;

namespace {

PeriodicGrid grid_n(int n) { return build_grid(0, n, 0, n, n, n); }

Matrix orthonormal(long rows, long cols, std::uint64_t seed) {
  Eigen::HouseholderQR<Matrix> qr(o::random_matrix(rows, cols, seed));
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

Matrix with_singular_values(long n, const Eigen::VectorXd& sigma, std::uint64_t seed) {
  const long r = sigma.size();
  return orthonormal(n, r, seed) * sigma.asDiagonal() * orthonormal(n, r, seed + 1).transpose();
}

double orthonormality_defect(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

void check_factors(const LowRankState& x) {
  CHECK(orthonormality_defect(x.left) < 1e-10);
  CHECK(orthonormality_defect(x.right) < 1e-10);
  CHECK(x.left.cols() == x.rank());
  CHECK(x.right.cols() == x.rank());
  CHECK(x.core.cols() == x.rank());
  CHECK(x.rank() >= 1);
}

LowRankState constant_state(const PeriodicGrid& g, double c) {
  return truncate_fixed(Field::constant(g, c), 1);
}

TruncationPolicy tol(double theta) {
  TruncationPolicy p;
  p.theta = theta;
  return p;
}

}  // namespace

TEST_CASE("select_rank tail scan") {
  const Eigen::VectorXd sigma = (Eigen::VectorXd(3) << 1.0, 0.5, 1e-4).finished();
  CHECK(select_rank(sigma, tol(1e-3)) == 2);
  CHECK(select_rank(sigma, tol(0.6)) == 1);
  CHECK(select_rank(sigma, tol(2.0)) == 1);  // r_min floor, never 0
  CHECK(select_rank(sigma, tol(1e-6)) == 3);
  TruncationPolicy capped = tol(1e-12);
  capped.r_max = 2;
  CHECK(select_rank(sigma, capped) == 2);
  TruncationPolicy rel = tol(0.2);
  rel.mode = TruncationMode::relative;
  CHECK(select_rank(sigma, rel) == 2);  // tol = 0.2 * 1.118, tail after 1 is 0.5
  CHECK_THROWS_AS(select_rank(sigma, tol(0.0)), std::invalid_argument);
  TruncationPolicy bad = tol(1e-3);
  bad.r_min = 0;
  CHECK_THROWS_AS(select_rank(sigma, bad), std::invalid_argument);
}

TEST_CASE("truncated_svd") {
  const PeriodicGrid g = grid_n(8);
  SUBCASE("rank one outer product") {
    const Matrix w = o::random_matrix(8, 1, 1) * o::random_matrix(8, 1, 2).transpose();
    const LowRankState x = truncated_svd(Field(g, w), tol(1e-3));
    CHECK(x.rank() == 1);
    CHECK((reconstruct(x).values - w).cwiseAbs().maxCoeff() < 1e-12);
    check_factors(x);
  }
  SUBCASE("singular values (1, 0.5, 1e-4) keep rank 2") {
    const Matrix w = with_singular_values(8, (Eigen::VectorXd(3) << 1.0, 0.5, 1e-4).finished(), 3);
    const LowRankState x = truncated_svd(Field(g, w), tol(1e-3));
    CHECK(x.rank() == 2);
    CHECK((reconstruct(x).values - w).norm() <= 1e-3);
    check_factors(x);
  }
  SUBCASE("zero matrix floors at rank 1") {
    const LowRankState x = truncated_svd(Field(g), tol(1e-3));
    CHECK(x.rank() == 1);
    CHECK(x.core.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("non-finite input") {
    Matrix w = Matrix::Zero(8, 8);
    w(2, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(truncated_svd(Field(g, w), tol(1e-3)));
  }
}

TEST_CASE("truncate_fixed and Eckart-Young optimality") {
  const PeriodicGrid g = grid_n(8);
  const Matrix w = o::random_matrix(8, 8, 21);
  CHECK((reconstruct(truncate_fixed(Field(g, w), 8)).values - w).cwiseAbs().maxCoeff() < 1e-12);

  const Matrix two = with_singular_values(8, (Eigen::VectorXd(2) << 2.0, 1.0).finished(), 5);
  CHECK((reconstruct(truncate_fixed(Field(g, two), 1)).values - two).norm() ==
        doctest::Approx(1.0).epsilon(1e-12));

  const Eigen::VectorXd sigma = Eigen::JacobiSVD<Matrix>(w).singularValues();
  for (int r = 1; r <= 8; ++r) {
    const LowRankState x = truncate_fixed(Field(g, w), r);
    check_factors(x);
    const double tail = sigma.tail(8 - r).norm();
    CHECK(std::abs((reconstruct(x).values - w).norm() - tail) < 1e-10);
  }
  CHECK_THROWS_AS(truncate_fixed(Field(g, w), 0), std::invalid_argument);
  CHECK_THROWS_AS(truncate_fixed(Field(g, w), 9), std::invalid_argument);
}

TEST_CASE("rank_adaptive_nonlinear_step") {
  const PeriodicGrid g = grid_n(8);

  SUBCASE("zero dynamics on the stationary states") {
    for (double c : {-1.0, 0.0, 1.0}) {
      const LowRankState x = constant_state(g, c);
      const LowRankState y = rank_adaptive_nonlinear_step(x, 0.3, tol(1e-3));
      CHECK((reconstruct(y).values.array() - c).abs().maxCoeff() < 1e-10);
      check_factors(y);
      CHECK(y.rank() == 1);
    }
  }
  SUBCASE("identity limit") {
    const LowRankState x = truncate_fixed(Field(g, o::random_rank(8, 8, 2, 4)), 2);
    const Matrix w = reconstruct(x).values;
    const double drift = (w - w.cwiseProduct(w).cwiseProduct(w)).norm();
    for (double tau : {1e-4, 1e-6, 1e-8}) {
      const LowRankState y = rank_adaptive_nonlinear_step(x, tau, tol(1e-3));
      CHECK((reconstruct(y).values - w).norm() <= 2.0 * tau * drift + 1e-14);
    }
  }
  SUBCASE("agrees with the exact dense flow to the integrator's local order") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const double tau = 0.01, theta = 1e-8;
      const LowRankState x = truncate_fixed(Field(g, o::random_rank(8, 8, 2, 30 + seed)), 2);
      const LowRankState y = rank_adaptive_nonlinear_step(x, tau, tol(theta));
      const Field oracle =
          reconstruct(truncated_svd(nonlinear_flow_field(reconstruct(x), tau), tol(theta)));
      CHECK((reconstruct(y).values - oracle.values).norm() <= 5 * tau * tau + theta);
      check_factors(y);
      CHECK(y.rank() <= 2 * x.rank());
    }
  }
  SUBCASE("rank never exceeds twice the input or r_max") {
    const LowRankState x = truncate_fixed(Field(g, o::random_rank(8, 8, 3, 8)), 3);
    TruncationPolicy p = tol(1e-14);
    const LowRankState y = rank_adaptive_nonlinear_step(x, 0.5, p);
    CHECK(y.rank() <= 6);
    p.r_max = 4;
    CHECK(rank_adaptive_nonlinear_step(x, 0.5, p).rank() <= 4);
  }
  SUBCASE("guards") {
    const LowRankState x = constant_state(g, 0.5);
    CHECK_THROWS_AS(rank_adaptive_nonlinear_step(x, 0.0, tol(1e-3)), std::invalid_argument);
    IntegratorOptions opt;
    opt.rk_substeps = 0;
    CHECK_THROWS_AS(rank_adaptive_nonlinear_step(x, 0.1, tol(1e-3), opt), std::invalid_argument);
  }
}

TEST_CASE("biharmonic_flow_lowrank") {
  SUBCASE("constant state unchanged") {
    const PeriodicGrid g = grid_n(8);
    const SpectrumTables spec(g, 0.01);
    const LowRankState x = constant_state(g, 0.8);
    const LowRankState y = biharmonic_flow_lowrank(x, 0.2, spec, tol(1e-3));
    CHECK((reconstruct(y).values.array() - 0.8).abs().maxCoeff() < 1e-10);
  }
  SUBCASE("no truncation reproduces the dense substep") {
    const PeriodicGrid g = grid_n(8);
    const SpectrumTables spec(g, 0.01);
    const LowRankState x = truncate_fixed(Field(g, o::random_rank(8, 8, 3, 6)), 3);
    const LowRankState y = biharmonic_flow_lowrank(x, 0.1, spec, tol(1e-15));
    const Field dense = apply_biharmonic_exp(reconstruct(x), 0.1, spec);
    CHECK((reconstruct(y).values - dense.values).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("tolerance truncation error on rank-3 states at N = 16") {
    const PeriodicGrid g = build_grid(0, 32, 0, 32, 16, 16);
    const SpectrumTables spec(g, 0.01);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const LowRankState x = truncate_fixed(Field(g, o::random_rank(16, 16, 3, 60 + seed)), 3);
      const LowRankState y = biharmonic_flow_lowrank(x, 0.1, spec, tol(1e-3));
      const Field dense = apply_biharmonic_exp(reconstruct(x), 0.1, spec);
      CHECK((reconstruct(y).values - dense.values).norm() <= 1e-3);
      check_factors(y);
    }
  }
  SUBCASE("fixed-rank reading keeps the incoming rank") {
    const PeriodicGrid g = grid_n(8);
    const SpectrumTables spec(g, 0.01);
    const LowRankState x = truncate_fixed(Field(g, o::random_rank(8, 8, 3, 9)), 3);
    IntegratorOptions opt;
    opt.biharmonic_fixed_rank = true;
    CHECK(biharmonic_flow_lowrank(x, 0.1, spec, tol(1e-3), opt).rank() == 3);
  }
}

TEST_CASE("laplacian_flow_lowrank") {
  const PeriodicGrid g = build_grid(0, 8, 0, 6, 8, 6);
  const SpectrumTables spec(g, 0.01);

  const LowRankState x3 = truncate_fixed(Field(g, o::random_rank(8, 6, 3, 10)), 3);
  const LowRankState y3 = laplacian_flow_lowrank(x3, 0.2, spec);
  CHECK(y3.rank() == 3);
  check_factors(y3);

  const LowRankState c = constant_state(g, -0.6);
  CHECK((reconstruct(laplacian_flow_lowrank(c, 0.4, spec)).values.array() + 0.6).abs().maxCoeff() <
        1e-11);

  const LowRankState x2 = truncate_fixed(Field(g, o::random_rank(8, 6, 2, 11)), 2);
  const Matrix w = reconstruct(x2).values;
  const Matrix dense = o::expm_symmetric(o::circulant_laplacian(8, g.h_x), 0.05) * w *
                       o::expm_symmetric(o::circulant_laplacian(6, g.h_y), 0.05);
  CHECK((reconstruct(laplacian_flow_lowrank(x2, 0.05, spec)).values - dense).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("alrs_step and alrs_run") {
  const PeriodicGrid g = grid_n(8);
  const SpectrumTables spec(g, 0.01);

  SUBCASE("stationary states") {
    for (double c : {-1.0, 1.0}) {
      const LowRankState y = alrs_step(constant_state(g, c), 0.1, spec, tol(1e-3));
      CHECK((reconstruct(y).values.array() - c).abs().maxCoeff() < 1e-9);
    }
  }
  SUBCASE("without truncation equals one FRS step") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Field u(g, o::random_matrix(8, 8, 90 + seed));
      const LowRankState x = truncate_fixed(u, 8);
      const LowRankState y = alrs_step(x, 0.01, spec, tol(1e-12));
      CHECK((reconstruct(y).values - frs_step(u, 0.01, spec).values).norm() < 1e-7);
      check_factors(y);
    }
  }
  SUBCASE("run bookkeeping") {
    const LowRankState x = truncate_fixed(Field(g, o::random_rank(8, 8, 2, 3)), 2);
    const LowRankState zero = alrs_run(x, 0.05, 0, spec, tol(1e-3));
    CHECK((reconstruct(zero).values - reconstruct(x).values).cwiseAbs().maxCoeff() == 0.0);
    const LowRankState twice = alrs_step(alrs_step(x, 0.05, spec, tol(1e-3)), 0.05, spec, tol(1e-3));
    const LowRankState run2 = alrs_run(x, 0.05, 2, spec, tol(1e-3));
    CHECK((reconstruct(run2).values - reconstruct(twice).values).cwiseAbs().maxCoeff() == 0.0);
    std::vector<int> seen;
    alrs_run(x, 0.05, 3, spec, tol(1e-3), [&](int k, const LowRankState& s) {
      seen.push_back(k);
      check_factors(s);
    });
    CHECK(seen == std::vector<int>{1, 2, 3});
  }
}

TEST_CASE("Example 1 rank stays low") {
  const PeriodicGrid g = build_grid(0, 32, 0, 32, 128, 128);
  const SpectrumTables spec(g, 0.01);
  const LowRankState x0 = truncate_fixed(example1_initial(g), 4);
  int max_rank = 0;
  double max_u = 0.0;
  alrs_run(x0, 1.0 / 128, 128, spec, tol(1e-3), [&](int, const LowRankState& s) {
    max_rank = std::max(max_rank, s.rank());
    max_u = std::max(max_u, max_norm(reconstruct(s)));
  });
  CHECK(max_rank <= 12);
  CHECK(max_u <= 1.0 + 10 * 1e-3);
}

TEST_CASE("effective_rank") {
  const Matrix outer = o::random_matrix(8, 1, 1) * o::random_matrix(6, 1, 2).transpose();
  for (double t : {1e-12, 1e-3, 0.5, 0.99})
    CHECK(effective_rank(outer, t) == 1);

  Matrix padded = Matrix::Zero(6, 5);
  padded.topLeftCorner(3, 3).setIdentity();
  CHECK(effective_rank(padded, 0.5) == 3);

  const Matrix w = with_singular_values(8, (Eigen::VectorXd(3) << 1.0, 1e-2, 1e-7).finished(), 7);
  CHECK(effective_rank(w, 1e-3) == 2);
  CHECK(effective_rank(Matrix::Zero(4, 4), 1e-3) == 0);
}
