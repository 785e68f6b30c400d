#include <doctest.h>

#include <cmath>

#include "bpskrx/bounds.hpp"
#include "bpskrx/receivers.hpp"

using namespace bpskrx;

namespace {
PhaseGrid grid_for(double sigma, int order = 64) { return make_grid(NoiseModel{sigma}, order); }
}  // namespace

TEST_CASE("coherent_fock_coefficients: normalized at the default dimension") {
  for (const double energy : {0.1, 1.0, 4.0, 25.0}) {
    const int dim = default_fock_dim(energy);
    const Eigen::VectorXcd c = coherent_fock_coefficients(std::sqrt(energy), dim);
    CHECK(1.0 - c.squaredNorm() < 1e-12);
  }
  const Eigen::VectorXcd vac = coherent_fock_coefficients(0.0, 8);
  CHECK(vac(0) == Complex(1.0, 0.0));
  CHECK(vac.tail(7).norm() == 0.0);
}

TEST_CASE("dephased_rho: zero noise gives a pure projector") {
  const NoiseModel off{0.0};
  const PhaseGrid g = grid_for(0.0);
  for (const int k : {0, 1}) {
    const FockOperator rho = dephased_rho(k, 2.0, off, g, default_fock_dim(2.0));
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-8);
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<FockOperator> es(rho, Eigen::EigenvaluesOnly);
    CHECK(std::abs(es.eigenvalues().maxCoeff() - 1.0) < 1e-10);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("dephased_rho: vacuum input is unaffected by the phase noise") {
  const NoiseModel noise{0.4};
  const PhaseGrid g = grid_for(0.4);
  const FockOperator rho = dephased_rho(0, 0.0, noise, g, 12);
  CHECK(std::abs(rho(0, 0).real() - 1.0) < 1e-12);
  CHECK(rho.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dephased_rho: purity decreases with the noise level") {
  const double energy = 2.0;
  const int dim = default_fock_dim(energy);
  double prev = 1.1;
  for (const double sigma : {0.05, 0.1, 0.2}) {
    const NoiseModel noise{sigma};
    const FockOperator rho = dephased_rho(0, energy, noise, grid_for(sigma), dim);
    const double purity = (rho * rho).trace().real();
    CHECK(purity < 1.0);
    CHECK(purity < prev);
    prev = purity;
  }
}

TEST_CASE("dephased_rho: undersized basis is rejected with the needed size") {
  const NoiseModel noise{0.1};
  const PhaseGrid g = grid_for(0.1);
  CHECK_THROWS_WITH_AS(dephased_rho(0, 4.0, noise, g, 5),
                       doctest::Contains("need dim"), std::invalid_argument);
}

TEST_CASE("helstrom_bound: identical states cannot be told apart") {
  const NoiseModel noise{0.3};
  CHECK(helstrom_bound(0.0, noise, grid_for(0.3), 16) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("helstrom_bound: recovers the noiseless closed form as sigma -> 0") {
  const NoiseModel tiny{1e-6};
  const PhaseGrid g = grid_for(1e-6);
  for (const double energy : {0.5, 1.0, 4.0}) {
    const double numeric = helstrom_bound(energy, tiny, g, default_fock_dim(energy));
    CHECK(std::abs(numeric - helstrom_noiseless(energy)) < 1e-6);
  }
}

TEST_CASE("helstrom_bound: difference operator is traceless") {
  const NoiseModel noise{0.15};
  const PhaseGrid g = grid_for(0.15);
  const int dim = default_fock_dim(1.5);
  const FockOperator lambda = dephased_rho(0, 1.5, noise, g, dim) -
                              dephased_rho(1, 1.5, noise, g, dim);
  CHECK(std::abs(lambda.trace()) < 1e-8);
}

TEST_CASE("helstrom_bound: stable under enlarging the basis") {
  const NoiseModel noise{0.1};
  const PhaseGrid g = grid_for(0.1);
  const int dim = default_fock_dim(1.0);
  const double a = helstrom_bound(1.0, noise, g, dim);
  const double b = helstrom_bound(1.0, noise, g, dim + 20);
  CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("helstrom_bound: non-decreasing in the noise level") {
  const double energy = 1.0;
  const int dim = default_fock_dim(energy);
  double prev = 0.0;
  for (const double sigma : {0.0, 0.05, 0.1, 0.2, 0.4}) {
    const double v = helstrom_bound(energy, NoiseModel{sigma}, grid_for(sigma), dim);
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
}

TEST_CASE("helstrom_bound: below every receiver and the SQL") {
  const NoiseModel noise{0.1};
  const PhaseGrid g = grid_for(0.1);
  const double hel = helstrom_bound(1.0, noise, g, default_fock_dim(1.0));
  const double sql = sql_error(1.0, noise, g);
  const double dpnr = dpnr_error(1.0, noise, PnrResolution::finite(2), g).p_err;
  const double hy = hynore_optimize(1.0, noise, PnrResolution::finite(2), g).p_err;
  CHECK(hel <= sql + 1e-9);
  CHECK(hel <= dpnr + 1e-9);
  CHECK(hel <= hy + 1e-9);
  CHECK(sql <= 0.5 + 1e-12);
}

TEST_CASE("sql_error: noiseless limit and degenerate input") {
  const PhaseGrid g0 = grid_for(0.0);
  for (const double energy : {0.2, 1.0, 4.0}) {
    CHECK(std::abs(sql_error(energy, NoiseModel{0.0}, g0) - sql_noiseless(energy)) < 1e-12);
  }
  const PhaseGrid g = grid_for(0.3);
  CHECK(sql_error(0.0, NoiseModel{0.3}, g) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sql_error: against the raw two-dimensional integral") {
  // Oracle: integrate the quadrature-outcome density over x numerically with
  // Simpson's rule instead of reducing it to erfc terms.
  const double energy = 4.0, sigma = 0.1;
  const NoiseModel noise{sigma};
  const PhaseGrid g = grid_for(sigma);
  const double amplitude = std::sqrt(energy);

  const auto p_hd = [&](double x, int k) {
    const double mean_sign = (k == 0) ? -1.0 : 1.0;
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      const double mean = 2.0 * mean_sign * amplitude * std::cos(g.nodes(i));
      acc += g.weights(i) * std::exp(-0.5 * (x - mean) * (x - mean)) / std::sqrt(2.0 * M_PI);
    }
    return acc;
  };
  const double x_max = 2.0 * amplitude + 12.0;
  const int steps = 8000;  // Simpson over [0, x_max]
  const double h = x_max / steps;
  double wrong0 = p_hd(0.0, 0) + p_hd(x_max, 0);
  double wrong1 = p_hd(0.0, 1) + p_hd(x_max, 1);
  for (int i = 1; i < steps; ++i) {
    const double w = (i % 2 == 1) ? 4.0 : 2.0;
    wrong0 += w * p_hd(i * h, 0);      // decide "1" on x > 0 although k = 0
    wrong1 += w * p_hd(-i * h, 1);     // decide "0" on x < 0 although k = 1
  }
  const double oracle = 0.5 * (wrong0 + wrong1) * h / 3.0;
  CHECK(std::abs(sql_error(energy, noise, g) - oracle) < 1e-8);
}

TEST_CASE("sql_error: near-optimal in the large-noise limit") {
  const NoiseModel noise{1.0};
  const PhaseGrid g = grid_for(1.0);
  const double sql = sql_error(1.0, noise, g);
  const double hel = helstrom_bound(1.0, noise, g, default_fock_dim(1.0));
  CHECK((sql - hel) / hel < 0.1);
}
