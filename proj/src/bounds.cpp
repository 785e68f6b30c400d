#include "bpskrx/bounds.hpp"

#include <cmath>
#include <string>

namespace bpskrx {

int default_fock_dim(double energy) {
  if (energy < 0.0) throw std::domain_error("default_fock_dim: energy must be >= 0");
  return int(std::ceil(energy + 12.0 * std::sqrt(energy + 1.0) + 20.0)) + 1;
}

Eigen::VectorXcd coherent_fock_coefficients(CoherentAmplitude beta, int dim) {
  if (dim < 1) throw std::domain_error("coherent_fock_coefficients: dim must be >= 1");
  Eigen::VectorXcd c(dim);
  const double r = std::abs(beta);
  if (r == 0.0) {
    c.setZero();
    c(0) = 1.0;
    return c;
  }
  const double theta = std::arg(beta);
  const double log_r = std::log(r);
  double log_fact = 0.0;  // log(n!)
  for (int n = 0; n < dim; ++n) {
    if (n > 0) log_fact += std::log(double(n));
    const double mag = std::exp(-0.5 * r * r + n * log_r - 0.5 * log_fact);
    c(n) = std::polar(mag, n * theta);
  }
  return c;
}

FockOperator dephased_rho(int k, double energy, const NoiseModel& noise,
                          const PhaseGrid& grid, int dim) {
  if (k != 0 && k != 1) throw std::domain_error("dephased_rho: k must be 0 or 1");
  if (energy < 0.0) throw std::domain_error("dephased_rho: energy must be >= 0");
  if (grid.sigma != noise.sigma)
    throw std::invalid_argument("dephased_rho: grid does not match noise model");

  // The phase shift preserves |beta| = sqrt(energy), so one tail check covers
  // every node.
  const double amplitude = std::sqrt(energy);
  {
    const Eigen::VectorXcd probe = coherent_fock_coefficients(amplitude, dim);
    const double tail = 1.0 - probe.squaredNorm();
    if (tail > 1e-12)
      throw std::invalid_argument(
          "dephased_rho: truncation dim " + std::to_string(dim) +
          " too small (tail mass " + std::to_string(tail) + "); need dim >= " +
          std::to_string(default_fock_dim(energy)));
  }

  const double sign = (k == 0) ? -1.0 : 1.0;  // alpha_0 = -alpha, alpha_1 = +alpha
  FockOperator rho = FockOperator::Zero(dim, dim);
  for (int i = 0; i < grid.size(); ++i) {
    const double phi = grid.nodes(i);
    const CoherentAmplitude beta =
        sign * amplitude * CoherentAmplitude(std::cos(phi), -std::sin(phi));
    const Eigen::VectorXcd c = coherent_fock_coefficients(beta, dim);
    rho.noalias() += grid.weights(i) * (c * c.adjoint());
  }
  return rho;
}

double helstrom_bound(double energy, const NoiseModel& noise,
                      const PhaseGrid& grid, int dim) {
  const FockOperator rho0 = dephased_rho(0, energy, noise, grid, dim);
  const FockOperator rho1 = dephased_rho(1, energy, noise, grid, dim);
  const FockOperator lambda = rho0 - rho1;
  Eigen::SelfAdjointEigenSolver<FockOperator> solver(lambda, Eigen::EigenvaluesOnly);
  const double trace_norm = solver.eigenvalues().cwiseAbs().sum();
  return 0.5 * (1.0 - 0.5 * trace_norm);
}

double sql_error(double energy, const NoiseModel& noise, const PhaseGrid& grid) {
  if (energy < 0.0) throw std::domain_error("sql_error: energy must be >= 0");
  if (grid.sigma != noise.sigma)
    throw std::invalid_argument("sql_error: grid does not match noise model");
  const double amplitude = std::sqrt(energy);
  double acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double c = std::cos(grid.nodes(i));
    acc += grid.weights(i) * 0.5 * std::erfc(std::sqrt(2.0) * amplitude * c);
  }
  return acc;
}

}  // namespace bpskrx
