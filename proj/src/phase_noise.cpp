#include "bpskrx/phase_noise.hpp"

#include <cmath>

#include "bpskrx/pnr.hpp"

namespace bpskrx {

PhaseGrid make_grid(const NoiseModel& noise, int order) {
  noise.validate();
  if (order < 1) throw std::domain_error("make_grid: order must be >= 1");

  PhaseGrid grid;
  grid.sigma = noise.sigma;
  grid.order = order;

  if (noise.sigma == 0.0) {
    grid.nodes = Eigen::ArrayXd::Zero(1);
    grid.weights = Eigen::ArrayXd::Ones(1);
    return grid;
  }

  const double sigma = noise.sigma;
  const double half_range = 8.5 * sigma;  // Gaussian mass beyond is < 1e-16
  // Node count: `order` plus what is needed so the sampling frequency
  // pi*(N-1)/L exceeds 2*order harmonics plus the Gaussian spectral width.
  const double needed = (half_range / M_PI) * (2.0 * order + 9.5 / sigma);
  int n = order + int(std::ceil(needed));
  if (n % 2 == 0) ++n;  // odd count: includes phi = 0, symmetric by pairs

  grid.nodes = Eigen::ArrayXd::Zero(n);
  grid.weights = Eigen::ArrayXd::Zero(n);
  const int half = n / 2;
  const double h = half_range / half;
  double total = 0.0;
  for (int j = 1; j <= half; ++j) {
    const double phi = h * j;
    const double w = std::exp(-phi * phi / (2.0 * sigma * sigma));
    grid.nodes(half + j) = phi;
    grid.nodes(half - j) = -phi;
    grid.weights(half + j) = w;
    grid.weights(half - j) = w;
    total += 2.0 * w;
  }
  grid.nodes(half) = 0.0;
  grid.weights(half) = 1.0;
  total += 1.0;
  grid.weights /= total;
  return grid;
}

double count_rate(int k, double energy, double phi) {
  if (energy < 0.0) throw std::domain_error("count_rate: energy must be >= 0");
  if (k != 0 && k != 1) throw std::domain_error("count_rate: k must be 0 or 1");
  const double s = (k == 0) ? std::sin(0.5 * phi) : std::cos(0.5 * phi);
  return 4.0 * energy * s * s;
}

Eigen::VectorXd dpnr_count_distribution(int k, double energy,
                                        const NoiseModel& noise,
                                        const PnrResolution& res,
                                        const PhaseGrid& grid,
                                        EvalDiagnostics* diag) {
  res.validate();
  if (grid.sigma != noise.sigma)
    throw std::invalid_argument("dpnr_count_distribution: grid does not match noise model");
  const int m = res.effective();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(m + 1);
  for (int i = 0; i < grid.size(); ++i) {
    const double mu = count_rate(k, energy, grid.nodes(i));
    const Eigen::VectorXd q = pnr_distribution(mu, res);
    if (diag && res.is_infinite) diag->note_tail(q(m));
    p.noalias() += grid.weights(i) * q;
  }
  return p;
}

}  // namespace bpskrx
