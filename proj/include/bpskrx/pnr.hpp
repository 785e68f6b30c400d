#pragma once

#include <Eigen/Dense>
#include <utility>

#include "bpskrx/types.hpp"

namespace bpskrx {

/// Probability of outcome n from PNR(M) detection of light with Poissonian
/// statistics and mean photon number mu. Outcomes n < M carry the plain
/// Poisson weight; the outcome n = M pools the whole tail.
double pnr_prob(int n, double mu, const PnrResolution& res);

/// All PNR(M) outcome probabilities at once, indexed n = 0..M. The tail entry
/// is computed as one minus the resolved mass, so the vector sums to one up
/// to rounding.
Eigen::VectorXd pnr_distribution(double mu, const PnrResolution& res);

/// Poisson tail mass P(X >= n) at mean mu; used for truncation checks.
double poisson_tail(int n, double mu);

/// Mean photon numbers on the two output ports of a balanced beam splitter
/// mixing signal gamma with a real local oscillator z: |gamma +- z|^2 / 2.
std::pair<double, double> branch_energies(CoherentAmplitude gamma, double z);

/// Distribution of the difference photocurrent Delta = n - m of homodyne-like
/// detection, Delta in {-M, ..., +M}.
struct HlDistribution {
  Eigen::VectorXd values;  // index Delta + resolution
  int resolution = 1;

  double operator()(int delta) const { return values(delta + resolution); }
  double sum() const { return values.sum(); }
};

/// Homodyne-like detection of a coherent signal gamma with local oscillator
/// z >= 0 and PNR(M) detectors on both ports.
HlDistribution hl_distribution(CoherentAmplitude gamma, double z,
                               const PnrResolution& res,
                               EvalDiagnostics* diag = nullptr);

}  // namespace bpskrx
