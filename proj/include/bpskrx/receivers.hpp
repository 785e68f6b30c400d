#pragma once

#include <Eigen/Dense>

#include "bpskrx/phase_noise.hpp"
#include "bpskrx/types.hpp"

namespace bpskrx {

/// Minimum error probability for discriminating the two noiseless signal
/// states: [1 - sqrt(1 - exp(-4 alpha^2))] / 2.
double helstrom_noiseless(double energy);

/// Homodyne benchmark in the noiseless case: [1 - erf(sqrt(2) alpha)] / 2.
double sql_noiseless(double energy);

/// Displace-and-on/off-detect receiver, noiseless: exp(-4 alpha^2) / 2.
double kennedy_noiseless(double energy);

/// MAP decision threshold for the displaced phase-diffused count
/// distributions. The real crossing point of the two count distributions
/// (continuous in the count via Gamma(x+1), tail bin excluded) is rounded up
/// and clamped to [1, M]. When the distributions do not cross below M the
/// threshold saturates at M (or 1 in the degenerate zero-energy case).
MapThreshold map_threshold(double energy, const NoiseModel& noise,
                           const PnrResolution& res, const PhaseGrid& grid);

/// Error probability of the displacement PNR(M) receiver with MAP
/// thresholding. With M = 1 and sigma = 0 this is the Kennedy receiver.
ErrorReport dpnr_error(double energy, const NoiseModel& noise,
                       const PnrResolution& res, const PhaseGrid& grid,
                       EvalDiagnostics* diag = nullptr);

/// Joint outcome probabilities p(delta, n | k) of the hybrid receiver:
/// rows delta = -M..M (index delta + M), columns n = 0..M.
Eigen::MatrixXd hynore_joint(int k, const ReceiverParams& params,
                             const PhaseGrid& grid,
                             EvalDiagnostics* diag = nullptr);

/// Single entry of the joint distribution above.
double hynore_joint(int k, const ReceiverParams& params, int delta, int n,
                    const PhaseGrid& grid);

/// Error probability of the hybrid receiver at fixed (tau, z). The decision
/// threshold is evaluated at the transmitted energy tau * alpha^2.
double hynore_error_at(const ReceiverParams& params, const PhaseGrid& grid,
                       EvalDiagnostics* diag = nullptr);

/// Minimizes the hybrid receiver error over tau in (0, 1] and z >= 0:
/// deterministic coarse grid scan (tau = 1 always included, so the result
/// never exceeds the DPNR error) followed by Nelder-Mead refinement seeded
/// from the best grid cells.
ErrorReport hynore_optimize(double energy, const NoiseModel& noise,
                            const PnrResolution& res, const PhaseGrid& grid,
                            EvalDiagnostics* diag = nullptr);

}  // namespace bpskrx
