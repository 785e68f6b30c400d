#pragma once

#include <Eigen/Dense>

#include "bpskrx/phase_noise.hpp"
#include "bpskrx/types.hpp"

namespace bpskrx {

/// Density operators live in a truncated photon-number basis as dense
/// Hermitian matrices.
using FockOperator = Eigen::MatrixXcd;

/// Truncation dimension that keeps the coherent-state tail mass below 1e-12
/// for the given energy (with margin).
int default_fock_dim(double energy);

/// Number-basis coefficients <n|beta> of a coherent state, n = 0..dim-1.
Eigen::VectorXcd coherent_fock_coefficients(CoherentAmplitude beta, int dim);

/// Phase-diffused signal state for symbol k: the Gaussian phase average of
/// coherent projectors. Throws if the truncation dimension cannot hold the
/// state to 1e-12 tail mass; the message names the required dimension.
FockOperator dephased_rho(int k, double energy, const NoiseModel& noise,
                          const PhaseGrid& grid, int dim);

/// Minimum achievable discrimination error for the two dephased states,
/// via the trace norm of their difference in the truncated basis.
double helstrom_bound(double energy, const NoiseModel& noise,
                      const PhaseGrid& grid, int dim);

/// Homodyne benchmark under phase diffusion. The quadrature-outcome integrals
/// reduce analytically to a single phase average of erfc terms.
double sql_error(double energy, const NoiseModel& noise, const PhaseGrid& grid);

}  // namespace bpskrx
