#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>

namespace bpskrx {

using Complex = std::complex<double>;

/// Field amplitude of a coherent state. The mean photon number is |amp|^2.
using CoherentAmplitude = Complex;

/// Photon-number resolution of a PNR(M) detector. Counts 0..m-1 are resolved
/// exactly; all higher counts are pooled into the outcome m. An "infinite"
/// resolution detector is represented by a finite cap; evaluations flag a
/// truncation warning whenever the pooled tail carries non-negligible mass.
struct PnrResolution {
  int m = 1;
  bool is_infinite = false;
  int cap = 30;

  static PnrResolution finite(int m) {
    if (m < 1) throw std::domain_error("PnrResolution: m must be >= 1");
    return {m, false, 30};
  }
  static PnrResolution infinite(int cap = 30) {
    if (cap < 1) throw std::domain_error("PnrResolution: cap must be >= 1");
    return {1, true, cap};
  }

  int effective() const { return is_infinite ? cap : m; }

  void validate() const {
    if (m < 1) throw std::domain_error("PnrResolution: m must be >= 1");
    if (is_infinite && cap < 1)
      throw std::domain_error("PnrResolution: cap must be >= 1");
  }
};

/// Gaussian phase-diffusion channel: a random phase shift phi ~ N(0, sigma^2)
/// applied to the signal. sigma is the standard deviation in radians.
struct NoiseModel {
  double sigma = 0.0;

  void validate() const {
    if (!(sigma >= 0.0)) throw std::domain_error("NoiseModel: sigma must be >= 0");
  }
};

enum class ReceiverTag { Kennedy, Dpnr, Hynore, Sql, Helstrom };

std::string to_string(ReceiverTag tag);
ReceiverTag receiver_from_string(const std::string& name);

/// Parameters of the displacement-based receivers. `tau` and `z` only matter
/// for the hybrid receiver; the Kennedy/DPNR setups are the degenerate case
/// tau = 1 (no reflected branch).
struct ReceiverParams {
  double energy = 0.0;  // signal energy alpha^2
  double tau = 1.0;     // beam-splitter transmissivity, in (0, 1]
  double z = 0.0;       // local-oscillator amplitude of the HL stage, >= 0
  PnrResolution res;
  NoiseModel noise;

  void validate() const {
    if (!(energy >= 0.0)) throw std::domain_error("ReceiverParams: energy must be >= 0");
    if (!(tau > 0.0 && tau <= 1.0)) throw std::domain_error("ReceiverParams: tau must be in (0, 1]");
    if (!(z >= 0.0)) throw std::domain_error("ReceiverParams: z must be >= 0");
    res.validate();
    noise.validate();
  }
};

/// MAP decision threshold: counts n < n_th are read as "0", counts n >= n_th
/// as "1". Always in [1, M].
struct MapThreshold {
  int n_th = 1;
};

/// Result of an error-probability evaluation. With equal priors a blind guess
/// achieves 1/2, so any p_err above 0.5 signals a decision-rule bug.
struct ErrorReport {
  double p_err = 0.5;
  double tau_opt = 1.0;
  double z_opt = 0.0;
  int n_th = 1;
  ReceiverTag receiver = ReceiverTag::Dpnr;
};

/// Collects numerical health flags across evaluations. Passing a diagnostics
/// sink is optional everywhere; evaluations are pure either way.
struct EvalDiagnostics {
  static constexpr double tail_tolerance = 1e-10;

  double worst_tail = 0.0;

  void note_tail(double tail) { worst_tail = std::max(worst_tail, tail); }
  bool truncation_warning() const { return worst_tail >= tail_tolerance; }
  void merge(const EvalDiagnostics& other) { note_tail(other.worst_tail); }
};

inline ErrorReport make_error_report(double p_err, double tau_opt, double z_opt,
                                     int n_th, ReceiverTag tag) {
  if (p_err > 0.5 + 1e-9)
    throw std::logic_error("ErrorReport: p_err " + std::to_string(p_err) +
                           " exceeds 0.5; decision rule is broken");
  return {p_err, tau_opt, z_opt, n_th, tag};
}

}  // namespace bpskrx
