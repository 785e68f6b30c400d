#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bpskrx/types.hpp"

namespace bpskrx {

struct GainValue {
  double gain = 0.0;  // 1 - p_receiver / p_sql; positive iff the SQL is beaten
};

/// Advantage of a receiver over the homodyne benchmark at the same point.
GainValue gain(double p_receiver, double p_sql);

struct SigmaMax {
  double sigma_max = 0.0;  // largest tolerable phase noise, radians
};

struct SigmaMaxOptions {
  double sigma_hi = 1.5;   // scan ceiling
  double step = 0.01;      // scan resolution
  double refine = 1e-4;    // bisection tolerance at the boundary
  int quad_order = 64;
  int threads = 0;         // 0 = hardware concurrency
};

/// Largest noise level at which the receiver still matches or beats the SQL
/// for the given energy. Scans a sigma grid (the gain need not be monotone)
/// and bisects the last non-negative-gain boundary. Returns 0 when the
/// receiver already loses at sigma = 0.
SigmaMax sigma_max(double energy, const PnrResolution& res, ReceiverTag receiver,
                   const SigmaMaxOptions& opts = {});

struct SweepSpec {
  enum class Variable { Alpha2, Sigma };

  Variable variable = Variable::Alpha2;
  double from = 0.0;
  double to = 0.0;
  double step = 0.1;
  double fixed_alpha2 = 1.0;  // used when sweeping sigma
  double fixed_sigma = 0.0;   // used when sweeping alpha2
  std::vector<PnrResolution> resolutions = {PnrResolution::finite(1)};
  std::vector<ReceiverTag> receivers = {ReceiverTag::Dpnr};
  int quad_order = 64;
  int fock_dim = 0;  // 0 = auto from energy
  bool mc_validate = false;
  std::uint64_t shots = 10'000'000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  bool verify = false;  // recompute at doubled quadrature order / larger basis
};

struct SweepRow {
  double alpha2 = 0.0;
  double sigma = 0.0;
  std::optional<PnrResolution> res;  // empty for SQL / Helstrom rows
  ReceiverTag receiver = ReceiverTag::Dpnr;
  double p_err = 0.5;
  double gain = 0.0;
  std::optional<double> tau_opt;
  std::optional<double> z_opt;
  std::optional<int> n_th;
  std::optional<double> mc_mean;
  std::optional<double> mc_stderr;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool has_mc_columns = false;
  bool truncation_warning = false;
  double verify_worst_change = 0.0;  // filled when SweepSpec::verify is on

  bool verify_failed() const { return verify_worst_change >= 1e-9; }
};

/// Evaluates every requested receiver at every point of the sweep. Points run
/// in a worker pool; rows come back sorted by the swept variable and then by
/// a fixed receiver/resolution order, independent of scheduling.
SweepResult run_sweep(const SweepSpec& spec);

/// CSV persistence. Full 17-significant-digit decimals, '.' decimal point,
/// fixed header; numbers survive a write/read round trip bit-exactly.
void write_csv(std::ostream& out, const SweepResult& result);
std::string to_csv(const SweepResult& result);
SweepResult read_csv(std::istream& in);

}  // namespace bpskrx
