#pragma once

#include <cstdint>

#include "bpskrx/types.hpp"

namespace bpskrx {

/// Counter-based random stream: each (seed, stream) pair yields an
/// independent deterministic sequence, so per-shot streams make estimates
/// reproducible bit-for-bit regardless of batching or thread count.
class ShotRng {
 public:
  ShotRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_uniform();          // in (0, 1]
  bool next_bit();
  double next_normal();           // standard normal, Box-Muller
  long next_poisson(double mu);   // exact for any mu >= 0

 private:
  std::uint64_t state_;
};

struct ShotConfig {
  std::uint64_t shots = 1'000'000;
  std::uint64_t seed = 1;
  ReceiverParams params;
  int quad_order = 64;  // used only to derive the MAP threshold
  int threads = 0;      // 0 = hardware concurrency

  void validate() const {
    if (shots < 1) throw std::domain_error("ShotConfig: shots must be >= 1");
    params.validate();
  }
};

struct EstimateWithError {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t shots = 0;
};

/// Shot-by-shot simulation of the displacement PNR(M) receiver: random
/// symbol, Gaussian phase kick, Poisson count capped at M, MAP threshold.
EstimateWithError simulate_dpnr(const ShotConfig& cfg);

/// Shot-by-shot simulation of the hybrid receiver: beam splitter, HL
/// detection with capped Poisson counts on both ports, sign-conditioned
/// displacement, capped Poisson count, four-cell decision rule.
EstimateWithError simulate_hynore(const ShotConfig& cfg);

}  // namespace bpskrx
