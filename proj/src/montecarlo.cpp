#include "bpskrx/montecarlo.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "bpskrx/phase_noise.hpp"
#include "bpskrx/receivers.hpp"

namespace bpskrx {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

ShotRng::ShotRng(std::uint64_t seed, std::uint64_t stream) {
  state_ = mix64(seed + kGolden) ^ mix64(stream * 0xD1B54A32D192ED03ull + kGolden);
}

std::uint64_t ShotRng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double ShotRng::next_uniform() {
  return double((next_u64() >> 11) + 1) * 0x1.0p-53;
}

bool ShotRng::next_bit() { return (next_u64() & 1u) != 0; }

double ShotRng::next_normal() {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

long ShotRng::next_poisson(double mu) {
  if (mu < 0.0) throw std::domain_error("next_poisson: mu must be >= 0");
  if (mu == 0.0) return 0;
  if (mu < 10.0) {
    // Sequential inversion of the cdf.
    double p = std::exp(-mu);
    double cdf = p;
    const double u = next_uniform();
    long k = 0;
    while (u > cdf && k < 10000) {
      ++k;
      p *= mu / double(k);
      cdf += p;
    }
    return k;
  }
  // Hormann's transformed rejection (PTRS); exact for mu >= 10.
  const double b = 0.931 + 2.53 * std::sqrt(mu);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mu = std::log(mu);
  for (;;) {
    const double u = next_uniform() - 0.5;
    const double v = next_uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
    if (us >= 0.07 && v <= v_r) return long(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -mu + kf * log_mu - std::lgamma(kf + 1.0);
    if (lhs <= rhs) return long(kf);
  }
}

namespace {

template <typename ShotFn>
EstimateWithError run_shots(const ShotConfig& cfg, const ShotFn& shot_errors) {
  cfg.validate();
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads =
      cfg.threads > 0 ? unsigned(cfg.threads) : std::min<unsigned>(hw, 16);
  const std::uint64_t shots = cfg.shots;

  std::vector<std::uint64_t> tallies(n_threads, 0);
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    const std::uint64_t begin = shots * t / n_threads;
    const std::uint64_t end = shots * (t + 1) / n_threads;
    workers.emplace_back([&, t, begin, end] { tallies[t] = shot_errors(begin, end); });
  }
  for (auto& w : workers) w.join();

  std::uint64_t errors = 0;
  for (const auto tally : tallies) errors += tally;
  const double mean = double(errors) / double(shots);
  return {mean, std::sqrt(mean * (1.0 - mean) / double(shots)), shots};
}

long capped(long n, int m) { return n < m ? n : m; }

}  // namespace

EstimateWithError simulate_dpnr(const ShotConfig& cfg) {
  cfg.validate();
  const ReceiverParams& p = cfg.params;
  const PhaseGrid grid = make_grid(p.noise, cfg.quad_order);
  const int n_th = map_threshold(p.energy, p.noise, p.res, grid).n_th;
  const int m = p.res.effective();
  const double sigma = p.noise.sigma;

  return run_shots(cfg, [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t errors = 0;
    for (std::uint64_t s = begin; s < end; ++s) {
      ShotRng rng(cfg.seed, s);
      const int k = rng.next_bit() ? 1 : 0;
      const double phi = sigma > 0.0 ? sigma * rng.next_normal() : 0.0;
      const long n = capped(rng.next_poisson(count_rate(k, p.energy, phi)), m);
      const int decision = (n >= n_th) ? 1 : 0;
      errors += (decision != k);
    }
    return errors;
  });
}

EstimateWithError simulate_hynore(const ShotConfig& cfg) {
  cfg.validate();
  const ReceiverParams& p = cfg.params;
  const PhaseGrid grid = make_grid(p.noise, cfg.quad_order);
  const double transmitted = p.tau * p.energy;
  const int n_th = map_threshold(transmitted, p.noise, p.res, grid).n_th;
  const int m = p.res.effective();
  const double sigma = p.noise.sigma;
  const double a = std::sqrt(std::max(0.0, (1.0 - p.tau) * p.energy));
  const double base = 0.5 * (a * a + p.z * p.z);

  return run_shots(cfg, [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t errors = 0;
    for (std::uint64_t s = begin; s < end; ++s) {
      ShotRng rng(cfg.seed, s);
      const int k = rng.next_bit() ? 1 : 0;
      const double phi = sigma > 0.0 ? sigma * rng.next_normal() : 0.0;
      // Reflected amplitude: +a e^{-i phi} for k = 0, -a e^{-i phi} for k = 1.
      const double cross = (k == 0 ? 1.0 : -1.0) * a * p.z * std::cos(phi);
      const long n_plus = capped(rng.next_poisson(std::max(0.0, base + cross)), m);
      const long n_minus = capped(rng.next_poisson(std::max(0.0, base - cross)), m);
      const long delta = n_plus - n_minus;
      // delta >= 0 selects the displacement that nulls symbol 0.
      const bool guess_zero = delta >= 0;
      const int rate_symbol = guess_zero ? k : 1 - k;
      const long n = capped(rng.next_poisson(count_rate(rate_symbol, transmitted, phi)), m);
      const int decision = (guess_zero == (n < n_th)) ? 0 : 1;
      errors += (decision != k);
    }
    return errors;
  });
}

}  // namespace bpskrx
