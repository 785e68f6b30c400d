#include <doctest.h>

#include <cmath>
#include <random>

#include "bpskrx/pnr.hpp"

using namespace bpskrx;

namespace {

// Independent Poisson weights: plain term recursion p_{n+1} = p_n * mu/(n+1),
// no log-gamma involved.
double poisson_term_series(int n, double mu) {
  double p = std::exp(-mu);
  for (int j = 1; j <= n; ++j) p *= mu / j;
  return p;
}

}  // namespace

TEST_CASE("pnr_prob: vacuum detects nothing") {
  CHECK(pnr_prob(0, 0.0, PnrResolution::finite(1)) == 1.0);
  CHECK(pnr_prob(1, 0.0, PnrResolution::finite(1)) == 0.0);
}

TEST_CASE("pnr_prob: PNR(1) tail is the on-off click probability") {
  for (const double mu : {0.05, 0.7, 3.0, 42.0}) {
    CHECK(pnr_prob(1, mu, PnrResolution::finite(1)) ==
          doctest::Approx(1.0 - std::exp(-mu)).epsilon(1e-14));
  }
}

TEST_CASE("pnr_prob: resolved outcomes against a brute-force series") {
  CHECK(pnr_prob(2, 1.5, PnrResolution::finite(3)) ==
        doctest::Approx(poisson_term_series(2, 1.5)).epsilon(1e-14));
  for (const double mu : {0.3, 2.0, 17.5}) {
    for (int n = 0; n < 6; ++n) {
      CHECK(pnr_prob(n, mu, PnrResolution::finite(6)) ==
            doctest::Approx(poisson_term_series(n, mu)).epsilon(1e-12));
    }
  }
}

TEST_CASE("pnr_prob: domain errors") {
  CHECK_THROWS_AS(pnr_prob(2, 1.0, PnrResolution::finite(1)), std::domain_error);
  CHECK_THROWS_AS(pnr_prob(-1, 1.0, PnrResolution::finite(1)), std::domain_error);
  CHECK_THROWS_AS(pnr_prob(0, -0.5, PnrResolution::finite(1)), std::domain_error);
  CHECK_THROWS_AS(PnrResolution::finite(0), std::domain_error);
}

TEST_CASE("pnr_prob: normalization over outcomes") {
  for (const double mu : {0.0, 0.1, 1.0, 10.0, 100.0}) {
    for (const int m : {1, 3, 12}) {
      const auto res = PnrResolution::finite(m);
      double total = 0.0;
      for (int n = 0; n <= m; ++n) total += pnr_prob(n, mu, res);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("pnr_prob: tail mass is non-decreasing in mu") {
  const auto res = PnrResolution::finite(4);
  double prev = -1.0;
  for (double mu = 0.0; mu <= 40.0; mu += 0.5) {
    const double tail = pnr_prob(4, mu, res);
    CHECK(tail >= prev - 1e-15);
    prev = tail;
  }
}

TEST_CASE("pnr_prob: resolved probabilities do not depend on the resolution") {
  for (const double mu : {0.2, 4.0}) {
    for (int n = 0; n < 3; ++n) {
      const double a = pnr_prob(n, mu, PnrResolution::finite(3));
      const double b = pnr_prob(n, mu, PnrResolution::finite(9));
      CHECK(a == b);  // identical code path, bit-identical
    }
  }
}

TEST_CASE("pnr_distribution matches pnr_prob entrywise") {
  const auto res = PnrResolution::finite(5);
  const Eigen::VectorXd q = pnr_distribution(2.7, res);
  for (int n = 0; n <= 5; ++n) CHECK(q(n) == pnr_prob(n, 2.7, res));
}

TEST_CASE("branch_energies: trivial and hand-expanded cases") {
  const auto [a0, b0] = branch_energies(CoherentAmplitude(0, 0), 0.0);
  CHECK(a0 == 0.0);
  CHECK(b0 == 0.0);

  // gamma = z real: destructive interference empties the minus port
  const auto [ap, am] = branch_energies(CoherentAmplitude(0.8, 0), 0.8);
  CHECK(ap == doctest::Approx(2.0 * 0.8 * 0.8).epsilon(1e-15));
  CHECK(am == 0.0);

  // |0.3+0.4i + 1|^2/2 = (1.3^2 + 0.4^2)/2, |0.3+0.4i - 1|^2/2 = (0.7^2+0.4^2)/2
  const auto [cp, cm] = branch_energies(CoherentAmplitude(0.3, 0.4), 1.0);
  CHECK(cp == doctest::Approx(0.925).epsilon(1e-15));
  CHECK(cm == doctest::Approx(0.325).epsilon(1e-15));

  CHECK_THROWS_AS(branch_energies(CoherentAmplitude(1, 0), -0.1), std::domain_error);
}

TEST_CASE("hl_distribution: double vacuum sits at delta = 0") {
  for (const int m : {1, 2, 5}) {
    const HlDistribution s = hl_distribution(0.0, 0.0, PnrResolution::finite(m));
    CHECK(s(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.sum() == doctest::Approx(1.0).epsilon(1e-15));
    for (int d = -m; d <= m; ++d) {
      if (d != 0) CHECK(s(d) == 0.0);
    }
  }
}

TEST_CASE("hl_distribution: reflecting the signal mirrors the photocurrent") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> amp(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double g = amp(rng);
    const double z = amp(rng);
    const int m = 1 + int(rng() % 4);
    const auto res = PnrResolution::finite(m);
    const HlDistribution s = hl_distribution(CoherentAmplitude(g, 0), z, res);
    const HlDistribution r = hl_distribution(CoherentAmplitude(-g, 0), z, res);
    for (int d = -m; d <= m; ++d) {
      CHECK(r(d) == doctest::Approx(s(-d)).epsilon(1e-14));
    }
  }
}

TEST_CASE("hl_distribution: full vector against pair enumeration") {
  const auto res = PnrResolution::finite(3);
  const double g = 0.5, z = 1.2;
  const HlDistribution s = hl_distribution(CoherentAmplitude(g, 0), z, res);

  // Oracle: enumerate all 16 (n, m) outcome pairs with independently built
  // Poisson terms and explicit tail sums.
  const double mu_p = 0.5 * (g + z) * (g + z);
  const double mu_m = 0.5 * (g - z) * (g - z);
  const auto q = [&](int n, double mu) {
    if (n < 3) return poisson_term_series(n, mu);
    return 1.0 - poisson_term_series(0, mu) - poisson_term_series(1, mu) -
           poisson_term_series(2, mu);
  };
  Eigen::VectorXd expect = Eigen::VectorXd::Zero(7);
  for (int n = 0; n <= 3; ++n)
    for (int k = 0; k <= 3; ++k) expect(n - k + 3) += q(n, mu_p) * q(k, mu_m);

  for (int d = -3; d <= 3; ++d) CHECK(s(d) == doctest::Approx(expect(d + 3)).epsilon(1e-13));
  CHECK(s.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hl_distribution: normalization for randomized configurations") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const CoherentAmplitude g(4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0);
    const double z = 3.0 * u(rng);
    const auto res = PnrResolution::finite(1 + int(rng() % 6));
    CHECK(hl_distribution(g, z, res).sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("hl_distribution: capped-infinite detectors flag heavy tails") {
  EvalDiagnostics diag;
  hl_distribution(CoherentAmplitude(1.0, 0), 0.5, PnrResolution::infinite(30), &diag);
  CHECK_FALSE(diag.truncation_warning());

  EvalDiagnostics bad;
  hl_distribution(CoherentAmplitude(9.0, 0), 1.0, PnrResolution::infinite(30), &bad);
  CHECK(bad.truncation_warning());
}
