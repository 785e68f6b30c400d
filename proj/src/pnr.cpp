#include "bpskrx/pnr.hpp"

#include <array>
#include <cmath>

namespace bpskrx {

namespace {

// log(n!) for the outcome range used in hot loops; std::lgamma beyond.
constexpr int kLogFactTableSize = 256;

const std::array<double, kLogFactTableSize>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kLogFactTableSize> t{};
    t[0] = 0.0;
    for (int n = 1; n < kLogFactTableSize; ++n) t[n] = t[n - 1] + std::log(double(n));
    return t;
  }();
  return table;
}

double log_factorial(int n) {
  if (n < kLogFactTableSize) return log_factorial_table()[n];
  return std::lgamma(double(n) + 1.0);
}

// Plain Poisson weight exp(-mu) mu^n / n!, evaluated in log space so it stays
// finite for mu up to ~1e4.
double poisson_pmf(int n, double mu) {
  if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(double(n) * std::log(mu) - mu - log_factorial(n));
}

}  // namespace

double poisson_tail(int n, double mu) {
  if (n <= 0) return 1.0;
  if (mu < 0.0) throw std::domain_error("poisson_tail: mu must be >= 0");
  double resolved = 0.0;
  for (int j = 0; j < n; ++j) resolved += poisson_pmf(j, mu);
  return std::max(0.0, 1.0 - resolved);
}

double pnr_prob(int n, double mu, const PnrResolution& res) {
  res.validate();
  const int m = res.effective();
  if (n < 0 || n > m) throw std::domain_error("pnr_prob: outcome n out of range 0..M");
  if (mu < 0.0) throw std::domain_error("pnr_prob: mu must be >= 0");
  if (n < m) return poisson_pmf(n, mu);
  return poisson_tail(m, mu);
}

Eigen::VectorXd pnr_distribution(double mu, const PnrResolution& res) {
  res.validate();
  if (mu < 0.0) throw std::domain_error("pnr_distribution: mu must be >= 0");
  const int m = res.effective();
  Eigen::VectorXd q(m + 1);
  double resolved = 0.0;
  for (int n = 0; n < m; ++n) {
    q(n) = poisson_pmf(n, mu);
    resolved += q(n);
  }
  q(m) = std::max(0.0, 1.0 - resolved);
  return q;
}

std::pair<double, double> branch_energies(CoherentAmplitude gamma, double z) {
  if (z < 0.0) throw std::domain_error("branch_energies: z must be >= 0");
  const double plus = 0.5 * std::norm(gamma + z);
  const double minus = 0.5 * std::norm(gamma - z);
  return {plus, minus};
}

HlDistribution hl_distribution(CoherentAmplitude gamma, double z,
                               const PnrResolution& res, EvalDiagnostics* diag) {
  const auto [mu_plus, mu_minus] = branch_energies(gamma, z);
  const int m = res.effective();
  const Eigen::VectorXd qp = pnr_distribution(mu_plus, res);
  const Eigen::VectorXd qm = pnr_distribution(mu_minus, res);
  if (diag && res.is_infinite) {
    diag->note_tail(qp(m));
    diag->note_tail(qm(m));
  }
  HlDistribution out;
  out.resolution = m;
  out.values = Eigen::VectorXd::Zero(2 * m + 1);
  for (int n = 0; n <= m; ++n)
    for (int k = 0; k <= m; ++k) out.values(n - k + m) += qp(n) * qm(k);
  return out;
}

std::string to_string(ReceiverTag tag) {
  switch (tag) {
    case ReceiverTag::Kennedy: return "Kennedy";
    case ReceiverTag::Dpnr: return "DPNR";
    case ReceiverTag::Hynore: return "HYNORE";
    case ReceiverTag::Sql: return "SQL";
    case ReceiverTag::Helstrom: return "Helstrom";
  }
  throw std::logic_error("to_string: unknown receiver tag");
}

ReceiverTag receiver_from_string(const std::string& name) {
  if (name == "Kennedy" || name == "KENNEDY" || name == "kennedy") return ReceiverTag::Kennedy;
  if (name == "DPNR" || name == "dpnr") return ReceiverTag::Dpnr;
  if (name == "HYNORE" || name == "hynore") return ReceiverTag::Hynore;
  if (name == "SQL" || name == "sql") return ReceiverTag::Sql;
  if (name == "Helstrom" || name == "HELSTROM" || name == "helstrom") return ReceiverTag::Helstrom;
  throw std::invalid_argument("unknown receiver name: '" + name + "'");
}

}  // namespace bpskrx
