#include "bpskrx/receivers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "bpskrx/pnr.hpp"

namespace bpskrx {

double helstrom_noiseless(double energy) {
  if (energy < 0.0) throw std::domain_error("helstrom_noiseless: energy must be >= 0");
  return 0.5 * (1.0 - std::sqrt(1.0 - std::exp(-4.0 * energy)));
}

double sql_noiseless(double energy) {
  if (energy < 0.0) throw std::domain_error("sql_noiseless: energy must be >= 0");
  return 0.5 * std::erfc(std::sqrt(2.0 * energy));
}

double kennedy_noiseless(double energy) {
  if (energy < 0.0) throw std::domain_error("kennedy_noiseless: energy must be >= 0");
  return 0.5 * std::exp(-4.0 * energy);
}

namespace {

// Phase-averaged Poisson weight continued to real counts x via Gamma(x+1);
// the tail bin is deliberately not part of this function.
double continuous_count_density(double x, int k, double energy,
                                const PhaseGrid& grid) {
  const double lg = std::lgamma(x + 1.0);
  double acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double mu = count_rate(k, energy, grid.nodes(i));
    if (mu == 0.0) {
      if (x == 0.0) acc += grid.weights(i);
      continue;
    }
    acc += grid.weights(i) * std::exp(x * std::log(mu) - mu - lg);
  }
  return acc;
}

void check_grid(const NoiseModel& noise, const PhaseGrid& grid, const char* who) {
  if (grid.sigma != noise.sigma)
    throw std::invalid_argument(std::string(who) + ": grid does not match noise model");
}

}  // namespace

MapThreshold map_threshold(double energy, const NoiseModel& noise,
                           const PnrResolution& res, const PhaseGrid& grid) {
  if (energy < 0.0) throw std::domain_error("map_threshold: energy must be >= 0");
  res.validate();
  check_grid(noise, grid, "map_threshold");
  const int m = res.effective();

  const auto f = [&](double x) {
    return continuous_count_density(x, 0, energy, grid) -
           continuous_count_density(x, 1, energy, grid);
  };

  // Locate the crossing of the two count distributions on [0, M].
  const double step = 0.5;
  double a = 0.0, fa = f(0.0);
  bool bracketed = false;
  bool all_positive = fa > 0.0;
  for (double b = step; b <= double(m) + 1e-12; b += step) {
    const double fb = f(b);
    if (fa > 0.0 && fb <= 0.0) {
      bracketed = true;
      // bisection: f is smooth and cheap, 80 halvings pin the root to
      // machine precision on [0, M]
      double lo = a, hi = b;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) lo = mid; else hi = mid;
      }
      const double root = 0.5 * (lo + hi);
      const int n_th = int(std::ceil(root));
      return {std::clamp(n_th, 1, m)};
    }
    all_positive = all_positive && fb > 0.0;
    a = b;
    fa = fb;
  }
  if (bracketed) throw std::logic_error("map_threshold: unreachable");
  // No crossing below M: either every resolved count favors "0" (high-energy
  // regime, only the tail discriminates) or the distributions are degenerate.
  return {all_positive ? m : 1};
}

ErrorReport dpnr_error(double energy, const NoiseModel& noise,
                       const PnrResolution& res, const PhaseGrid& grid,
                       EvalDiagnostics* diag) {
  const int n_th = map_threshold(energy, noise, res, grid).n_th;
  const Eigen::VectorXd p0 = dpnr_count_distribution(0, energy, noise, res, grid, diag);
  const Eigen::VectorXd p1 = dpnr_count_distribution(1, energy, noise, res, grid, diag);
  const int m = res.effective();
  double err = 0.0;
  for (int n = 0; n < n_th; ++n) err += p1(n);
  for (int n = n_th; n <= m; ++n) err += p0(n);
  return make_error_report(0.5 * err, 1.0, 0.0, n_th, ReceiverTag::Dpnr);
}

namespace {

// Difference-photocurrent mass below zero, at zero, and at/above zero for the
// reflected branch of symbol 0 (amplitude +a e^{-i phi}); symbol 1 is the
// mirror image, handled by the callers through Delta -> -Delta.
struct HlWings {
  double below = 0.0;  // Delta < 0
  double at_zero = 0.0;
  double at_or_above = 0.0;  // Delta >= 0
};

HlWings hl_wings(double a, double z, double cos_phi, const PnrResolution& res,
                 EvalDiagnostics* diag) {
  const double cross = a * z * cos_phi;
  const double base = 0.5 * (a * a + z * z);
  const Eigen::VectorXd qp = pnr_distribution(std::max(0.0, base + cross), res);
  const Eigen::VectorXd qm = pnr_distribution(std::max(0.0, base - cross), res);
  const int m = res.effective();
  if (diag && res.is_infinite) {
    diag->note_tail(qp(m));
    diag->note_tail(qm(m));
  }
  HlWings w;
  for (int n = 0; n <= m; ++n) {
    for (int k = 0; k <= m; ++k) {
      const double t = qp(n) * qm(k);
      if (n < k) w.below += t;
      else w.at_or_above += t;
      if (n == k) w.at_zero += t;
    }
  }
  return w;
}

double hynore_error_with_threshold(const ReceiverParams& params,
                                   const PhaseGrid& grid, int n_th,
                                   EvalDiagnostics* diag) {
  const int m = params.res.effective();
  const double transmitted = params.tau * params.energy;
  const double a = std::sqrt(std::max(0.0, (1.0 - params.tau) * params.energy));
  double err = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double phi = grid.nodes(i);
    const Eigen::VectorXd q0 = pnr_distribution(count_rate(0, transmitted, phi), params.res);
    const Eigen::VectorXd q1 = pnr_distribution(count_rate(1, transmitted, phi), params.res);
    if (diag && params.res.is_infinite) {
      diag->note_tail(q0(m));
      diag->note_tail(q1(m));
    }
    double bright_low = 0.0;  // bright state read below threshold
    for (int n = 0; n < n_th; ++n) bright_low += q1(n);
    double null_high = 0.0;  // nulled state read at or above threshold
    for (int n = n_th; n <= m; ++n) null_high += q0(n);

    const HlWings w = hl_wings(a, params.z, std::cos(phi), params.res, diag);
    // Sum of the four error cells over both symbols; the symbol-1 wings are
    // the Delta -> -Delta mirror of the symbol-0 wings.
    const double integrand = bright_low * (2.0 * w.below + w.at_zero) +
                             null_high * (2.0 * w.at_or_above - w.at_zero);
    err += grid.weights(i) * integrand;
  }
  return 0.5 * err;
}

}  // namespace

Eigen::MatrixXd hynore_joint(int k, const ReceiverParams& params,
                             const PhaseGrid& grid, EvalDiagnostics* diag) {
  params.validate();
  check_grid(params.noise, grid, "hynore_joint");
  if (k != 0 && k != 1) throw std::domain_error("hynore_joint: k must be 0 or 1");
  const int m = params.res.effective();
  const double transmitted = params.tau * params.energy;
  const double a = std::sqrt(std::max(0.0, (1.0 - params.tau) * params.energy));
  // Reflected amplitude is -sqrt(1-tau) * alpha_k: +a for k = 0, -a for k = 1.
  const double sign = (k == 0) ? 1.0 : -1.0;

  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(2 * m + 1, m + 1);
  for (int i = 0; i < grid.size(); ++i) {
    const double phi = grid.nodes(i);
    const CoherentAmplitude gamma = sign * a * CoherentAmplitude(std::cos(phi), -std::sin(phi));
    const HlDistribution hl = hl_distribution(gamma, params.z, params.res, diag);
    const Eigen::VectorXd q_same = pnr_distribution(count_rate(k, transmitted, phi), params.res);
    const Eigen::VectorXd q_flip = pnr_distribution(count_rate(1 - k, transmitted, phi), params.res);
    if (diag && params.res.is_infinite) {
      diag->note_tail(q_same(m));
      diag->note_tail(q_flip(m));
    }
    for (int delta = -m; delta <= m; ++delta) {
      const Eigen::VectorXd& q = (delta >= 0) ? q_same : q_flip;
      joint.row(delta + m) += grid.weights(i) * hl(delta) * q.transpose();
    }
  }
  return joint;
}

double hynore_joint(int k, const ReceiverParams& params, int delta, int n,
                    const PhaseGrid& grid) {
  const int m = params.res.effective();
  if (delta < -m || delta > m) throw std::domain_error("hynore_joint: delta out of range");
  if (n < 0 || n > m) throw std::domain_error("hynore_joint: n out of range");
  return hynore_joint(k, params, grid)(delta + m, n);
}

double hynore_error_at(const ReceiverParams& params, const PhaseGrid& grid,
                       EvalDiagnostics* diag) {
  params.validate();
  check_grid(params.noise, grid, "hynore_error_at");
  const int n_th =
      map_threshold(params.tau * params.energy, params.noise, params.res, grid).n_th;
  return hynore_error_with_threshold(params, grid, n_th, diag);
}

namespace {

struct Candidate {
  double p_err = 2.0;
  double tau = 1.0;
  double z = 0.0;

  bool operator<(const Candidate& other) const {
    if (p_err != other.p_err) return p_err < other.p_err;
    if (tau != other.tau) return tau < other.tau;
    return z < other.z;
  }
};

std::vector<double> tau_scan_points() {
  std::vector<double> taus;
  for (int i = 1; i <= 20; ++i) taus.push_back(0.05 * i);  // linear on (0, 1]
  for (int j = 0; j < 19; ++j) {                           // log-spaced near 1
    const double u = 0.4 + (3.0 - 0.4) * j / 18.0;
    taus.push_back(1.0 - std::pow(10.0, -u));
  }
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end(),
                         [](double x, double y) { return std::abs(x - y) < 1e-12; }),
             taus.end());
  return taus;
}

}  // namespace

ErrorReport hynore_optimize(double energy, const NoiseModel& noise,
                            const PnrResolution& res, const PhaseGrid& grid,
                            EvalDiagnostics* diag) {
  if (!(energy > 0.0)) throw std::domain_error("hynore_optimize: energy must be > 0");
  res.validate();
  check_grid(noise, grid, "hynore_optimize");

  ReceiverParams params;
  params.energy = energy;
  params.res = res;
  params.noise = noise;

  const auto evaluate = [&](double tau, double z) -> double {
    if (!(tau > 0.0) || tau > 1.0 || z < 0.0) return 1.0;
    params.tau = tau;
    params.z = z;
    const int n_th = map_threshold(tau * energy, noise, res, grid).n_th;
    return hynore_error_with_threshold(params, grid, n_th, diag);
  };

  // Coarse deterministic scan. tau = 1 is always on the grid, so the result
  // is never worse than the plain DPNR receiver.
  const std::vector<double> taus = tau_scan_points();
  const double z2_max = std::max(4.0 * res.effective(), 4.0 * energy);
  constexpr int kZPoints = 40;

  std::array<Candidate, 3> best{};
  const auto offer = [&best](const Candidate& c) {
    for (std::size_t i = 0; i < best.size(); ++i) {
      if (c < best[i]) {
        for (std::size_t j = best.size() - 1; j > i; --j) best[j] = best[j - 1];
        best[i] = c;
        return;
      }
    }
  };

  for (const double tau : taus) {
    const int n_th = map_threshold(tau * energy, noise, res, grid).n_th;
    params.tau = tau;
    for (int j = 0; j < kZPoints; ++j) {
      const double z = std::sqrt(z2_max * j / double(kZPoints - 1));
      params.z = z;
      const double p = hynore_error_with_threshold(params, grid, n_th, diag);
      offer({p, tau, z});
    }
  }

  // Nelder-Mead refinement seeded from the best grid cells.
  struct Vertex {
    double tau, z, f;
  };
  std::array<Vertex, 3> simplex;
  for (int i = 0; i < 3; ++i)
    simplex[i] = {best[i].tau, best[i].z, best[i].p_err};
  {
    // Degenerate seeds (collinear or coincident) get a deterministic nudge.
    const double area = (simplex[1].tau - simplex[0].tau) * (simplex[2].z - simplex[0].z) -
                        (simplex[2].tau - simplex[0].tau) * (simplex[1].z - simplex[0].z);
    if (std::abs(area) < 1e-9) {
      const double dtau = simplex[0].tau > 0.5 ? -0.02 : 0.02;
      const double dz = simplex[0].z + 0.25;
      simplex[1] = {simplex[0].tau + dtau, simplex[0].z, 0.0};
      simplex[1].f = evaluate(simplex[1].tau, simplex[1].z);
      simplex[2] = {simplex[0].tau, dz, 0.0};
      simplex[2].f = evaluate(simplex[2].tau, simplex[2].z);
    }
  }
  const auto by_f = [](const Vertex& a, const Vertex& b) {
    if (a.f != b.f) return a.f < b.f;
    if (a.tau != b.tau) return a.tau < b.tau;
    return a.z < b.z;
  };
  for (int it = 0; it < 160; ++it) {
    std::sort(simplex.begin(), simplex.end(), by_f);
    if (simplex[2].f - simplex[0].f < 1e-15) break;
    const double ct = 0.5 * (simplex[0].tau + simplex[1].tau);
    const double cz = 0.5 * (simplex[0].z + simplex[1].z);
    const auto point = [&](double scale) {
      return Vertex{ct + scale * (ct - simplex[2].tau), cz + scale * (cz - simplex[2].z), 0.0};
    };
    Vertex refl = point(1.0);
    refl.f = evaluate(refl.tau, refl.z);
    if (refl.f < simplex[0].f) {
      Vertex exp_ = point(2.0);
      exp_.f = evaluate(exp_.tau, exp_.z);
      simplex[2] = (exp_.f < refl.f) ? exp_ : refl;
      continue;
    }
    if (refl.f < simplex[1].f) {
      simplex[2] = refl;
      continue;
    }
    Vertex contr = point(-0.5);
    contr.f = evaluate(contr.tau, contr.z);
    if (contr.f < simplex[2].f) {
      simplex[2] = contr;
      continue;
    }
    for (int i = 1; i < 3; ++i) {
      simplex[i].tau = simplex[0].tau + 0.5 * (simplex[i].tau - simplex[0].tau);
      simplex[i].z = simplex[0].z + 0.5 * (simplex[i].z - simplex[0].z);
      simplex[i].f = evaluate(simplex[i].tau, simplex[i].z);
    }
  }

  Candidate final = best[0];
  for (const Vertex& v : simplex) {
    if (v.tau > 0.0 && v.tau <= 1.0 && v.z >= 0.0) offer({v.f, v.tau, v.z});
  }
  final = best[0];

  const int n_th = map_threshold(final.tau * energy, noise, res, grid).n_th;
  return make_error_report(final.p_err, final.tau, final.z, n_th, ReceiverTag::Hynore);
}

}  // namespace bpskrx
