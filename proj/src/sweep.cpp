#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <vector>

#include "bpskrx/bounds.hpp"
#include "bpskrx/merit.hpp"
#include "bpskrx/montecarlo.hpp"
#include "bpskrx/phase_noise.hpp"
#include "bpskrx/receivers.hpp"

namespace bpskrx {

namespace {

int receiver_rank(ReceiverTag tag) {
  switch (tag) {
    case ReceiverTag::Kennedy: return 0;
    case ReceiverTag::Dpnr: return 1;
    case ReceiverTag::Hynore: return 2;
    case ReceiverTag::Sql: return 3;
    case ReceiverTag::Helstrom: return 4;
  }
  return 5;
}

struct Job {
  double alpha2 = 0.0;
  double sigma = 0.0;
  ReceiverTag receiver = ReceiverTag::Dpnr;
  std::optional<PnrResolution> res;
  std::uint64_t mc_seed = 0;
};

struct JobOutcome {
  SweepRow row;
  EvalDiagnostics diag;
  double verify_change = 0.0;
};

JobOutcome evaluate_job(const Job& job, const SweepSpec& spec) {
  JobOutcome out;
  SweepRow& row = out.row;
  row.alpha2 = job.alpha2;
  row.sigma = job.sigma;
  row.receiver = job.receiver;
  row.res = job.res;

  const NoiseModel noise{job.sigma};
  const PhaseGrid grid = make_grid(noise, spec.quad_order);
  const double p_sql = sql_error(job.alpha2, noise, grid);

  const auto verify_against = [&](double coarse, double fine) {
    out.verify_change = std::max(out.verify_change, std::abs(coarse - fine));
  };
  const PhaseGrid grid_fine =
      spec.verify ? make_grid(noise, 2 * spec.quad_order) : PhaseGrid{};

  switch (job.receiver) {
    case ReceiverTag::Kennedy:
    case ReceiverTag::Dpnr: {
      const PnrResolution res =
          job.receiver == ReceiverTag::Kennedy ? PnrResolution::finite(1) : *job.res;
      const ErrorReport rep = dpnr_error(job.alpha2, noise, res, grid, &out.diag);
      row.p_err = rep.p_err;
      row.n_th = rep.n_th;
      if (spec.verify)
        verify_against(rep.p_err, dpnr_error(job.alpha2, noise, res, grid_fine).p_err);
      if (spec.mc_validate) {
        ShotConfig cfg;
        cfg.shots = spec.shots;
        cfg.seed = job.mc_seed;
        cfg.threads = 1;  // jobs already run in the sweep worker pool
        cfg.quad_order = spec.quad_order;
        cfg.params = {job.alpha2, 1.0, 0.0, res, noise};
        const EstimateWithError est = simulate_dpnr(cfg);
        row.mc_mean = est.mean;
        row.mc_stderr = est.std_err;
      }
      break;
    }
    case ReceiverTag::Hynore: {
      const ErrorReport rep = hynore_optimize(job.alpha2, noise, *job.res, grid, &out.diag);
      row.p_err = rep.p_err;
      row.n_th = rep.n_th;
      row.tau_opt = rep.tau_opt;
      row.z_opt = rep.z_opt;
      if (spec.verify) {
        ReceiverParams params{job.alpha2, rep.tau_opt, rep.z_opt, *job.res, noise};
        verify_against(rep.p_err, hynore_error_at(params, grid_fine));
      }
      if (spec.mc_validate) {
        ShotConfig cfg;
        cfg.shots = spec.shots;
        cfg.seed = job.mc_seed;
        cfg.threads = 1;
        cfg.quad_order = spec.quad_order;
        cfg.params = {job.alpha2, rep.tau_opt, rep.z_opt, *job.res, noise};
        const EstimateWithError est = simulate_hynore(cfg);
        row.mc_mean = est.mean;
        row.mc_stderr = est.std_err;
      }
      break;
    }
    case ReceiverTag::Sql: {
      row.p_err = p_sql;
      if (spec.verify) verify_against(p_sql, sql_error(job.alpha2, noise, grid_fine));
      break;
    }
    case ReceiverTag::Helstrom: {
      const int dim = spec.fock_dim > 0 ? spec.fock_dim : default_fock_dim(job.alpha2);
      row.p_err = helstrom_bound(job.alpha2, noise, grid, dim);
      if (spec.verify)
        verify_against(row.p_err,
                       helstrom_bound(job.alpha2, noise, grid_fine, dim + 20));
      break;
    }
  }
  row.gain = gain(row.p_err, p_sql).gain;
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  if (!(spec.step > 0.0)) throw std::invalid_argument("run_sweep: step must be > 0");
  if (spec.quad_order < 1) throw std::invalid_argument("run_sweep: quad order must be >= 1");
  for (const auto& res : spec.resolutions) res.validate();

  // Swept-variable values; an empty range is a valid empty sweep.
  std::vector<double> values;
  for (int i = 0;; ++i) {
    const double v = spec.from + i * spec.step;
    if (v > spec.to + 1e-12) break;
    values.push_back(v);
  }

  std::vector<ReceiverTag> receivers = spec.receivers;
  std::sort(receivers.begin(), receivers.end(),
            [](ReceiverTag a, ReceiverTag b) { return receiver_rank(a) < receiver_rank(b); });
  receivers.erase(std::unique(receivers.begin(), receivers.end()), receivers.end());

  std::vector<Job> jobs;
  for (const double v : values) {
    Job job;
    job.alpha2 = spec.variable == SweepSpec::Variable::Alpha2 ? v : spec.fixed_alpha2;
    job.sigma = spec.variable == SweepSpec::Variable::Sigma ? v : spec.fixed_sigma;
    for (const ReceiverTag tag : receivers) {
      job.receiver = tag;
      if (tag == ReceiverTag::Dpnr || tag == ReceiverTag::Hynore) {
        for (const PnrResolution& res : spec.resolutions) {
          job.res = res;
          job.mc_seed = spec.seed + jobs.size();
          jobs.push_back(job);
        }
      } else {
        job.res.reset();
        job.mc_seed = spec.seed + jobs.size();
        jobs.push_back(job);
      }
    }
  }

  std::vector<JobOutcome> outcomes(jobs.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads = std::min<std::size_t>(
      spec.threads > 0 ? unsigned(spec.threads) : hw, std::max<std::size_t>(jobs.size(), 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        outcomes[i] = evaluate_job(jobs[i], spec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  SweepResult result;
  result.has_mc_columns = spec.mc_validate;
  result.rows.reserve(outcomes.size());
  EvalDiagnostics diag;
  for (const JobOutcome& outcome : outcomes) {
    result.rows.push_back(outcome.row);
    diag.merge(outcome.diag);
    result.verify_worst_change = std::max(result.verify_worst_change, outcome.verify_change);
  }
  result.truncation_warning = diag.truncation_warning();
  return result;
}

}  // namespace bpskrx
