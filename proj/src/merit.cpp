#include "bpskrx/merit.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "bpskrx/bounds.hpp"
#include "bpskrx/phase_noise.hpp"
#include "bpskrx/receivers.hpp"

namespace bpskrx {

GainValue gain(double p_receiver, double p_sql) {
  if (!(p_sql > 0.0)) throw std::domain_error("gain: p_sql must be > 0");
  if (p_receiver < 0.0) throw std::domain_error("gain: p_receiver must be >= 0");
  return {1.0 - p_receiver / p_sql};
}

namespace {

double receiver_gain_at(double energy, double sigma, const PnrResolution& res,
                        ReceiverTag receiver, int quad_order) {
  const NoiseModel noise{sigma};
  const PhaseGrid grid = make_grid(noise, quad_order);
  const double p_sql = sigma == 0.0 ? sql_noiseless(energy) : sql_error(energy, noise, grid);
  double p = 0.5;
  switch (receiver) {
    case ReceiverTag::Kennedy:
      p = dpnr_error(energy, noise, PnrResolution::finite(1), grid).p_err;
      break;
    case ReceiverTag::Dpnr:
      p = dpnr_error(energy, noise, res, grid).p_err;
      break;
    case ReceiverTag::Hynore:
      p = hynore_optimize(energy, noise, res, grid).p_err;
      break;
    default:
      throw std::domain_error("sigma_max: receiver must be Kennedy, DPNR or HYNORE");
  }
  return gain(p, p_sql).gain;
}

}  // namespace

SigmaMax sigma_max(double energy, const PnrResolution& res, ReceiverTag receiver,
                   const SigmaMaxOptions& opts) {
  if (energy < 0.0) throw std::domain_error("sigma_max: energy must be >= 0");
  res.validate();
  if (energy == 0.0) return {0.0};

  const int n_points = int(std::floor(opts.sigma_hi / opts.step + 1e-9)) + 1;
  std::vector<double> gains(n_points);
  for (int i = 0; i < n_points; ++i)
    gains[i] = receiver_gain_at(energy, i * opts.step, res, receiver, opts.quad_order);

  int last_ok = -1;
  for (int i = n_points - 1; i >= 0; --i) {
    if (gains[i] >= 0.0) {
      last_ok = i;
      break;
    }
  }
  if (last_ok < 0) return {0.0};
  if (last_ok == n_points - 1) return {(n_points - 1) * opts.step};

  double lo = last_ok * opts.step;        // gain >= 0 here
  double hi = (last_ok + 1) * opts.step;  // gain < 0 here
  while (hi - lo > opts.refine) {
    const double mid = 0.5 * (lo + hi);
    if (receiver_gain_at(energy, mid, res, receiver, opts.quad_order) >= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return {0.5 * (lo + hi)};
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_resolution(const std::optional<PnrResolution>& res) {
  if (!res) return "";
  if (res->is_infinite) return "inf";
  return std::to_string(res->m);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void write_csv(std::ostream& out, const SweepResult& result) {
  out << "alpha2,sigma,M,receiver,p_err,gain,tau_opt,z_opt,n_th";
  if (result.has_mc_columns) out << ",mc_mean,mc_stderr";
  out << '\n';
  for (const SweepRow& row : result.rows) {
    out << format_double(row.alpha2) << ',' << format_double(row.sigma) << ','
        << format_resolution(row.res) << ',' << to_string(row.receiver) << ','
        << format_double(row.p_err) << ',' << format_double(row.gain) << ',';
    if (row.tau_opt) out << format_double(*row.tau_opt);
    out << ',';
    if (row.z_opt) out << format_double(*row.z_opt);
    out << ',';
    if (row.n_th) out << *row.n_th;
    if (result.has_mc_columns) {
      out << ',';
      if (row.mc_mean) out << format_double(*row.mc_mean);
      out << ',';
      if (row.mc_stderr) out << format_double(*row.mc_stderr);
    }
    out << '\n';
  }
}

std::string to_csv(const SweepResult& result) {
  std::ostringstream os;
  write_csv(os, result);
  return os.str();
}

SweepResult read_csv(std::istream& in) {
  SweepResult result;
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("read_csv: empty input, missing header");
  {
    const auto header = split_line(line);
    if (header.size() < 9 || header[0] != "alpha2" || header[3] != "receiver")
      throw std::invalid_argument("read_csv: unrecognized header: '" + line + "'");
    result.has_mc_columns = header.size() == 11;
    if (header.size() != 9 && header.size() != 11)
      throw std::invalid_argument("read_csv: header must have 9 or 11 columns");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_line(line);
    const std::size_t expect = result.has_mc_columns ? 11 : 9;
    if (f.size() != expect)
      throw std::invalid_argument("read_csv: line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(expect) +
                                  " fields, got " + std::to_string(f.size()));
    const auto parse_double = [&](const std::string& s, const char* field) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
      } catch (const std::exception&) {
        throw std::invalid_argument("read_csv: line " + std::to_string(line_no) +
                                    ", field '" + field + "': bad number '" + s + "'");
      }
    };
    SweepRow row;
    row.alpha2 = parse_double(f[0], "alpha2");
    row.sigma = parse_double(f[1], "sigma");
    if (!f[2].empty()) {
      if (f[2] == "inf") row.res = PnrResolution::infinite();
      else row.res = PnrResolution::finite(int(parse_double(f[2], "M")));
    }
    row.receiver = receiver_from_string(f[3]);
    row.p_err = parse_double(f[4], "p_err");
    row.gain = parse_double(f[5], "gain");
    if (!f[6].empty()) row.tau_opt = parse_double(f[6], "tau_opt");
    if (!f[7].empty()) row.z_opt = parse_double(f[7], "z_opt");
    if (!f[8].empty()) row.n_th = int(parse_double(f[8], "n_th"));
    if (result.has_mc_columns) {
      if (!f[9].empty()) row.mc_mean = parse_double(f[9], "mc_mean");
      if (!f[10].empty()) row.mc_stderr = parse_double(f[10], "mc_stderr");
    }
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace bpskrx
