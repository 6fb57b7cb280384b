#pragma once

// Configuration files and multi-run studies.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "halfplane/boundary.hpp"
#include "halfplane/experiment.hpp"

namespace halfplane {

inline constexpr double kDefaultBudget = 5e8;

using KeyValues = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Parses `key = value` lines; `#` starts a comment.
inline KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  return parse_key_values(in);
}

namespace detail {

inline double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw std::invalid_argument("config key " + key + ": not a number: " + v);
  return d;
}

inline int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw std::invalid_argument("config key " + key + ": not an integer: " + v);
  return static_cast<int>(d);
}

}  // namespace detail

/// Applies recognized keys to `c`; unknown keys are an error. Later maps win,
/// so pass the config file first and command-line values second.
inline void apply_key_values(const KeyValues& kv, ExperimentConfig& c) {
  for (const auto& [key, value] : kv) {
    if (key == "problem") c.problem = parse_problem(value);
    else if (key == "lambda") c.lambda = detail::to_double(key, value);
    else if (key == "mu") c.mu = detail::to_double(key, value);
    else if (key == "order") c.order = detail::to_int(key, value);
    else if (key == "ppw") c.ppw = detail::to_int(key, value);
    else if (key == "t_final") c.t_final = detail::to_double(key, value);
    else if (key == "periods") c.periods = detail::to_double(key, value);
    else if (key == "lx") c.lx = detail::to_double(key, value);
    else if (key == "angle") c.angle = detail::to_double(key, value);
    else if (key == "cfl") c.cfl = detail::to_double(key, value);
    else if (key == "samples_per_period") c.samples_per_period = detail::to_int(key, value);
    else if (key == "out") c.out = value;
    else if (key == "snapshot") c.snapshot = value;
    else if (key == "seed") c.seed = static_cast<unsigned>(detail::to_int(key, value));
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

inline ExperimentConfig make_config(const KeyValues& file, const KeyValues& cli) {
  ExperimentConfig c;
  apply_key_values(file, c);
  apply_key_values(cli, c);
  validate(c);
  return c;
}

/// Thrown when a study would exceed its work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(double work, double budget) : std::runtime_error(message(work, budget)) {}

 private:
  static std::string message(double work, double budget) {
    std::ostringstream os;
    os << "predicted work " << work << " point updates exceeds the budget of " << budget
       << " (use --force to run anyway)";
    return os.str();
  }
};

struct Budget {
  double limit = kDefaultBudget;
  bool force = false;

  bool allows(double work) const { return force || work <= limit; }
};

struct StudyRow {
  std::string label;
  double lambda = 0.0;
  double mu = 0.0;
  int order = 2;
  int ppw = 0;
  double t = 0.0;
  double period = 0.0;
  double error = 0.0;      ///< normalized error at t
  double max_error = 0.0;  ///< largest sampled error on [0, t]
  double observed_order = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
  long steps = 0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  std::vector<std::vector<Sample>> curves;
  bool partial = false;  ///< budget stopped the study early
  /// Scaling studies: largest ratio between per-period error maxima of any
  /// curve and the first one.
  double max_curve_ratio = std::numeric_limits<double>::quiet_NaN();
};

/// log2 of the error ratio between a grid and its refinement by two.
inline double observed_order(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

inline void fill_orders(std::vector<StudyRow>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].mu == rows[k - 1].mu && rows[k].ppw == 2 * rows[k - 1].ppw) {
      rows[k].observed_order = observed_order(rows[k - 1].error, rows[k].error);
    }
  }
}

inline StudyRow make_row(const ExperimentConfig& c, const RunResult& r) {
  StudyRow row;
  row.label = to_string(c.problem);
  row.lambda = c.lambda;
  row.mu = c.mu;
  row.order = c.order;
  row.ppw = c.ppw;
  row.t = r.series.back().t;
  row.period = r.period;
  row.error = r.final_error();
  row.max_error = r.max_error();
  row.wall_seconds = r.wall_seconds;
  row.steps = r.steps;
  return row;
}

/// Runs a configuration list in order, stopping when the budget runs out.
inline StudyResult run_all(const std::vector<ExperimentConfig>& configs, const Budget& budget) {
  StudyResult out;
  double spent = 0.0;
  for (const auto& c : configs) {
    const double work = predicted_work(c);
    if (!budget.allows(spent + work)) {
      if (out.rows.empty()) throw BudgetExceeded(work, budget.limit);
      out.partial = true;
      break;
    }
    spent += work;
    const RunResult r = run(c);
    out.rows.push_back(make_row(c, r));
    out.curves.push_back(r.series);
  }
  fill_orders(out.rows);
  return out;
}

/// Runs at P, 2P, 4P, ... and reports errors at the configured final time
/// with observed orders between consecutive doublings.
inline StudyResult convergence_study(const ExperimentConfig& base, int refinements, const Budget& budget = {}) {
  if (refinements < 2) throw std::invalid_argument("convergence study needs at least 2 grids");
  std::vector<ExperimentConfig> configs;
  for (int k = 0; k < refinements; ++k) {
    ExperimentConfig c = base;
    c.ppw = base.ppw << k;
    c.out.clear();
    c.snapshot.clear();
    configs.push_back(c);
  }
  return run_all(configs, budget);
}

/// Largest ratio between per-period error maxima of `b` and `a`, both sampled
/// at the same fractions of their periods.
inline double curve_ratio(const std::vector<Sample>& a, const std::vector<Sample>& b, int samples_per_period) {
  if (a.size() != b.size()) throw std::invalid_argument("curves sampled differently");
  double worst = 1.0;
  for (std::size_t start = 1; start < a.size(); start += samples_per_period) {
    double ma = 0.0, mb = 0.0;
    for (std::size_t k = start; k < std::min(a.size(), start + samples_per_period); ++k) {
      ma = std::max(ma, a[k].error());
      mb = std::max(mb, b[k].error());
    }
    if (ma > 0.0 && mb > 0.0) worst = std::max(worst, std::max(ma / mb, mb / ma));
  }
  return worst;
}

/// Resolution invariant of the phase-error scaling law: P sqrt(mu) for order
/// 2 and P mu^(1/4) for order 4.
inline double scaling_invariant(int order, double mu, int ppw) { return ppw * std::pow(mu, 1.0 / order); }

/// Runs each (mu, P) pair for `periods` periods and compares the error curves
/// as functions of t/T.
inline StudyResult scaling_study(const ExperimentConfig& base, const std::vector<std::pair<double, int>>& pairs,
                                 const Budget& budget = {}) {
  if (pairs.empty()) throw std::invalid_argument("scaling study needs at least one (mu, P) pair");
  const double ref = scaling_invariant(base.order, pairs.front().first, pairs.front().second);
  std::vector<ExperimentConfig> configs;
  for (const auto& [mu, ppw] : pairs) {
    const double inv = scaling_invariant(base.order, mu, ppw);
    if (std::abs(inv - ref) > 0.05 * ref) {
      std::ostringstream os;
      os << "pair (mu=" << mu << ", P=" << ppw << ") breaks the scaling invariant: " << inv << " vs " << ref;
      throw std::invalid_argument(os.str());
    }
    ExperimentConfig c = base;
    c.mu = mu;
    c.ppw = ppw;
    c.t_final = 0.0;
    c.out.clear();
    c.snapshot.clear();
    configs.push_back(c);
  }
  StudyResult out = run_all(configs, budget);
  out.max_curve_ratio = 1.0;
  for (std::size_t k = 1; k < out.curves.size(); ++k) {
    out.max_curve_ratio = std::max(out.max_curve_ratio, curve_ratio(out.curves[0], out.curves[k], base.samples_per_period));
  }
  return out;
}

/// Outgoing shear wave runs for every (mu, P_s) combination.
inline StudyResult modeconv_study(const ExperimentConfig& base, const std::vector<double>& mus,
                                  const std::vector<int>& shear_ppw, const Budget& budget = {}) {
  std::vector<ExperimentConfig> configs;
  for (double mu : mus) {
    for (int ps : shear_ppw) {
      ExperimentConfig c = base;
      c.problem = Problem::modeconv;
      c.mu = mu;
      c.ppw = ps;
      c.out.clear();
      c.snapshot.clear();
      configs.push_back(c);
    }
  }
  return run_all(configs, budget);
}

/// Leading truncation coefficients of the traction discretization used by the
/// solver: the boundary derivative of u and the periodic derivative of v.
inline TruncationCoeffs scheme_truncation(int order, const Material& m, double h) {
  TruncationCoeffs c;
  c.order = order;
  c.h = h;
  if (order == 2) {
    // (u_1 - u_-1)/(2h) = u_x + h^2/6 u_xxx, likewise for v_y.
    c.alpha1 = -1.0 / 6.0;
    c.alpha2 = -m.gamma_sq() / 6.0;
  } else if (order == 4) {
    // Ghost-point derivative: u_x + h^4/20 u^(5); centered D_y: v_y - h^4/30 v^(5).
    c.alpha1p = -1.0 / 20.0;
    c.alpha2p = m.gamma_sq() / 30.0;
  } else {
    throw std::invalid_argument("order must be 2 or 4");
  }
  return c;
}

struct PhaseReport {
  double lambda = 0.0;
  double mu = 0.0;
  int order = 2;
  double eps = 0.0;
  double predicted_ppw = 0.0;  ///< P from the truncation model
  int run_ppw = 0;             ///< grid actually run
  double measured_eps = 0.0;   ///< phase-speed error from the surface trace after one period
  double measured_ppw = 0.0;   ///< P at which the measured error would equal eps
  double max_error = 0.0;
  double wall_seconds = 0.0;
};

/// Relative phase-speed error of a Rayleigh run after `periods` periods, from
/// the fundamental Fourier mode of u(0, y, t).
inline double measure_phase_error(const ExperimentConfig& c) {
  const ProblemSetup p = make_problem(c);
  const TimePlan tp = plan_time(c, p);
  Scheme s = Scheme::of_order(c.order);
  if (c.cfl > 0.0) s.cfl = c.cfl;
  ElasticSolver solver(p.material, p.grid, s, tp.dt, p.hooks);
  solver.initialize(p.exact, 0.0);
  solver.advance(tp.steps_per_sample * tp.samples);
  const double omega = 2.0 * std::numbers::pi;
  GridFunction ref(p.grid.rows(), p.grid.cols());
  for (int j = 0; j < p.grid.cols(); ++j) ref(0, j) = p.exact(0.0, p.grid.y(j), solver.time()).u;
  double d = surface_phase(solver.field().u, p.grid, omega) - surface_phase(ref, p.grid, omega);
  d = std::remainder(d, 2.0 * std::numbers::pi);
  return std::abs(d) / (2.0 * std::numbers::pi * solver.time() / p.period);
}

/// Predicts P for a phase error eps, runs one period of the Rayleigh problem
/// at that P and measures the phase error actually obtained.
inline PhaseReport predict_vs_measure(const ExperimentConfig& base, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 0.5)");
  const Material m(base.lambda, base.mu);
  PhaseReport r;
  r.lambda = base.lambda;
  r.mu = base.mu;
  r.order = base.order;
  r.eps = eps;
  r.predicted_ppw = required_points_per_wavelength(m, eps, scheme_truncation(base.order, m, 1.0));

  ExperimentConfig c = base;
  c.problem = Problem::rayleigh;
  c.ppw = std::max(10, static_cast<int>(std::ceil(r.predicted_ppw)));
  c.t_final = 0.0;
  c.periods = 1.0;
  c.out.clear();
  c.snapshot.clear();
  r.run_ppw = c.ppw;
  const auto start = std::chrono::steady_clock::now();
  r.measured_eps = measure_phase_error(c);
  r.max_error = run(c).final_error();
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.measured_ppw = c.ppw * std::pow(r.measured_eps / eps, 1.0 / c.order);
  return r;
}

inline void write_rows(std::ostream& os, const std::vector<StudyRow>& rows) {
  os << std::setprecision(17) << "problem,lambda,mu,order,ppw,t,period,error,max_error,observed_order,wall_seconds,steps\n";
  for (const auto& r : rows) {
    os << r.label << ',' << r.lambda << ',' << r.mu << ',' << r.order << ',' << r.ppw << ',' << r.t << ',' << r.period
       << ',' << r.error << ',' << r.max_error << ',';
    if (std::isnan(r.observed_order)) os << "";
    else os << r.observed_order;
    os << ',' << r.wall_seconds << ',' << r.steps << '\n';
  }
}

/// Long format: one line per sample of every curve.
inline void write_curves(std::ostream& os, const StudyResult& s) {
  os << std::setprecision(17) << "mu,ppw,t_over_period,t,max_err_u,max_err_v,energy\n";
  for (std::size_t k = 0; k < s.curves.size(); ++k) {
    for (const auto& p : s.curves[k]) {
      os << s.rows[k].mu << ',' << s.rows[k].ppw << ',' << p.t / s.rows[k].period << ',' << p.t << ',' << p.err_u
         << ',' << p.err_v << ',' << p.energy << '\n';
    }
  }
}

}  // namespace halfplane
