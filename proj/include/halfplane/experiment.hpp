#pragma once

// Single solver runs against closed-form references.

#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "halfplane/exact.hpp"
#include "halfplane/solver.hpp"

namespace halfplane {

enum class Problem { rayleigh, modeconv, plane_wave };

inline std::string to_string(Problem p) {
  switch (p) {
    case Problem::rayleigh: return "rayleigh";
    case Problem::modeconv: return "modeconv";
    case Problem::plane_wave: return "plane-wave";
  }
  return "?";
}

inline Problem parse_problem(const std::string& s) {
  if (s == "rayleigh") return Problem::rayleigh;
  if (s == "modeconv") return Problem::modeconv;
  if (s == "plane-wave" || s == "plane_wave") return Problem::plane_wave;
  throw std::invalid_argument("unknown problem '" + s + "'");
}

struct ExperimentConfig {
  Problem problem = Problem::rayleigh;
  double lambda = 1.0;
  double mu = 0.1;
  int order = 2;
  /// Grid points per wave length: Rayleigh and plane-wave wave length, or the
  /// shear wave length for mode conversion.
  int ppw = 25;
  /// Final time; when <= 0 it is `periods` times the period.
  double t_final = 0.0;
  double periods = 1.0;
  double lx = 10.0;  ///< depth for the Rayleigh problem
  double angle = std::numbers::pi / 4.0;
  double cfl = 0.0;  ///< K_C; <= 0 selects the default of the order
  int samples_per_period = 10;
  std::string out;       ///< time-series CSV
  std::string snapshot;  ///< final-state CSV
  unsigned seed = 0;
};

inline void validate(const ExperimentConfig& c) {
  Material(c.lambda, c.mu);
  Scheme::of_order(c.order);
  if (c.ppw < 10) throw std::invalid_argument("points per wave length must be at least 10");
  if (!(c.t_final > 0.0) && !(c.periods > 0.0)) throw std::invalid_argument("final time must be positive");
  if (!(c.lx > 0.0)) throw std::invalid_argument("lx must be positive");
  if (c.problem == Problem::modeconv && !(c.angle > 0.0 && c.angle < 0.5 * std::numbers::pi)) {
    throw std::invalid_argument("mode conversion needs an angle in (0, pi/2)");
  }
  if (c.samples_per_period < 1) throw std::invalid_argument("samples_per_period must be positive");
}

struct Sample {
  double t = 0.0;
  double err_u = 0.0;  ///< max |u - u_exact| / max norm of the exact solution
  double err_v = 0.0;
  double energy = 0.0;

  double error() const { return std::max(err_u, err_v); }
};

struct RunResult {
  std::vector<Sample> series;
  Grid grid;
  double dt = 0.0;
  double period = 0.0;
  long steps = 0;
  double wall_seconds = 0.0;

  double final_error() const { return series.empty() ? 0.0 : series.back().error(); }
  double max_error() const {
    double m = 0.0;
    for (const auto& s : series) m = std::max(m, s.error());
    return m;
  }
  /// First sample time at which the error reaches `level`; infinity if never.
  double time_to_error(double level) const {
    for (const auto& s : series) {
      if (s.error() >= level) return s.t;
    }
    return std::numeric_limits<double>::infinity();
  }
};

/// The problem a configuration describes: grid, reference solution, data.
struct ProblemSetup {
  Material material{1.0, 1.0};
  Grid grid;
  double period = 0.0;
  double wavelength = 0.0;
  FieldFn exact;
  BoundaryHooks hooks;
};

inline ProblemSetup make_problem(const ExperimentConfig& c) {
  validate(c);
  ProblemSetup p;
  p.material = Material(c.lambda, c.mu);
  switch (c.problem) {
    case Problem::rayleigh: {
      const RayleighWave wave(p.material);
      p.grid = make_strip_grid(1.0, c.ppw, c.lx);
      p.period = wave.period();
      p.wavelength = wave.wavelength();
      p.exact = [wave](double x, double y, double t) { return wave(x, y, t); };
      p.hooks.dirichlet = p.exact;
      break;
    }
    case Problem::modeconv: {
      const ModeConversion mc = solve_reflection(p.material, c.angle);
      const double ls = wavelengths(p.material).s;
      const int intervals = static_cast<int>(std::ceil(mc.y_period() / (ls / c.ppw) - 1e-9));
      p.grid = make_strip_grid(mc.y_period(), intervals, mc.x_extent());
      p.period = mc.period();
      p.wavelength = ls;
      p.exact = [mc](double x, double y, double t) { return mc.shear_field(x, y, t); };
      p.hooks.dirichlet = p.exact;
      p.hooks.traction = [mc](double y, double t) { return mc.forcing(y, t); };
      p.hooks.traction_tt = [mc](double y, double t) { return mc.forcing_tt(y, t); };
      break;
    }
    case Problem::plane_wave: {
      const double k = 2.0 * std::numbers::pi;
      const PlaneWave wave(p.material, k, k, PlaneWave::Kind::p);
      p.grid = make_torus_grid(1.0, 1.0, c.ppw);
      p.period = wave.period();
      p.wavelength = 1.0 / std::sqrt(2.0);
      p.exact = [wave](double x, double y, double t) { return wave(x, y, t); };
      break;
    }
  }
  return p;
}

struct TimePlan {
  double t_final = 0.0;
  double interval = 0.0;  ///< sampling interval
  int samples = 0;
  long steps_per_sample = 0;
  double dt = 0.0;
};

inline TimePlan plan_time(const ExperimentConfig& c, const ProblemSetup& p) {
  Scheme s = Scheme::of_order(c.order);
  if (c.cfl > 0.0) s.cfl = c.cfl;
  TimePlan tp;
  tp.t_final = c.t_final > 0.0 ? c.t_final : c.periods * p.period;
  tp.samples = std::max(1, static_cast<int>(std::lround(tp.t_final / p.period * c.samples_per_period)));
  tp.interval = tp.t_final / tp.samples;
  tp.dt = align_dt(cfl_dt(p.material, p.grid.h, s), tp.interval);
  tp.steps_per_sample = std::lround(tp.interval / tp.dt);
  return tp;
}

/// Point updates of a run: unknowns times time steps.
inline double predicted_work(const ExperimentConfig& c) {
  const ProblemSetup p = make_problem(c);
  const TimePlan tp = plan_time(c, p);
  return static_cast<double>(p.grid.unknown_points()) * static_cast<double>(tp.steps_per_sample) * tp.samples;
}

/// Largest |u|, |v| of a reference field over the grid at time t.
inline double reference_max(const Grid& g, const FieldFn& f, double t) {
  double m = 0.0;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      const Displacement d = f(g.x(i), g.y(j), t);
      m = std::max(m, std::max(std::abs(d.u), std::abs(d.v)));
    }
  }
  return m;
}

/// Normalized max-norm errors of the current level against f.
inline Sample measure(const ElasticSolver& s, const FieldFn& f) {
  const Grid& g = s.grid();
  const WaveField& w = s.field();
  double eu = 0.0, ev = 0.0, ref = 0.0;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      const Displacement d = f(g.x(i), g.y(j), w.t);
      eu = std::max(eu, std::abs(w.u(i, j) - d.u));
      ev = std::max(ev, std::abs(w.v(i, j) - d.v));
      ref = std::max(ref, std::max(std::abs(d.u), std::abs(d.v)));
    }
  }
  if (ref == 0.0) ref = 1.0;
  return {w.t, eu / ref, ev / ref, s.energy()};
}

/// Phase of the fundamental Fourier mode exp(i omega y) of the surface trace.
inline double surface_phase(const GridFunction& u, const Grid& g, double omega) {
  std::complex<double> acc{0.0, 0.0};
  for (int j = 0; j < g.cols(); ++j) acc += u(0, j) * std::polar(1.0, -omega * g.y(j));
  return std::arg(acc);
}

inline void write_snapshot(const std::string& path, const ElasticSolver& s) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << std::setprecision(17) << "x,y,u,v\n";
  const Grid& g = s.grid();
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      os << g.x(i) << ',' << g.y(j) << ',' << s.field().u(i, j) << ',' << s.field().v(i, j) << '\n';
    }
  }
}

inline void write_series(std::ostream& os, const std::vector<Sample>& series) {
  os << std::setprecision(17) << "t,max_err_u,max_err_v,energy\n";
  for (const auto& s : series) os << s.t << ',' << s.err_u << ',' << s.err_v << ',' << s.energy << '\n';
}

inline void write_series(const std::string& path, const std::vector<Sample>& series) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_series(os, series);
}

/// Evolves the configured problem from exact data at t = 0 and t = -dt and
/// samples the error every period / samples_per_period.
inline RunResult run(const ExperimentConfig& c) {
  const ProblemSetup p = make_problem(c);
  const TimePlan tp = plan_time(c, p);
  Scheme s = Scheme::of_order(c.order);
  if (c.cfl > 0.0) s.cfl = c.cfl;

  RunResult r;
  r.grid = p.grid;
  r.dt = tp.dt;
  r.period = p.period;

  const auto start = std::chrono::steady_clock::now();
  ElasticSolver solver(p.material, p.grid, s, tp.dt, p.hooks);
  solver.initialize(p.exact, 0.0);
  r.series.push_back(measure(solver, p.exact));
  for (int k = 0; k < tp.samples; ++k) {
    solver.advance(tp.steps_per_sample);
    r.series.push_back(measure(solver, p.exact));
  }
  r.steps = solver.step_index();
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!c.out.empty()) write_series(c.out, r.series);
  if (!c.snapshot.empty()) write_snapshot(c.snapshot, solver);
  return r;
}

}  // namespace halfplane
