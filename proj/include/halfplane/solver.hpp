#pragma once

// Explicit finite-difference solver for
//   u_tt = (2mu+lambda) u_xx + mu u_yy + (lambda+mu) v_xy + F1
//   v_tt = mu v_xx + (2mu+lambda) v_yy + (lambda+mu) u_xy + F2
// on 0 <= x <= Lx, periodic in y, with the free surface at x = 0.

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "halfplane/exact.hpp"
#include "halfplane/grid.hpp"
#include "halfplane/material.hpp"
#include "halfplane/stencils.hpp"

namespace halfplane {

struct Scheme {
  int order = 2;
  double cfl = 0.9;  ///< K_C in dt = K_C h / sqrt(lambda + 3 mu)

  static Scheme of_order(int order) {
    if (order == 2) return {2, 0.9};
    if (order == 4) return {4, 1.3};
    throw std::invalid_argument("scheme order must be 2 or 4");
  }
};

/// dt = K_C h / sqrt(lambda + 3 mu).
inline double cfl_dt(const Material& m, double h, const Scheme& s) {
  return s.cfl * h / std::sqrt(m.lambda() + 3.0 * m.mu());
}

/// Largest dt <= dt_max that divides `target` into an integer number of steps.
inline double align_dt(double dt_max, double target) {
  if (!(dt_max > 0.0) || !(target > 0.0)) throw std::invalid_argument("align_dt needs positive arguments");
  const double n = std::ceil(target / dt_max - 1e-9);
  return target / n;
}

/// Thrown when the solution blows up or turns non-finite.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(double t, long step, double value, double reference)
      : std::runtime_error(message(t, step, value, reference)) {}

 private:
  static std::string message(double t, long step, double value, double reference) {
    std::ostringstream os;
    os << "solution unstable at t=" << t << " (step " << step << "): max|u|=" << value
       << " against initial max " << reference;
    return os.str();
  }
};

using FieldFn = std::function<Displacement(double x, double y, double t)>;
using TractionFn = std::function<Traction(double y, double t)>;

/// Data hooks. Empty hooks mean zero data.
struct BoundaryHooks {
  TractionFn traction;       ///< (g1, g2) at x = 0
  TractionFn traction_tt;    ///< second time derivative of traction; differenced in time if empty
  FieldFn dirichlet;         ///< displacement at x >= Lx
  FieldFn body_force;        ///< (F1, F2)
  FieldFn body_force_tt;     ///< differenced in time if empty
};

/// Displacement at the current and previous time levels.
struct WaveField {
  GridFunction u, v;
  GridFunction u_prev, v_prev;
  double t = 0.0;
  long step_index = 0;
};

class ElasticSolver {
 public:
  static constexpr double kBlowupFactor = 1e6;

  ElasticSolver(const Material& m, const Grid& g, const Scheme& s, double dt, BoundaryHooks hooks = {})
      : material_(m), grid_(g), scheme_(s), st_(stencils(s.order)), dt_(dt), hooks_(std::move(hooks)) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    const int min_rows = g.x_boundary == XBoundary::free_surface ? st_.closure() + 2 * st_.half_width() + 2
                                                                 : 2 * st_.half_width() + 1;
    if (g.rows() < min_rows || g.cols() < 2 * st_.half_width() + 1) {
      std::ostringstream os;
      os << "grid " << g.nx << "x" << g.ny << " too small for order " << s.order;
      throw std::invalid_argument(os.str());
    }
    const int R = g.rows(), C = g.cols();
    for (GridFunction* f : {&field_.u, &field_.v, &field_.u_prev, &field_.v_prev, &lu_, &lv_, &dyu_, &dyv_,
                            &au_, &av_, &lau_, &lav_}) {
      *f = GridFunction(R, C);
    }
  }

  const Material& material() const { return material_; }
  const Grid& grid() const { return grid_; }
  const Scheme& scheme() const { return scheme_; }
  double dt() const { return dt_; }
  double time() const { return field_.t; }
  long step_index() const { return field_.step_index; }
  const WaveField& field() const { return field_; }

  /// Sets level n from f(., ., t0) and level n-1 from f(., ., t0 - dt).
  void initialize(const FieldFn& f, double t0 = 0.0) { initialize(f, f, t0); }

  void initialize(const FieldFn& now, const FieldFn& prev, double t0) {
    sample(now, t0, field_.u, field_.v);
    sample(prev, t0 - dt_, field_.u_prev, field_.v_prev);
    field_.t = t0;
    field_.step_index = 0;
    initial_max_ = std::max(field_.u.max_abs(), field_.v.max_abs());
  }

  /// Advances one time step.
  void step() {
    const double t = field_.t;
    const double dt2 = dt_ * dt_;
    fill_halos(field_.u, field_.v, t, HaloData::value);
    apply(field_.u, field_.v, lu_, lv_);
    add_body_force(lu_, lv_, t, false);

    if (scheme_.order == 4) {
      copy_active(lu_, au_);
      copy_active(lv_, av_);
      fill_halos(au_, av_, t, HaloData::second_derivative);
      apply(au_, av_, lau_, lav_);
      add_body_force(lau_, lav_, t, true);
    }

    const int R = grid_.rows(), C = grid_.cols();
    const double dt4 = dt2 * dt2 / 12.0;
    double peak = 0.0;
    for (int i = 0; i < R; ++i) {
      double* un = field_.u.row(i);
      double* vn = field_.v.row(i);
      double* up = field_.u_prev.row(i);
      double* vp = field_.v_prev.row(i);
      const double* lu = lu_.row(i);
      const double* lv = lv_.row(i);
      if (scheme_.order == 4) {
        const double* lau = lau_.row(i);
        const double* lav = lav_.row(i);
        for (int j = 0; j < C; ++j) {
          up[j] = 2.0 * un[j] - up[j] + dt2 * lu[j] + dt4 * lau[j];
          vp[j] = 2.0 * vn[j] - vp[j] + dt2 * lv[j] + dt4 * lav[j];
          peak = std::max(peak, std::max(std::abs(up[j]), std::abs(vp[j])));
        }
      } else {
        for (int j = 0; j < C; ++j) {
          up[j] = 2.0 * un[j] - up[j] + dt2 * lu[j];
          vp[j] = 2.0 * vn[j] - vp[j] + dt2 * lv[j];
          peak = std::max(peak, std::max(std::abs(up[j]), std::abs(vp[j])));
        }
      }
    }
    field_.u.swap(field_.u_prev);
    field_.v.swap(field_.v_prev);
    field_.t = t + dt_;
    ++field_.step_index;

    const double limit = initial_max_ > 0.0 ? kBlowupFactor * initial_max_ : HUGE_VAL;
    if (!(peak <= limit)) throw NumericalAbort(field_.t, field_.step_index, peak, initial_max_);
  }

  void advance(long steps) {
    for (long k = 0; k < steps; ++k) step();
  }

  /// Discrete energy conserved by the scheme when all data vanish:
  ///   E = 1/2 |(u^n - u^{n-1})/dt|_H^2 + 1/2 <u^n, A u^{n-1}>_H
  ///       [- dt^2/24 <A u^n, A u^{n-1}>_H for order 4],
  /// with A = -L under homogeneous boundary data and H the grid quadrature.
  double energy() const {
    const int R = grid_.rows(), C = grid_.cols();
    GridFunction u = field_.u, v = field_.v, up = field_.u_prev, vp = field_.v_prev;
    GridFunction lu(R, C), lv(R, C), lup(R, C), lvp(R, C), dyu(R, C), dyv(R, C);
    homogeneous_halos(u, v);
    homogeneous_halos(up, vp);
    apply(u, v, lu, lv, dyu, dyv);
    apply(up, vp, lup, lvp, dyu, dyv);
    const double h2 = grid_.h * grid_.h;
    double kinetic = 0.0, potential = 0.0, correction = 0.0;
    for (int i = 0; i < R; ++i) {
      const double w = row_weight(i) * h2;
      double k = 0.0, p = 0.0, c = 0.0;
      for (int j = 0; j < C; ++j) {
        const double du = (u(i, j) - up(i, j)) / dt_;
        const double dv = (v(i, j) - vp(i, j)) / dt_;
        k += du * du + dv * dv;
        p -= u(i, j) * lup(i, j) + v(i, j) * lvp(i, j);
        c += lu(i, j) * lup(i, j) + lv(i, j) * lvp(i, j);
      }
      kinetic += w * k;
      potential += w * p;
      correction += w * c;
    }
    double e = 0.5 * kinetic + 0.5 * potential;
    if (scheme_.order == 4) e -= dt_ * dt_ / 24.0 * correction;
    return e;
  }

  /// Quadrature weight of row i in units of h.
  double row_weight(int i) const {
    if (grid_.x_boundary == XBoundary::free_surface && i < st_.closure()) return st_.norm_closure[i];
    return 1.0;
  }

  /// Applies the spatial operator to (u, v) with halos from the configured
  /// data at time t. Exposed for consistency tests.
  void evaluate_operator(GridFunction& u, GridFunction& v, double t, GridFunction& lu, GridFunction& lv) {
    fill_halos(u, v, t, HaloData::value);
    apply(u, v, lu, lv);
  }

 private:
  enum class HaloData { value, second_derivative };

  void sample(const FieldFn& f, double t, GridFunction& u, GridFunction& v) const {
    for (int i = 0; i < grid_.rows(); ++i) {
      for (int j = 0; j < grid_.cols(); ++j) {
        const Displacement d = f(grid_.x(i), grid_.y(j), t);
        u(i, j) = d.u;
        v(i, j) = d.v;
      }
    }
  }

  static void copy_active(const GridFunction& from, GridFunction& to) {
    for (int i = 0; i < from.rows(); ++i) std::copy_n(from.row(i), from.cols(), to.row(i));
  }

  Displacement dirichlet_data(double x, double y, double t, HaloData kind) const {
    if (!hooks_.dirichlet) return {};
    if (kind == HaloData::value) return hooks_.dirichlet(x, y, t);
    const Displacement a = hooks_.dirichlet(x, y, t + dt_);
    const Displacement b = hooks_.dirichlet(x, y, t);
    const Displacement c = hooks_.dirichlet(x, y, t - dt_);
    const double s = 1.0 / (dt_ * dt_);
    return {(a.u - 2.0 * b.u + c.u) * s, (a.v - 2.0 * b.v + c.v) * s};
  }

  Traction traction_data(double y, double t, HaloData kind) const {
    if (!hooks_.traction) return {};
    if (kind == HaloData::value) return hooks_.traction(y, t);
    if (hooks_.traction_tt) return hooks_.traction_tt(y, t);
    const Traction a = hooks_.traction(y, t + dt_);
    const Traction b = hooks_.traction(y, t);
    const Traction c = hooks_.traction(y, t - dt_);
    const double s = 1.0 / (dt_ * dt_);
    return {(a.g1 - 2.0 * b.g1 + c.g1) * s, (a.g2 - 2.0 * b.g2 + c.g2) * s};
  }

  void add_body_force(GridFunction& lu, GridFunction& lv, double t, bool second_derivative) const {
    if (!hooks_.body_force) return;
    for (int i = 0; i < grid_.rows(); ++i) {
      for (int j = 0; j < grid_.cols(); ++j) {
        const double x = grid_.x(i), y = grid_.y(j);
        Displacement f;
        if (!second_derivative) {
          f = hooks_.body_force(x, y, t);
        } else if (hooks_.body_force_tt) {
          f = hooks_.body_force_tt(x, y, t);
        } else {
          const Displacement a = hooks_.body_force(x, y, t + dt_);
          const Displacement b = hooks_.body_force(x, y, t);
          const Displacement c = hooks_.body_force(x, y, t - dt_);
          f = {(a.u - 2.0 * b.u + c.u) / (dt_ * dt_), (a.v - 2.0 * b.v + c.v) / (dt_ * dt_)};
        }
        lu(i, j) += f.u;
        lv(i, j) += f.v;
      }
    }
  }

  /// Fills Dirichlet rows, y-halos and the ghost row (or wraps a torus).
  void fill_halos(GridFunction& u, GridFunction& v, double t, HaloData kind) const {
    const int R = grid_.rows(), C = grid_.cols();
    if (grid_.x_boundary == XBoundary::periodic) {
      u.wrap_columns(0, R);
      v.wrap_columns(0, R);
      u.wrap_rows();
      v.wrap_rows();
      return;
    }
    for (int i = R; i < R + GridFunction::halo; ++i) {
      for (int j = 0; j < C; ++j) {
        const Displacement d = dirichlet_data(grid_.x(i), grid_.y(j), t, kind);
        u(i, j) = d.u;
        v(i, j) = d.v;
      }
    }
    u.wrap_columns(0, R + GridFunction::halo);
    v.wrap_columns(0, R + GridFunction::halo);
    fill_ghost(u, v, [&](int j) { return traction_data(grid_.y(j), t, kind); });
  }

  void homogeneous_halos(GridFunction& u, GridFunction& v) const {
    const int R = grid_.rows();
    if (grid_.x_boundary == XBoundary::periodic) {
      u.wrap_columns(0, R);
      v.wrap_columns(0, R);
      u.wrap_rows();
      v.wrap_rows();
      return;
    }
    for (int i = R; i < R + GridFunction::halo; ++i) {
      for (int j = -GridFunction::halo; j < grid_.cols() + GridFunction::halo; ++j) u(i, j) = v(i, j) = 0.0;
    }
    u.wrap_columns(0, R);
    v.wrap_columns(0, R);
    fill_ghost(u, v, [](int) { return Traction{}; });
  }

  /// Solves the discrete traction conditions at x = 0 for the ghost row:
  ///   g1 = (S u)_0 + gamma^2 (D_y v)_0,   g2 = (S v)_0 + (D_y u)_0.
  template <typename Data>
  void fill_ghost(GridFunction& u, GridFunction& v, Data&& data) const {
    const int C = grid_.cols();
    const double h = grid_.h;
    const double g2 = material_.gamma_sq();
    const double ga = st_.ghost_coeff;
    const double* u0 = u.row(0);
    const double* v0 = v.row(0);
    double* ug = u.row(-1);
    double* vg = v.row(-1);
    for (int j = 0; j < C; ++j) {
      double ru = 0.0, rv = 0.0;
      for (const Tap& tp : st_.ghost_rest) {
        ru += tp.coeff * u(tp.offset, j);
        rv += tp.coeff * v(tp.offset, j);
      }
      double dyu = 0.0, dyv = 0.0;
      for (const Tap& tp : st_.d1) {
        dyu += tp.coeff * u0[j + tp.offset];
        dyv += tp.coeff * v0[j + tp.offset];
      }
      const Traction g = data(j);
      ug[j] = (h * g.g1 - ru - g2 * dyv) / ga;
      vg[j] = (h * g.g2 - rv - dyu) / ga;
    }
    u.wrap_columns(-1, 0);
    v.wrap_columns(-1, 0);
  }

  void apply(const GridFunction& u, const GridFunction& v, GridFunction& lu, GridFunction& lv) {
    apply(u, v, lu, lv, dyu_, dyv_);
  }

  /// L(u, v) on the unknown rows; halos of u and v must be filled.
  void apply(const GridFunction& u, const GridFunction& v, GridFunction& lu, GridFunction& lv, GridFunction& dyu,
             GridFunction& dyv) const {
    const int R = grid_.rows(), C = grid_.cols();
    const int halo = GridFunction::halo;
    for (int i = -halo; i < R + halo; ++i) {
      const double* ur = u.row(i);
      const double* vr = v.row(i);
      double* du = dyu.row(i);
      double* dv = dyv.row(i);
      for (int j = 0; j < C; ++j) du[j] = dv[j] = 0.0;
      for (const Tap& tp : st_.d1) {
        const double c = tp.coeff;
        const int o = tp.offset;
        for (int j = 0; j < C; ++j) {
          du[j] += c * ur[j + o];
          dv[j] += c * vr[j + o];
        }
      }
    }

    const double h2 = grid_.h * grid_.h;
    const double cp2 = material_.p_modulus() / h2;
    const double cs2 = material_.mu() / h2;
    const double cm = (material_.lambda() + material_.mu()) / h2;
    const bool closed = grid_.x_boundary == XBoundary::free_surface;
    for (int i = 0; i < R; ++i) {
      const bool boundary_row = closed && i < st_.closure();
      const Stencil& dxx = boundary_row ? st_.d2_closure[i] : st_.d2;
      const Stencil& dx = boundary_row ? st_.d1_closure[i] : st_.d1;
      double* a = lu.row(i);
      double* b = lv.row(i);
      const double* ur = u.row(i);
      const double* vr = v.row(i);
      for (int j = 0; j < C; ++j) a[j] = b[j] = 0.0;
      for (const Tap& tp : st_.d2) {
        const double c = tp.coeff;
        const int o = tp.offset;
        for (int j = 0; j < C; ++j) {
          a[j] += cs2 * c * ur[j + o];
          b[j] += cp2 * c * vr[j + o];
        }
      }
      const int base = boundary_row ? 0 : i;
      for (const Tap& tp : dxx) {
        const double* us = u.row(base + tp.offset);
        const double* vs = v.row(base + tp.offset);
        const double ca = cp2 * tp.coeff;
        const double cb = cs2 * tp.coeff;
        for (int j = 0; j < C; ++j) {
          a[j] += ca * us[j];
          b[j] += cb * vs[j];
        }
      }
      for (const Tap& tp : dx) {
        const double* dv = dyv.row(base + tp.offset);
        const double* du = dyu.row(base + tp.offset);
        const double c = cm * tp.coeff;
        for (int j = 0; j < C; ++j) {
          a[j] += c * dv[j];
          b[j] += c * du[j];
        }
      }
    }
  }

  Material material_;
  Grid grid_;
  Scheme scheme_;
  const StencilSet& st_;
  double dt_;
  BoundaryHooks hooks_;
  WaveField field_;
  GridFunction lu_, lv_, dyu_, dyv_, au_, av_, lau_, lav_;
  double initial_max_ = 0.0;
};

}  // namespace halfplane
