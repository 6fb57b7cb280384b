#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "halfplane/experiment.hpp"
#include "halfplane/solver.hpp"

using namespace halfplane;

namespace {

constexpr double kPi = std::numbers::pi;

// Localized initial displacement away from both x boundaries.
Displacement bump(double x, double y, double) {
  const double dy = std::remainder(y - 0.4, 1.0);
  const double g = std::exp(-((x - 0.6) * (x - 0.6) + dy * dy) / 0.01);
  return {g, 5.0 * g * dy};
}

ElasticSolver homogeneous_solver(int order, double mu, int intervals, double lx, double cfl_scale = 1.0) {
  const Material m(1.0, mu);
  const Grid g = make_strip_grid(1.0, intervals, lx);
  Scheme s = Scheme::of_order(order);
  ElasticSolver solver(m, g, s, cfl_scale * cfl_dt(m, g.h, s));
  return solver;
}

double field_max(const ElasticSolver& s) { return std::max(s.field().u.max_abs(), s.field().v.max_abs()); }

// Manufactured solution u = cos t cos(x+c) sin ky, v = cos t sin(x+c) cos ky,
// with the body force and traction that make it exact.
struct Manufactured {
  Material m;
  double k = 2.0 * kPi;
  double c = 0.3;

  Displacement field(double x, double y, double t) const {
    return {std::cos(t) * std::cos(x + c) * std::sin(k * y), std::cos(t) * std::sin(x + c) * std::cos(k * y)};
  }
  Displacement force(double x, double y, double t) const {
    const Displacement d = field(x, y, t);
    const double lam = m.lambda(), mu = m.mu();
    return {d.u * (-1.0 + (2 * mu + lam) + mu * k * k + (lam + mu) * k),
            d.v * (-1.0 + mu + (2 * mu + lam) * k * k + (lam + mu) * k)};
  }
  Traction traction(double y, double t) const {
    return {-std::cos(t) * std::sin(c) * (1.0 + m.gamma_sq() * k) * std::sin(k * y),
            (1.0 + k) * std::cos(t) * std::cos(c) * std::cos(k * y)};
  }

  BoundaryHooks hooks() const {
    BoundaryHooks h;
    h.dirichlet = [this](double x, double y, double t) { return field(x, y, t); };
    h.body_force = [this](double x, double y, double t) { return force(x, y, t); };
    h.body_force_tt = [this](double x, double y, double t) {
      const Displacement f = force(x, y, t);
      return Displacement{-f.u, -f.v};
    };
    h.traction = [this](double y, double t) { return traction(y, t); };
    h.traction_tt = [this](double y, double t) {
      const Traction g = traction(y, t);
      return Traction{-g.g1, -g.g2};
    };
    return h;
  }

  double error(int order, int intervals, double t_final) const {
    const Grid g = make_strip_grid(1.0, intervals, 1.0);
    const Scheme s = Scheme::of_order(order);
    const double dt = align_dt(cfl_dt(m, g.h, s), t_final);
    ElasticSolver solver(m, g, s, dt, hooks());
    solver.initialize([this](double x, double y, double t) { return field(x, y, t); }, 0.0);
    solver.advance(std::lround(t_final / dt));
    return measure(solver, [this](double x, double y, double t) { return field(x, y, t); }).error();
  }
};

double rayleigh_error(int order, double mu, int ppw, double lx) {
  ExperimentConfig c;
  c.mu = mu;
  c.order = order;
  c.ppw = ppw;
  c.lx = lx;
  c.periods = 1.0;
  c.samples_per_period = 1;
  return run(c).final_error();
}

}  // namespace

TEST(Cfl, Examples) {
  const Scheme s2 = Scheme::of_order(2);
  EXPECT_NEAR(cfl_dt(Material(1.0, 1e-14), 0.01, s2), 0.009, 1e-12);
  EXPECT_DOUBLE_EQ(cfl_dt(Material(1.0, 0.1), 0.02, s2), 2.0 * cfl_dt(Material(1.0, 0.1), 0.01, s2));
  EXPECT_DOUBLE_EQ(Scheme::of_order(4).cfl, 1.3);
  EXPECT_THROW(Scheme::of_order(3), std::invalid_argument);
}

TEST(Cfl, AlignedStepDividesTarget) {
  const double dt = align_dt(0.0123, 3.33);
  EXPECT_LE(dt, 0.0123);
  const double n = 3.33 / dt;
  EXPECT_NEAR(n, std::round(n), 1e-9);
  EXPECT_THROW(align_dt(0.0, 1.0), std::invalid_argument);
}

TEST(Solver, RejectsTinyGridAndBadStep) {
  const Material m(1.0, 1.0);
  EXPECT_THROW(ElasticSolver(m, make_strip_grid(1.0, 8, 0.3), Scheme::of_order(4), 0.01), std::invalid_argument);
  EXPECT_THROW(ElasticSolver(m, make_strip_grid(1.0, 8, 1.0), Scheme::of_order(2), 0.0), std::invalid_argument);
}

TEST(Solver, ZeroDataStaysZero) {
  for (int order : {2, 4}) {
    ElasticSolver s = homogeneous_solver(order, 0.1, 16, 1.0);
    s.initialize([](double, double, double) { return Displacement{}; });
    s.advance(50);
    EXPECT_EQ(field_max(s), 0.0);
    EXPECT_EQ(s.energy(), 0.0);
  }
}

TEST(Solver, RigidTranslationPreserved) {
  for (int order : {2, 4}) {
    const Material m(1.0, 0.2);
    const Grid g = make_strip_grid(1.0, 16, 1.0);
    const Scheme s = Scheme::of_order(order);
    BoundaryHooks h;
    h.dirichlet = [](double, double, double) { return Displacement{0.7, -0.3}; };
    ElasticSolver solver(m, g, s, cfl_dt(m, g.h, s), h);
    solver.initialize(h.dirichlet);
    solver.advance(100);
    for (int i = 0; i < g.rows(); ++i) {
      for (int j = 0; j < g.cols(); ++j) {
        EXPECT_NEAR(solver.field().u(i, j), 0.7, 1e-13);
        EXPECT_NEAR(solver.field().v(i, j), -0.3, 1e-13);
      }
    }
  }
}

TEST(Solver, TorusPlaneWaveConvergence) {
  // dt / h held fixed so that successive runs differ only by refinement.
  const Material m(1.0, 0.1);
  const PlaneWave wave(m, 2.0 * kPi, 2.0 * kPi);
  const FieldFn exact = [wave](double x, double y, double t) { return wave(x, y, t); };
  for (int order : {2, 4}) {
    std::vector<double> err;
    for (int p : {16, 32, 64}) {
      const Grid g = make_torus_grid(1.0, 1.0, p);
      ElasticSolver s(m, g, Scheme::of_order(order), 0.5 / p);
      s.initialize(exact);
      s.advance(2 * p);
      err.push_back(measure(s, exact).error());
    }
    for (std::size_t k = 1; k < err.size(); ++k) {
      const double observed = std::log2(err[k - 1] / err[k]);
      if (order == 2) {
        EXPECT_GE(observed, 1.7);
        EXPECT_LE(observed, 2.2);
      } else {
        EXPECT_GE(observed, 3.5);
        EXPECT_LE(observed, 4.5);
      }
    }
  }
}

TEST(Solver, ManufacturedSolutionWithForcingAndTraction) {
  const Manufactured mms{Material(1.0, 0.3)};
  const double e2a = mms.error(2, 16, 0.5), e2b = mms.error(2, 32, 0.5);
  EXPECT_GE(std::log2(e2a / e2b), 1.8);
  const double e4a = mms.error(4, 16, 0.5), e4b = mms.error(4, 32, 0.5);
  EXPECT_GE(std::log2(e4a / e4b), 3.5);
  EXPECT_LT(e4b, e2b);
}

TEST(Solver, OperatorSelfAdjointAndNonPositive) {
  for (int order : {2, 4}) {
    const Material m(1.0, 0.3);
    const Grid g = make_strip_grid(1.0, 12, 1.0);
    ElasticSolver s(m, g, Scheme::of_order(order), 0.01);
    const int R = g.rows(), C = g.cols();
    std::mt19937_64 rng(order);
    std::normal_distribution<double> nd;
    auto random_field = [&] {
      GridFunction f(R, C);
      for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) f(i, j) = nd(rng);
      return f;
    };
    auto inner = [&](const GridFunction& a, const GridFunction& b, const GridFunction& c, const GridFunction& d) {
      double acc = 0.0;
      for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) acc += s.row_weight(i) * (a(i, j) * b(i, j) + c(i, j) * d(i, j));
      return acc;
    };
    for (int trial = 0; trial < 20; ++trial) {
      GridFunction u = random_field(), v = random_field(), w = random_field(), z = random_field();
      GridFunction lu(R, C), lv(R, C), lw(R, C), lz(R, C);
      s.evaluate_operator(u, v, 0.0, lu, lv);
      s.evaluate_operator(w, z, 0.0, lw, lz);
      const double a = inner(w, lu, z, lv), b = inner(lw, u, lz, v);
      EXPECT_NEAR(a, b, 1e-10 * (std::abs(a) + std::abs(b))) << "order " << order;
      EXPECT_LE(inner(u, lu, v, lv), 1e-10);
    }
  }
}

TEST(Solver, Linearity) {
  ExperimentConfig c;
  c.ppw = 16;
  c.lx = 2.0;
  ProblemSetup p = make_problem(c);
  const Scheme s = Scheme::of_order(4);
  const double dt = cfl_dt(p.material, p.grid.h, s);
  const FieldFn exact = p.exact;
  BoundaryHooks scaled = p.hooks;
  const FieldFn tripled = [exact](double x, double y, double t) {
    const Displacement d = exact(x, y, t);
    return Displacement{3.0 * d.u, 3.0 * d.v};
  };
  scaled.dirichlet = tripled;
  ElasticSolver a(p.material, p.grid, s, dt, p.hooks), b(p.material, p.grid, s, dt, scaled);
  a.initialize(exact);
  b.initialize(tripled);
  a.advance(60);
  b.advance(60);
  const double ref = field_max(b);
  for (int i = 0; i < p.grid.rows(); ++i) {
    for (int j = 0; j < p.grid.cols(); ++j) {
      EXPECT_NEAR(3.0 * a.field().u(i, j), b.field().u(i, j), 1e-13 * ref);
      EXPECT_NEAR(3.0 * a.field().v(i, j), b.field().v(i, j), 1e-13 * ref);
    }
  }
}

TEST(Solver, MirrorSymmetry) {
  for (int order : {2, 4}) {
    ElasticSolver a = homogeneous_solver(order, 0.2, 20, 1.5), b = homogeneous_solver(order, 0.2, 20, 1.5);
    a.initialize(bump);
    b.initialize([](double x, double y, double t) {
      const Displacement d = bump(x, 1.0 - y, t);
      return Displacement{d.u, -d.v};
    });
    a.advance(80);
    b.advance(80);
    const Grid& g = a.grid();
    const double ref = field_max(a);
    for (int i = 0; i < g.rows(); ++i) {
      for (int j = 0; j < g.cols(); ++j) {
        const int jm = (g.cols() - j) % g.cols();
        EXPECT_NEAR(a.field().u(i, j), b.field().u(i, jm), 1e-12 * ref);
        EXPECT_NEAR(a.field().v(i, j), -b.field().v(i, jm), 1e-12 * ref);
      }
    }
  }
}

TEST(Solver, EnergyConservedWithHomogeneousData) {
  for (int order : {2, 4}) {
    ElasticSolver s = homogeneous_solver(order, 0.1, 20, 1.5);
    s.initialize(bump);
    const double e0 = s.energy();
    EXPECT_GT(e0, 0.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      s.advance(100);
      worst = std::max(worst, std::abs(s.energy() - e0) / e0);
    }
    EXPECT_LE(worst, 1e-10) << "order " << order;
  }
}

TEST(Solver, NoGrowthWithHomogeneousData) {
  for (int order : {2, 4}) {
    ElasticSolver s = homogeneous_solver(order, 0.1, 20, 1.5);
    s.initialize(bump);
    const long per_unit = std::lround(1.0 / s.dt());
    double early = field_max(s);
    for (long k = 0; k < per_unit; ++k) {
      s.step();
      early = std::max(early, field_max(s));
    }
    s.advance(19 * per_unit);
    EXPECT_LE(field_max(s), 1.01 * early) << "order " << order;
  }
}

TEST(Solver, AbortsOnUnstableStep) {
  ElasticSolver s = homogeneous_solver(2, 0.1, 16, 1.0, 5.0);
  s.initialize(bump);
  EXPECT_THROW(s.advance(2000), NumericalAbort);
}

TEST(Solver, RayleighConvergenceOrders) {
  const double a2 = rayleigh_error(2, 0.1, 20, 3.0), b2 = rayleigh_error(2, 0.1, 40, 3.0);
  EXPECT_GE(std::log2(a2 / b2), 1.7);
  EXPECT_LE(std::log2(a2 / b2), 2.2);
  const double a4 = rayleigh_error(4, 0.1, 20, 3.0), b4 = rayleigh_error(4, 0.1, 40, 3.0);
  EXPECT_GE(std::log2(a4 / b4), 3.5);
  EXPECT_LE(std::log2(a4 / b4), 4.5);
}

TEST(Solver, PhaseErrorDominatesLongRuns) {
  // Time to reach error 0.5 grows like P^2 for the second-order scheme.
  std::vector<double> times;
  for (const auto& [p, tf] : {std::pair{50, 60.0}, std::pair{100, 145.0}}) {
    ExperimentConfig c;
    c.mu = 0.01;
    c.ppw = p;
    c.lx = 5.0;
    c.t_final = tf;
    c.samples_per_period = 20;
    times.push_back(run(c).time_to_error(0.5));
  }
  ASSERT_TRUE(std::isfinite(times[0]) && std::isfinite(times[1]));
  EXPECT_NEAR(times[1] / times[0], 4.0, 0.3 * 4.0);
}

TEST(Experiment, ValidationAndTiming) {
  ExperimentConfig c;
  c.ppw = 9;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.ppw = 10;
  c.periods = 0.5;
  c.lx = 1.0;
  const RunResult r = run(c);
  EXPECT_GE(r.wall_seconds, 0.0);
  EXPECT_EQ(r.series.size(), 6u);
  EXPECT_EQ(r.series.front().error(), 0.0);
  EXPECT_NEAR(r.series.back().t, 0.5 * r.period, 1e-9);
}
