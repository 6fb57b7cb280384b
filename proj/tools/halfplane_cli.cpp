// Command-line front end: dispersion tables, boundary sweeps, solver runs
// and studies. CSV goes to --out or stdout; summaries go to stderr.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "halfplane/boundary.hpp"
#include "halfplane/dispersion.hpp"
#include "halfplane/exact.hpp"
#include "halfplane/experiment.hpp"
#include "halfplane/harness.hpp"

namespace hp = halfplane;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kNumerical = 2 };

struct CommonOptions {
  std::string config;
  bool force = false;
  double budget = hp::kDefaultBudget;
  // Values recorded only when given on the command line.
  double lambda = 0, mu = 0, t_final = 0, periods = 0, lx = 0, angle = 0, cfl = 0;
  int order = 0, ppw = 0, samples = 0;
  std::string out, snapshot;
  std::vector<CLI::Option*> tracked;
  CLI::Option* order_opt = nullptr;
  CLI::Option* periods_opt = nullptr;
  CLI::Option* t_final_opt = nullptr;
};

void add_run_flags(CLI::App* app, CommonOptions& o) {
  auto track = [&](CLI::Option* opt) { o.tracked.push_back(opt); };
  track(app->add_option("--lambda", o.lambda, "first Lame parameter"));
  track(app->add_option("--mu", o.mu, "shear modulus"));
  o.order_opt = app->add_option("--order", o.order, "scheme order (2 or 4)");
  track(o.order_opt);
  track(app->add_option("--ppw", o.ppw, "grid points per wave length"));
  o.t_final_opt = app->add_option("--t-final", o.t_final, "final time");
  track(o.t_final_opt);
  o.periods_opt = app->add_option("--periods", o.periods, "final time in periods when --t-final is absent");
  track(o.periods_opt);
  track(app->add_option("--lx", o.lx, "domain depth (Rayleigh problem)"));
  track(app->add_option("--angle", o.angle, "incidence angle in radians (mode conversion)"));
  track(app->add_option("--cfl", o.cfl, "Courant constant K_C"));
  track(app->add_option("--samples-per-period", o.samples, "error samples per period"));
  track(app->add_option("--snapshot", o.snapshot, "write the final state as x,y,u,v CSV"));
  app->add_option("--out", o.out, "output CSV path (default stdout)");
  app->add_option("--config", o.config, "key = value configuration file");
  app->add_flag("--force", o.force, "ignore the work budget");
  app->add_option("--budget", o.budget, "work budget in point updates");
}

hp::ExperimentConfig build_config(const CommonOptions& o, hp::Problem problem) {
  hp::KeyValues file;
  if (!o.config.empty()) file = hp::load_key_values(o.config);
  hp::KeyValues cli;
  cli["problem"] = hp::to_string(problem);
  for (const CLI::Option* opt : o.tracked) {
    if (opt->count() == 0) continue;
    std::string key = opt->get_name();
    key = key.substr(key.find_first_not_of('-'));
    for (char& ch : key) {
      if (ch == '-') ch = '_';
    }
    cli[key] = opt->as<std::string>();
  }
  return hp::make_config(file, cli);
}

/// Runs `write` against --out or stdout.
template <typename Write>
void emit(const std::string& path, Write&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot open output file " + path);
  write(os);
}

void check_budget(const hp::ExperimentConfig& c, const CommonOptions& o) {
  const double work = hp::predicted_work(c);
  if (!hp::Budget{o.budget, o.force}.allows(work)) throw hp::BudgetExceeded(work, o.budget);
}

double parse_ratio(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

std::vector<std::pair<double, int>> parse_pairs(const std::vector<std::string>& items) {
  std::vector<std::pair<double, int>> pairs;
  for (const auto& item : items) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("pair '" + item + "' is not mu:P");
    pairs.emplace_back(std::stod(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
  }
  return pairs;
}

void print_rows_summary(const hp::StudyResult& s) {
  for (const auto& r : s.rows) {
    std::cerr << "mu=" << r.mu << " order=" << r.order << " P=" << r.ppw << " t=" << r.t << " error=" << r.error;
    if (!std::isnan(r.observed_order)) std::cerr << " observed_order=" << r.observed_order;
    std::cerr << " wall=" << r.wall_seconds << "s\n";
  }
  if (s.partial) std::cerr << "study stopped early: work budget reached\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic half-plane laboratory: Rayleigh dispersion, boundary response and wave solvers"};
  app.require_subcommand(1);

  // dispersion table
  auto* disp = app.add_subcommand("dispersion", "generalized eigenvalue data");
  auto* disp_table = disp->add_subcommand("table", "xi0^2, kappa10, kappa20, |phi'| per lambda/mu");
  std::vector<std::string> ratios{"0", "1", "4", "8", "inf"};
  std::string disp_out;
  disp_table->add_option("--lam-over-mu", ratios, "lambda/mu values ('inf' allowed)");
  disp_table->add_option("--out", disp_out, "output CSV path");
  disp->require_subcommand(1);

  // rayleigh run | converge | scale
  auto* ray = app.add_subcommand("rayleigh", "Rayleigh surface wave experiments");
  ray->require_subcommand(1);
  CommonOptions ray_run_o, ray_conv_o, ray_scale_o;
  auto* ray_run = ray->add_subcommand("run", "single run; writes t,max_err_u,max_err_v,energy");
  add_run_flags(ray_run, ray_run_o);
  auto* ray_conv = ray->add_subcommand("converge", "errors at P, 2P, 4P, ... with observed orders");
  add_run_flags(ray_conv, ray_conv_o);
  int refinements = 3;
  ray_conv->add_option("--refinements", refinements, "number of grids");
  auto* ray_scale = ray->add_subcommand("scale", "error curves for (mu, P) pairs with a common invariant");
  add_run_flags(ray_scale, ray_scale_o);
  std::vector<std::string> pair_items{"0.1:40", "0.01:126"};
  std::string curves_out;
  ray_scale->add_option("--pairs", pair_items, "mu:P pairs");
  ray_scale->add_option("--curves", curves_out, "long-format curve CSV");

  // modeconv run | study
  auto* mc = app.add_subcommand("modeconv", "reflected shear wave experiments");
  mc->require_subcommand(1);
  CommonOptions mc_run_o, mc_study_o;
  auto* mc_run = mc->add_subcommand("run", "single run with P_s = --ppw points per shear wave length");
  add_run_flags(mc_run, mc_run_o);
  auto* mc_study = mc->add_subcommand("study", "errors for every (mu, P_s)");
  add_run_flags(mc_study, mc_study_o);
  std::vector<double> mc_mus{0.1, 0.01};
  std::vector<int> mc_ps{10, 20};
  mc_study->add_option("--mus", mc_mus, "shear moduli");
  mc_study->add_option("--ps", mc_ps, "points per shear wave length");

  // boundary sweep
  auto* bnd = app.add_subcommand("boundary", "Laplace-Fourier boundary response");
  bnd->require_subcommand(1);
  auto* sweep = bnd->add_subcommand("sweep", "traces over a rectangle of s values");
  double b_lambda = 1.0, b_mu = 1.0, b_omega = 1.0, re_min = 0.01, re_max = 1.0, im_min = -2.0, im_max = 2.0;
  double g1_re = 1.0, g1_im = 0.0, g2_re = 0.0, g2_im = 0.0;
  int n_re = 10, n_im = 41;
  std::string sweep_out;
  sweep->add_option("--lambda", b_lambda);
  sweep->add_option("--mu", b_mu);
  sweep->add_option("--omega", b_omega);
  sweep->add_option("--re-min", re_min);
  sweep->add_option("--re-max", re_max);
  sweep->add_option("--im-min", im_min);
  sweep->add_option("--im-max", im_max);
  sweep->add_option("--n-re", n_re);
  sweep->add_option("--n-im", n_im);
  sweep->add_option("--g1-re", g1_re);
  sweep->add_option("--g1-im", g1_im);
  sweep->add_option("--g2-re", g2_re);
  sweep->add_option("--g2-im", g2_im);
  sweep->add_option("--out", sweep_out);

  // predict
  CommonOptions pred_o;
  auto* pred = app.add_subcommand("predict", "predicted vs measured phase error of the Rayleigh wave");
  add_run_flags(pred, pred_o);
  double eps = 0.01;
  pred->add_option("--eps", eps, "target relative phase-speed error, in (0, 0.5)");

  // exact sample
  auto* ex = app.add_subcommand("exact", "closed-form fields");
  ex->require_subcommand(1);
  auto* sample = ex->add_subcommand("sample", "sample a field on the problem grid as x,y,u,v");
  CommonOptions ex_o;
  add_run_flags(sample, ex_o);
  std::string ex_problem = "rayleigh";
  double ex_t = 0.0;
  sample->add_option("--problem", ex_problem, "rayleigh, modeconv or plane-wave");
  sample->add_option("--time", ex_t, "sample time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (disp_table->parsed()) {
      emit(disp_out, [&](std::ostream& os) {
        os << std::setprecision(17) << "lam_over_mu,xi0_sq,kappa10,kappa20,abs_phi_prime\n";
        for (const auto& r : ratios) {
          const hp::LameRatio ratio(parse_ratio(r));
          const hp::RayleighMode m = hp::find_rayleigh_mode(ratio);
          os << (ratio.is_infinite() ? std::string("inf") : r) << ',' << m.xi0_sq << ',' << m.kappa10 << ','
             << m.kappa20 << ',' << m.phi_prime_abs << '\n';
        }
      });
    } else if (ray_run->parsed()) {
      const auto c = build_config(ray_run_o, hp::Problem::rayleigh);
      check_budget(c, ray_run_o);
      const auto r = hp::run(c);
      emit(ray_run_o.out, [&](std::ostream& os) { hp::write_series(os, r.series); });
      std::cerr << "grid " << r.grid.nx << "x" << r.grid.ny << ", dt=" << r.dt << ", steps=" << r.steps
                << ", T=" << r.period << ", final error=" << r.final_error() << ", wall=" << r.wall_seconds << "s\n";
    } else if (ray_conv->parsed()) {
      const auto c = build_config(ray_conv_o, hp::Problem::rayleigh);
      const auto s = hp::convergence_study(c, refinements, {ray_conv_o.budget, ray_conv_o.force});
      emit(ray_conv_o.out, [&](std::ostream& os) { hp::write_rows(os, s.rows); });
      print_rows_summary(s);
    } else if (ray_scale->parsed()) {
      auto c = build_config(ray_scale_o, hp::Problem::rayleigh);
      if (ray_scale_o.periods_opt->count() == 0 && ray_scale_o.config.empty()) c.periods = 10.0;
      const auto s = hp::scaling_study(c, parse_pairs(pair_items), {ray_scale_o.budget, ray_scale_o.force});
      emit(ray_scale_o.out, [&](std::ostream& os) { hp::write_rows(os, s.rows); });
      if (!curves_out.empty()) emit(curves_out, [&](std::ostream& os) { hp::write_curves(os, s); });
      print_rows_summary(s);
      std::cerr << "largest per-period error ratio between curves: " << s.max_curve_ratio << '\n';
    } else if (mc_run->parsed()) {
      const auto c = build_config(mc_run_o, hp::Problem::modeconv);
      check_budget(c, mc_run_o);
      const auto r = hp::run(c);
      emit(mc_run_o.out, [&](std::ostream& os) { hp::write_series(os, r.series); });
      std::cerr << "grid " << r.grid.nx << "x" << r.grid.ny << ", T=" << r.period << ", final error=" << r.final_error()
                << ", wall=" << r.wall_seconds << "s\n";
    } else if (mc_study->parsed()) {
      auto c = build_config(mc_study_o, hp::Problem::modeconv);
      if (mc_study_o.order_opt->count() == 0 && mc_study_o.config.empty()) c.order = 4;
      const auto s = hp::modeconv_study(c, mc_mus, mc_ps, {mc_study_o.budget, mc_study_o.force});
      emit(mc_study_o.out, [&](std::ostream& os) { hp::write_rows(os, s.rows); });
      print_rows_summary(s);
    } else if (sweep->parsed()) {
      const hp::Material m(b_lambda, b_mu);
      if (n_re < 1 || n_im < 1) throw std::invalid_argument("sweep needs at least one point per axis");
      emit(sweep_out, [&](std::ostream& os) {
        os << std::setprecision(17) << "re_s,im_s,omega,abs_u0,abs_v0,abs_phi\n";
        for (int a = 0; a < n_re; ++a) {
          const double re = n_re == 1 ? re_min : re_min + (re_max - re_min) * a / (n_re - 1);
          for (int b = 0; b < n_im; ++b) {
            const double im = n_im == 1 ? im_min : im_min + (im_max - im_min) * b / (n_im - 1);
            hp::BoundaryData d{{g1_re, g1_im}, {g2_re, g2_im}, {re, im}, b_omega};
            os << re << ',' << im << ',' << b_omega << ',';
            try {
              const auto r = hp::solve_boundary_system(d, m);
              os << std::abs(r.u_at_0) << ',' << std::abs(r.v_at_0) << ',' << std::abs(r.phi) << '\n';
            } catch (const hp::SingularBoundarySystem& e) {
              os << "inf,inf," << e.abs_phi() << '\n';
            }
          }
        }
      });
    } else if (pred->parsed()) {
      const auto c = build_config(pred_o, hp::Problem::rayleigh);
      const auto r = hp::predict_vs_measure(c, eps);
      emit(pred_o.out, [&](std::ostream& os) {
        os << std::setprecision(17)
           << "lambda,mu,order,eps,predicted_ppw,run_ppw,measured_eps,measured_ppw,max_error,wall_seconds\n"
           << r.lambda << ',' << r.mu << ',' << r.order << ',' << r.eps << ',' << r.predicted_ppw << ','
           << r.run_ppw << ',' << r.measured_eps << ',' << r.measured_ppw << ',' << r.max_error << ','
           << r.wall_seconds << '\n';
      });
    } else if (sample->parsed()) {
      const auto c = build_config(ex_o, hp::parse_problem(ex_problem));
      const auto p = hp::make_problem(c);
      emit(ex_o.out, [&](std::ostream& os) {
        os << std::setprecision(17) << "x,y,u,v\n";
        for (int i = 0; i < p.grid.nx; ++i) {
          for (int j = 0; j < p.grid.ny; ++j) {
            const auto d = p.exact(p.grid.x(i), p.grid.y(j), ex_t);
            os << p.grid.x(i) << ',' << p.grid.y(j) << ',' << d.u << ',' << d.v << '\n';
          }
        }
      });
    }
  } catch (const hp::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
