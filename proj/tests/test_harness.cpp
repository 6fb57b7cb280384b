#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "halfplane/harness.hpp"

using namespace halfplane;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("halfplane_test_" + name)).string();
}

ExperimentConfig small_rayleigh() {
  ExperimentConfig c;
  c.ppw = 10;
  c.lx = 2.0;
  c.periods = 1.0;
  return c;
}

}  // namespace

TEST(Config, ParsesKeyValuesWithComments) {
  std::istringstream in("# header\n  mu = 0.01  # shear\n\norder=4\nout = a b.csv\n");
  const KeyValues kv = parse_key_values(in);
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv.at("mu"), "0.01");
  EXPECT_EQ(kv.at("order"), "4");
  EXPECT_EQ(kv.at("out"), "a b.csv");
}

TEST(Config, RejectsMalformedLines) {
  std::istringstream no_eq("mu 0.1\n");
  EXPECT_THROW(parse_key_values(no_eq), std::invalid_argument);
  std::istringstream no_key(" = 3\n");
  EXPECT_THROW(parse_key_values(no_key), std::invalid_argument);
  EXPECT_THROW(make_config({{"mu", "abc"}}, {}), std::invalid_argument);
  EXPECT_THROW(make_config({{"order", "2.5"}}, {}), std::invalid_argument);
  EXPECT_THROW(make_config({{"viscosity", "1"}}, {}), std::invalid_argument);
  EXPECT_THROW(load_key_values(temp_path("does_not_exist.cfg")), std::invalid_argument);
}

TEST(Config, CommandLineWins) {
  const ExperimentConfig c =
      make_config({{"mu", "0.5"}, {"order", "4"}, {"problem", "modeconv"}}, {{"mu", "0.02"}, {"ppw", "30"}});
  EXPECT_EQ(c.mu, 0.02);
  EXPECT_EQ(c.order, 4);
  EXPECT_EQ(c.ppw, 30);
  EXPECT_EQ(c.problem, Problem::modeconv);
}

TEST(Config, ValidationOnMerge) {
  EXPECT_THROW(make_config({{"ppw", "8"}}, {}), std::invalid_argument);
  EXPECT_THROW(make_config({}, {{"order", "3"}}), std::invalid_argument);
  EXPECT_THROW(make_config({}, {{"mu", "0"}}), std::invalid_argument);
  EXPECT_THROW(make_config({}, {{"problem", "heat"}}), std::invalid_argument);
}

TEST(Config, LoadsFile) {
  const std::string path = temp_path("load.cfg");
  std::ofstream(path) << "lambda = 2\nperiods = 3\n";
  const ExperimentConfig c = make_config(load_key_values(path), {});
  EXPECT_EQ(c.lambda, 2.0);
  EXPECT_EQ(c.periods, 3.0);
  std::filesystem::remove(path);
}

TEST(Budget, RefusesOversizedStudyUnlessForced) {
  ExperimentConfig c = small_rayleigh();
  const double work = predicted_work(c);
  EXPECT_GT(work, 0.0);
  EXPECT_THROW(convergence_study(c, 2, Budget{work / 2, false}), BudgetExceeded);
  const StudyResult forced = convergence_study(c, 2, Budget{work / 2, true});
  EXPECT_FALSE(forced.partial);
  EXPECT_EQ(forced.rows.size(), 2u);
}

TEST(Budget, StopsEarlyAndFlagsPartial) {
  ExperimentConfig c = small_rayleigh();
  const StudyResult r = convergence_study(c, 3, Budget{1.5 * predicted_work(c), false});
  EXPECT_TRUE(r.partial);
  EXPECT_EQ(r.rows.size(), 1u);
}

TEST(Harness, ExactInputMeasuresZero) {
  ExperimentConfig c = small_rayleigh();
  const ProblemSetup p = make_problem(c);
  ElasticSolver s(p.material, p.grid, Scheme::of_order(2), 0.01, p.hooks);
  s.initialize(p.exact, 1.7);
  const Sample m = measure(s, p.exact);
  EXPECT_EQ(m.err_u, 0.0);
  EXPECT_EQ(m.err_v, 0.0);
}

TEST(Harness, ConvergenceStudyOrders) {
  ExperimentConfig c = small_rayleigh();
  c.lx = 3.0;
  c.ppw = 20;
  const StudyResult r = convergence_study(c, 3);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_TRUE(std::isnan(r.rows[0].observed_order));
  for (std::size_t k = 1; k < r.rows.size(); ++k) {
    EXPECT_TRUE(std::isfinite(r.rows[k].observed_order));
    EXPECT_GT(r.rows[k].observed_order, 0.0);
    EXPECT_GE(r.rows[k].wall_seconds, 0.0);
  }
  EXPECT_EQ(r.rows[2].ppw, 80);
  EXPECT_THROW(convergence_study(c, 1), std::invalid_argument);
}

TEST(Harness, ObservedOrderOnlyBetweenDoublings) {
  std::vector<StudyRow> rows(3);
  rows[0].mu = rows[1].mu = rows[2].mu = 0.1;
  rows[0].ppw = 10;
  rows[1].ppw = 20;
  rows[2].ppw = 30;
  rows[0].error = 0.16;
  rows[1].error = 0.01;
  rows[2].error = 0.005;
  fill_orders(rows);
  EXPECT_DOUBLE_EQ(rows[1].observed_order, 4.0);
  EXPECT_TRUE(std::isnan(rows[2].observed_order));
}

TEST(Harness, CurveRatioUsesPerPeriodMaxima) {
  std::vector<Sample> a(5), b(5);
  for (int k = 1; k < 5; ++k) {
    a[k].err_u = 0.1 * k;
    b[k].err_u = 0.1 * k;
  }
  EXPECT_DOUBLE_EQ(curve_ratio(a, b, 2), 1.0);
  b[1].err_u = 0.5;  // transient inside the first period, below its maximum
  b[2].err_u = 0.3;
  EXPECT_DOUBLE_EQ(curve_ratio(a, b, 2), 2.5);
  b.pop_back();
  EXPECT_THROW(curve_ratio(a, b, 2), std::invalid_argument);
}

TEST(Harness, ScalingStudy) {
  EXPECT_NEAR(scaling_invariant(4, 0.1, 12), 6.748, 1e-3);
  EXPECT_NEAR(scaling_invariant(4, 0.001, 38), 6.757, 1e-3);
  ExperimentConfig c = small_rayleigh();
  c.lx = 1.5;
  EXPECT_THROW(scaling_study(c, {{0.1, 20}, {0.01, 20}}), std::invalid_argument);
  EXPECT_THROW(scaling_study(c, {}), std::invalid_argument);
  const StudyResult single = scaling_study(c, {{0.1, 12}});
  EXPECT_EQ(single.curves.size(), 1u);
  EXPECT_EQ(single.max_curve_ratio, 1.0);
  const StudyResult pair = scaling_study(c, {{0.16, 10}, {0.04, 20}});
  EXPECT_EQ(pair.curves.size(), 2u);
  EXPECT_EQ(pair.curves[0].size(), pair.curves[1].size());
  EXPECT_GE(pair.max_curve_ratio, 1.0);
}

TEST(Harness, ModeConversionStudy) {
  ExperimentConfig c;
  c.order = 4;
  c.periods = 0.5;
  const StudyResult r = modeconv_study(c, {0.1}, {10, 20});
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].label, "modeconv");
  EXPECT_NEAR(r.rows[0].period, 5.74, 5e-3);
  EXPECT_GT(r.rows[1].observed_order, 3.0);
}

TEST(Harness, DeterministicOutput) {
  ExperimentConfig c = small_rayleigh();
  c.out = temp_path("a.csv");
  run(c);
  const std::string first = read_file(c.out);
  run(c);
  EXPECT_EQ(first, read_file(c.out));
  EXPECT_EQ(first.substr(0, first.find('\n')), "t,max_err_u,max_err_v,energy");
  std::filesystem::remove(c.out);
}

TEST(Harness, SnapshotOutput) {
  ExperimentConfig c = small_rayleigh();
  c.periods = 0.1;
  c.snapshot = temp_path("snap.csv");
  const RunResult r = run(c);
  std::ifstream in(c.snapshot);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x,y,u,v");
  long lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, r.grid.unknown_points());
  std::filesystem::remove(c.snapshot);
}

TEST(Harness, StudyCsvColumns) {
  StudyResult s;
  s.rows.push_back(StudyRow{});
  s.rows[0].label = "rayleigh";
  s.rows[0].period = 2.0;
  s.curves.push_back({Sample{1.0, 0.1, 0.2, 3.0}});
  std::ostringstream rows, curves;
  write_rows(rows, s.rows);
  write_curves(curves, s);
  EXPECT_NE(rows.str().find("rayleigh,"), std::string::npos);
  EXPECT_NE(curves.str().find("\n0,0,0.5,1,0.10000000000000001,0.20000000000000001,3\n"), std::string::npos);
}

TEST(Predict, RejectsBadEps) {
  ExperimentConfig c;
  EXPECT_THROW(predict_vs_measure(c, 0.0), std::invalid_argument);
  EXPECT_THROW(predict_vs_measure(c, 0.5), std::invalid_argument);
  EXPECT_THROW(predict_vs_measure(c, 0.7), std::invalid_argument);
}

TEST(Predict, SecondOrderQuarterMuDoublesResolution) {
  ExperimentConfig c;
  c.lx = 3.0;
  c.mu = 0.16;
  const PhaseReport a = predict_vs_measure(c, 0.01);
  c.mu = 0.04;
  const PhaseReport b = predict_vs_measure(c, 0.01);
  EXPECT_NEAR(b.predicted_ppw / a.predicted_ppw, 2.0, 0.3);
  EXPECT_GT(a.measured_eps, 0.0);
  EXPECT_NEAR(b.measured_ppw / a.measured_ppw, 2.0, 0.3);
}

TEST(Predict, FourthOrderSixteenthMuDoublesResolution) {
  ExperimentConfig c;
  c.lx = 3.0;
  c.order = 4;
  c.mu = 0.16;
  const PhaseReport a = predict_vs_measure(c, 0.01);
  c.mu = 0.01;
  const PhaseReport b = predict_vs_measure(c, 0.01);
  EXPECT_NEAR(b.predicted_ppw / a.predicted_ppw, 2.0, 0.3);
  EXPECT_NEAR(b.measured_ppw / a.measured_ppw, 2.0, 0.3);
}
