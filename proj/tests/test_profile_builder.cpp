#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cohomlab/catalog.hpp"
#include "cohomlab/cheeger.hpp"
#include "cohomlab/profile_builder.hpp"

using namespace cohomlab;

namespace {

ProfilePtr single(Form f, double a, double b) { return make_profile(WarpProfile::single(std::move(f), a, b)); }

// Newton on t + c0^2 t^3 = delta^{-1/2}, independent of the bisection.
double newton_R0(double delta, double c0) {
  const double target = 1 / std::sqrt(delta);
  double t = std::cbrt(target / (c0 * c0)) + 1;
  for (int i = 0; i < 100; ++i) t -= (t + c0 * c0 * t * t * t - target) / (1 + 3 * c0 * c0 * t * t);
  return t;
}

double f0(double t, double c0) { return c0 * t / std::sqrt(1 + c0 * c0 * t * t); }
double f0p(double t, double c0) { return c0 / std::pow(1 + c0 * c0 * t * t, 1.5); }

Cohom1Metric berger_ball() {
  const Scenario s = load_scenario("su2-berger");
  return ball_profile(s.chain(), default_ball_lambda(), s.a, s.b, std::numbers::pi / 3);
}

}  // namespace

TEST(CheckInequality, Constant) {
  const auto f = single(form::Constant{0.7}, 0, 1);
  const InequalityReport r = check_inequality(*f, 9, interior_grid(0, 1, 50));
  EXPECT_EQ(r.maxViolation, 0.0);
  EXPECT_EQ(r.maxConcavity, 0.0);
  EXPECT_TRUE(r.passes());
  EXPECT_EQ(r.signMismatches, 0);
}

TEST(CheckInequality, EqualityPower) {
  for (int C : {9, 12}) {
    const auto f = single(form::PowerOfPoly{form::Polynomial{{0.0, 1.0}, 0.0}, 1.0 / (C + 1)}, 0.5, 3);
    const InequalityReport r = check_inequality(*f, C, interior_grid(0.5, 3, 50));
    EXPECT_TRUE(r.passes()) << r.maxViolation;
    EXPECT_NEAR(r.maxConcavity, 0.0, 1e-12);
    EXPECT_EQ(r.signMismatches, 0);
  }
}

TEST(CheckInequality, LinearFails) {
  const auto f = single(form::Polynomial{{0.0, 1.0}, 0.0}, 0.5, 3);
  const InequalityReport r = check_inequality(*f, 9, interior_grid(0.5, 3, 20));
  EXPECT_EQ(r.maxViolation, 9.0);
  EXPECT_FALSE(r.passes());
  for (const auto& p : r.points) EXPECT_EQ(p.margin, -9.0);
  EXPECT_EQ(r.signMismatches, 0);
}

TEST(SolveR0, Examples) {
  EXPECT_NEAR(solve_R0(0.25, 1.0), 1.0, 1e-12);
  // f0'/f0 at t = 1 is 1/2.
  EXPECT_NEAR(f0p(1, 1) / f0(1, 1), 0.5, 1e-15);
  const double r = solve_R0(1e-6, 1.0);
  EXPECT_NEAR(r, newton_R0(1e-6, 1.0), 1e-10 * r);
  EXPECT_NEAR(r, 9.9667, 5e-5);
  EXPECT_NEAR(std::pow(f0p(r, 1) / f0(r, 1), 2), 1e-6, 1e-16);
  EXPECT_THROW(solve_R0(0.5, 1.0), std::domain_error);
}

TEST(SolveR0, Asymptotic) {
  for (double c0 : {0.5, 1.0, 2.0}) {
    const double d = 1e-10;
    EXPECT_NEAR(solve_R0(d, c0) * std::pow(d, 1.0 / 6), std::pow(c0, -2.0 / 3), 0.01 * std::pow(c0, -2.0 / 3));
  }
}

TEST(SolveR0, Monotone) {
  const auto deltas = log_space(1e-12, 1e-2, 30);
  for (double c0 : {0.5, 1.0, 2.0})
    for (std::size_t i = 0; i + 1 < deltas.size(); ++i)
      EXPECT_GT(solve_R0(deltas[i], c0), solve_R0(deltas[i + 1], c0));
  for (double d : {1e-8, 1e-4})
    for (double c0 = 0.5; c0 < 2.0; c0 += 0.1) EXPECT_GT(solve_R0(d, c0), solve_R0(d, c0 + 0.1));
}

TEST(BuildDiscProfile, MatchesConeToFirstOrder) {
  const BuiltDiscProfile p = build_disc_profile(1e-6, 1.0, 9);
  EXPECT_TRUE(p.concaveFromR0());
  const Jet j = p.f->jet(p.R0);
  EXPECT_NEAR(j.v, f0(p.R0, 1), 1e-15);
  EXPECT_NEAR(j.d1, f0p(p.R0, 1), 1e-15);
  EXPECT_GT(p.R - p.R0, 1.0);
  EXPECT_GE(p.R - p.capEnd, 0.5);
  for (double t : interior_grid(p.capEnd, p.R, 20, 0.0)) EXPECT_EQ((*p.f)(t), 1.0);
}

TEST(BuildDiscProfile, RFormula) {
  const double d = 1e-6;
  const BuiltDiscProfile p = build_disc_profile(d, 1.0, 9);
  const double h = std::pow(f0(p.R0, 1), 10);
  const double hp = 10 * std::pow(f0(p.R0, 1), 9) * f0p(p.R0, 1);
  EXPECT_NEAR(p.R, p.R0 + (1 - h) / hp + 1, 1e-10 * p.R);
}

TEST(BuildDiscProfile, Invariants) {
  for (double d : {1e-4, 1e-6, 1e-8})
    for (int C : {9, 12}) {
      const BuiltDiscProfile p = build_disc_profile(d, 1.0, C);
      const DiscProfileInvariants inv = check_disc_profile(p, interior_grid(1.0, p.R, 4001));
      EXPECT_TRUE(inv.pass()) << inv.to_json().dump();
      std::vector<double> tail;
      for (double t : interior_grid(p.R0, p.R, 500)) tail.push_back(t);
      const InequalityReport r = check_inequality(*p.f, C, tail);
      EXPECT_TRUE(r.passes()) << d << " " << C << " " << r.maxViolation;
      EXPECT_EQ(r.signMismatches, 0);
    }
}

TEST(BuildDiscProfile, StrictModeRejectsConvexStart) {
  // c0 = 1/2, delta = 1e-2 puts R0 before the inflection of f0^{C+1}.
  const BuiltDiscProfile p = build_disc_profile(1e-2, 0.5, 9);
  EXPECT_FALSE(p.concaveFromR0());
  EXPECT_GT(p.capStart, p.R0);
  EXPECT_THROW(build_disc_profile(1e-2, 0.5, 9, true), std::domain_error);
  EXPECT_THROW(build_disc_profile(1e-6, 1.0, 8), std::invalid_argument);
}

TEST(BuildDiscProfile, JsonHasExactPieces) {
  const BuiltDiscProfile p = build_disc_profile(1e-4, 1.0, 9);
  const nlohmann::json j = disc_profile_json(p);
  EXPECT_EQ(j.at("C"), 9);
  const auto& pieces = j.at("profile").at("pieces");
  ASSERT_GE(pieces.size(), 4u);
  const WarpProfile back = WarpProfile::from_json(j.at("profile"));
  for (double t : interior_grid(1.0, p.R, 97)) EXPECT_EQ(back(t), (*p.f)(t));
}

TEST(DeformationConditions, IdenticalProfilesPass) {
  const Cohom1Metric M = berger_ball();
  const double t0 = std::numbers::pi / 3;
  const double c0 = M.profile(1)(t0);
  const auto grid = interior_grid(t0 - 0.01, t0 + 0.01, 21, 0.0);
  const DeformationReport r = deformation_conditions(M.profiles(), M.profiles(), c0, 0.05, grid);
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.cond2, 0.05, 1e-15);
  EXPECT_NEAR(r.cond3, 0.05, 1e-15);
}

TEST(DeformationConditions, ShiftReducesFirstMargin) {
  const Cohom1Metric M = berger_ball();
  const double t0 = std::numbers::pi / 3, eps = 0.05;
  const double c0 = M.profile(1)(t0);
  const auto grid = interior_grid(t0 - 0.01, t0 + 0.01, 21, 0.0);
  std::vector<ProfilePtr> shifted;
  for (const auto& f : M.profiles())
    shifted.push_back(single(form::Combination{{1.0}, {f}, form::Polynomial{{eps / 2}, 0.0}}, f->lo(), f->hi()));
  const DeformationReport r = deformation_conditions(M.profiles(), shifted, c0, eps, grid);
  double expected = std::numeric_limits<double>::infinity();
  for (double t : grid)
    for (const auto& f : M.profiles()) expected = std::min(expected, eps - std::abs((*f)(t) + eps / 2 - c0));
  EXPECT_NEAR(r.cond1, expected, 1e-15);
}

TEST(Equalize, BergerBallPipeline) {
  const Cohom1Metric M = berger_ball();
  const double t0 = std::numbers::pi / 3;
  EqualizeOptions opt;
  opt.t0 = t0;
  const EqualizeResult r = equalize_profiles(M, opt);
  EXPECT_TRUE(r.orderingHolds);
  EXPECT_TRUE(r.scan.pass()) << r.scan.failures << " of " << r.scan.samples;
  // Unchanged near the left end, a single warp near the right end.
  for (int b = 1; b <= 2; ++b) {
    EXPECT_EQ(r.metric.profile(b)(M.a() + 0.01), M.profile(b)(M.a() + 0.01));
    EXPECT_EQ(r.metric.profile(b)(M.b() - 0.01), (*r.target)(M.b() - 0.01));
  }
  const Jet tail = r.target->jet(M.b() - 0.01);
  EXPECT_GT(tail.d1, 0.0);
  EXPECT_LT(tail.d2, 0.0);
  const JoinDiagnostics joins = r.metric.profile(1).check_joins();
  EXPECT_LT(joins.value, 1e-12);
  EXPECT_LT(joins.d1, 1e-12);
  EXPECT_LT(joins.d2, 1e-9);
  // Where the profiles are untouched the deformation conditions hold trivially.
  const auto grid = interior_grid(t0 - 0.01, t0 + 0.01, 11, 0.0);
  EXPECT_TRUE(deformation_conditions(M.profiles(), r.metric.profiles(), M.profile(1)(t0), 0.05, grid).pass());
}

TEST(Equalize, EqualProfilesJoinDirectly) {
  const Scenario s = load_scenario("su2-berger");
  const auto f = single(form::Sine{0.2, 1.0, 0.0, 0.5}, s.a, s.b);
  const Cohom1Metric M(s.decomposition, s.a, s.b, {f, f});
  EqualizeOptions opt;
  opt.t0 = 1.0;
  const EqualizeResult r = equalize_profiles(M, opt);
  EXPECT_EQ(r.Ci, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(r.metric.profile(1)(0.9), f->jet(0.9).v);
}

TEST(Equalize, RejectsUnequalStart) {
  const Scenario s = load_scenario("su2-berger");
  EqualizeOptions opt;
  opt.t0 = 1.0;
  EXPECT_THROW(equalize_profiles(s.demoMetric(), opt), std::invalid_argument);
}

TEST(AbcScan, DetectsNegativeCurvature) {
  const Scenario s = load_scenario("su2-berger");
  const auto wave = single(form::Sine{0.45, 3.0, 0.0, 0.55}, s.a, s.b);
  const Cohom1Metric M(s.decomposition, s.a, s.b, {wave, s.demoProfiles[1]});
  const AbcScan r = abc_positivity_scan(M, interior_grid(s.a, s.b, 32), 32, 42);
  EXPECT_FALSE(r.pass());
  EXPECT_GT(r.failures, 0);
}

TEST(Glue, SelfGlueMatches) {
  const Scenario s = load_scenario("su2-berger");
  const BuiltDiscProfile p = build_disc_profile(1e-4, 1.0, 9);
  const GlueInput in{p, s.decomposition};
  const Cohom1Metric M = glue_metric(in, in);
  EXPECT_EQ(M.a(), 1.0);
  EXPECT_EQ(M.b(), 2 * p.R - 1);
  for (double t : {1.5, 3.0, p.R0}) EXPECT_EQ(M.profile(1)(t), (*p.f)(t));
  for (double t : {1.5, 3.0, p.R0}) EXPECT_NEAR(M.profile(1)(2 * p.R - t), (*p.f)(t), 1e-15);
  EXPECT_EQ(M.profile(1)(p.R), 1.0);
}

TEST(Glue, CheckAtSmallDelta) {
  const Scenario s = load_scenario("su2-berger");
  const double d = 1e-4;
  const BuiltDiscProfile p = build_disc_profile(d, 1.0, s.C);
  const GlueInput in{p, s.decomposition};
  SamplingPlan plan;
  plan.tCount = 48;
  plan.pairsPerT = 32;
  const GlueReport g = glue_check(in, in, s.context(4, 42), plan, s.kappa, s.name);
  EXPECT_EQ(g.boundaryMismatch, 0.0);
  EXPECT_GE(g.report.minSec, -d * (1 + 1e-6));
  EXPECT_NEAR(g.certifiedMinSec, -d, 1e-12 * d);
  ASSERT_TRUE(g.report.minRicciBound.has_value());
  EXPECT_GE(*g.report.minRicciBound, -1e-10);
  double kmax = 0;
  for (double k : s.kappa) kmax = std::max(kmax, k);
  EXPECT_NEAR(g.diameter, 4 * p.R + std::numbers::pi * kmax, 1e-12);
  EXPECT_EQ(g.product, g.certifiedMinSec * g.diameter * g.diameter);
}

TEST(Glue, BoundaryMismatchThrows) {
  const Scenario s = load_scenario("su2-berger");
  // A profile that ends below 1.
  BuiltDiscProfile p = build_disc_profile(1e-4, 1.0, 9);
  BuiltDiscProfile q = p;
  q.f = single(form::Constant{0.5}, 1.0, p.R);
  EXPECT_THROW(glue_check({p, s.decomposition}, {q, s.decomposition}, s.context(2, 42), SamplingPlan{},
                          s.kappa),
               std::runtime_error);
}
