#include <gtest/gtest.h>

#include "cohomlab/catalog.hpp"
#include "cohomlab/quotients.hpp"
#include "oracles.hpp"

using namespace cohomlab;

namespace {

AlgebraPtr shared(LieAlgebra a) { return std::make_shared<const LieAlgebra>(std::move(a)); }

ProfilePtr equality_profile(const Scenario& s) {
  return make_profile(WarpProfile::single(
      form::PowerOfPoly{form::Polynomial{{0.1, 0.4}, 0.0}, 1.0 / (s.C + 1)}, s.a, s.b));
}

Cohom1Metric equality_metric(const Scenario& s) {
  return Cohom1Metric::two_block(s.decomposition, equality_profile(s), s.a, s.b);
}

const std::vector<std::string> kNames = {"su2-berger",  "so3-sphere",  "so4-stiefel",
                                         "so5-two-block", "torus2-flat", "son-circle"};

}  // namespace

TEST(Quotients, FlatTorus) {
  const Scenario s = load_scenario("torus2-flat");
  const QuotientContext ctx = s.context(8, 42);
  for (std::size_t p = 0; p < 8; ++p) {
    const VerticalSpace v = vertical_space(ctx, p);
    EXPECT_TRUE(v.free);
    EXPECT_EQ(v.basis.cols(), 1);
    const Mat F = flat_directions(ctx, p);
    ASSERT_EQ(F.cols(), 1);
    EXPECT_NEAR(std::abs(F(1, 0)), 1.0, 1e-12);
  }
  EXPECT_EQ(torus_rank(ctx), 1);
  EXPECT_EQ(flat_free_rate(ctx), 0.0);
}

TEST(Quotients, TrivialSubgroupOfSu2HasNoFlats) {
  const auto A = shared(su2_algebra());
  const QuotientContext ctx =
      QuotientContext::biquotient(BiquotientSpec(A, Mat(3, 0), Mat(3, 0)), sample_group_points(3, 5, 7));
  for (std::size_t p = 0; p < 5; ++p) {
    EXPECT_EQ(horizontal_space(ctx, p).cols(), 3);
    EXPECT_EQ(flat_directions(ctx, p).cols(), 0);
  }
  EXPECT_EQ(torus_rank(ctx), 0);
  EXPECT_EQ(flat_free_rate(ctx), 1.0);
}

TEST(Quotients, CenterCircleRemovesTorus) {
  const auto A = shared(direct_sum(su2_algebra(), abelian_algebra(1), "su(2)+R"));
  const QuotientContext ctx =
      QuotientContext::one_sided(A, Vec::Unit(4, 3), {}, sample_group_points(4, 5, 3));
  EXPECT_EQ(ctx.spec().centerBasis.cols(), 1);
  EXPECT_EQ(torus_rank(ctx), 0);
  for (std::size_t p = 0; p < 5; ++p) EXPECT_EQ(flat_directions(ctx, p).cols(), 0);
}

TEST(Quotients, OneSidedFullSu2) {
  const auto A = shared(su2_algebra());
  const QuotientContext ctx =
      QuotientContext::one_sided(A, Mat::Identity(3, 3), {}, sample_group_points(3, 4, 9));
  EXPECT_EQ(ctx.expectedVerticalDim(), 3);
  for (std::size_t p = 0; p < 4; ++p) {
    const VerticalSpace v = vertical_space(ctx, p);
    EXPECT_EQ(v.basis.cols(), 3);
    EXPECT_TRUE(v.free);
    EXPECT_EQ(horizontal_space(ctx, p).cols(), 0);
    EXPECT_EQ(flat_directions(ctx, p).cols(), 0);
  }
}

TEST(Quotients, VerticalPlusHorizontalIsEverything) {
  for (const auto& name : kNames) {
    const Scenario s = load_scenario(name);
    const QuotientContext ctx = s.context(6, 11);
    const int n = s.algebra->dim();
    for (std::size_t p = 0; p < 6; ++p) {
      const Mat H = horizontal_space(ctx, p);
      const Mat Vfull = ctx.adjoint(p).transpose() * ctx.spec().u - ctx.spec().w;
      const int rankV = oracle::row_reduce(Vfull.transpose()).rank;
      EXPECT_EQ(rankV + H.cols(), n) << name;
      if (H.cols() > 0 && Vfull.cols() > 0) {
        EXPECT_LT((Vfull.transpose() * H).cwiseAbs().maxCoeff(), 1e-12) << name;
        EXPECT_LT((H.transpose() * H - Mat::Identity(H.cols(), H.cols())).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(Quotients, FlatDirectionsMatchOracle) {
  for (const auto& name : kNames) {
    const Scenario s = load_scenario(name);
    const QuotientContext ctx = s.context(6, 5);
    const Cohom1Metric M = s.twoBlockMetric();
    const QuotientContext sigma = sigma_context(M, ctx);
    std::vector<int> k = s.decomposition.block(0);
    k.insert(k.end(), s.decomposition.block(1).begin(), s.decomposition.block(1).end());
    for (std::size_t p = 0; p < 6; ++p) {
      const GroupPoint& g = ctx.samplePoints()[p];
      const Mat ref = oracle::flat_oracle(*s.algebra, oracle::horizontal_oracle(s, g, s.decomposition.block(0)));
      EXPECT_LE(oracle::subspace_distance(flat_directions(ctx, p), ref), 1e-10) << name;
      const Mat refSigma = oracle::flat_oracle(*s.algebra, oracle::horizontal_oracle(s, g, k));
      EXPECT_LE(oracle::subspace_distance(flat_directions(sigma, p), refSigma), 1e-10) << name;
    }
  }
}

TEST(Quotients, TorusRanks) {
  for (const auto& name : kNames) {
    const Scenario s = load_scenario(name);
    const int expected = (name == "torus2-flat" || name == "son-circle") ? 1 : 0;
    EXPECT_EQ(torus_rank(s.context(16, 1)), expected) << name;
    EXPECT_EQ(torus_rank(s.context(16, 2)), expected) << name;
    EXPECT_EQ(s.semisimple, expected == 0) << name;
  }
}

TEST(RicciBound, ConstantWarpGivesZero) {
  const Scenario s = load_scenario("so4-stiefel");
  const auto f = make_profile(WarpProfile::single(form::Constant{0.7}, s.a, s.b));
  const Cohom1Metric M = Cohom1Metric::two_block(s.decomposition, f, s.a, s.b);
  const QuotientContext ctx = s.context(3, 42);
  for (std::size_t p = 0; p < 3; ++p) {
    const Mat Y = slice_horizontal_frame(M, ctx, 1.0, p);
    for (int i = 0; i < Y.cols(); ++i) {
      const RicciBound r = quotient_ricci_bound(M, ctx, 1.0, p, 0.5, Y.col(i));
      EXPECT_EQ(r.bound, 0.0);
      EXPECT_FALSE(std::signbit(r.bound));
    }
  }
}

TEST(RicciBound, DominatedBySlopeTerm) {
  for (const char* name : {"su2-berger", "so4-stiefel", "so5-two-block"}) {
    const Scenario s = load_scenario(name);
    const Cohom1Metric M = equality_metric(s);
    const QuotientContext ctx = s.context(3, 42);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    for (double t : {0.5, 1.2, 2.0})
      for (std::size_t p = 0; p < 3; ++p) {
        const Mat Y = slice_horizontal_frame(M, ctx, t, p);
        const int k = static_cast<int>(Y.cols());
        ASSERT_LT(k, s.C);
        const Jet f = M.profile(1).jet(t);
        for (int r = 0; r < 20; ++r) {
          Vec a(k);
          for (int i = 0; i < k; ++i) a[i] = nd(rng);
          const Vec x = Y * a;
          const RicciBound b = quotient_ricci_bound(M, ctx, t, p, 1.0, x);
          const double nx1 = s.decomposition.project(x, 1).squaredNorm();
          EXPECT_GE(b.bound, (s.C - k) * f.d1 * f.d1 * nx1 - 1e-12) << name;
          EXPECT_EQ(b.frameSize, k);
        }
      }
  }
}

TEST(RicciBound, StiefelSweep) {
  const Scenario s = load_scenario("so4-stiefel");
  const Cohom1Metric M = equality_metric(s);
  const QuotientContext ctx = s.context(4, 42);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  double worst = 1e300;
  for (int r = 0; r < 1000; ++r) {
    const double t = s.a + (s.b - s.a) * (r + 0.5) / 1000;
    const std::size_t p = r % 4;
    const Mat Y = slice_horizontal_frame(M, ctx, t, p);
    Vec a(Y.cols());
    for (int i = 0; i < a.size(); ++i) a[i] = nd(rng);
    worst = std::min(worst, quotient_ricci_bound(M, ctx, t, p, nd(rng), Y * a.normalized()).bound);
  }
  EXPECT_GE(worst, -1e-10);
}

TEST(RicciBound, Errors) {
  const Scenario s = load_scenario("so4-stiefel");
  const QuotientContext ctx = s.context(2, 42);
  const Cohom1Metric M = equality_metric(s);
  // e01 is in h, hence vertical.
  EXPECT_THROW(quotient_ricci_bound(M, ctx, 1.0, 0, 0.0, Vec::Unit(6, 0)), std::invalid_argument);
  // The demo warp violates the inequality somewhere on its interval.
  const Cohom1Metric D = s.twoBlockMetric();
  bool threw = false;
  for (double t : interior_grid(s.a, s.b, 40)) {
    const Mat Y = slice_horizontal_frame(D, ctx, t, 0);
    try {
      quotient_ricci_bound(D, ctx, t, 0, 0.0, Y.col(0));
    } catch (const std::domain_error&) {
      threw = true;
    }
  }
  EXPECT_TRUE(threw);
  const QuotientContext bi = QuotientContext::biquotient(ctx.spec(), ctx.samplePoints());
  EXPECT_THROW(quotient_ricci_bound(M, bi, 1.0, 0, 0.0, Vec::Unit(6, 1)), std::invalid_argument);
  EXPECT_THROW(quotient_ricci_bound(M, ctx.with_right({}), 1.0, 0, 0.0, Vec::Unit(6, 1)), DimensionError);
  EXPECT_THROW(quotient_ricci_bound(s.demoMetric(), ctx, 1.0, 0, 0.0, Vec::Unit(6, 1)),
               std::invalid_argument);
}

TEST(PositiveSearch, SemisimpleHasWitness) {
  for (const char* name : {"su2-berger", "so4-stiefel"}) {
    const Scenario s = load_scenario(name);
    const PositiveSearch r = positive_point_search(equality_metric(s), s.context(4, 42),
                                                   interior_grid(s.a, s.b, 8));
    ASSERT_TRUE(r.witness.has_value()) << name;
    EXPECT_GT(r.witness->minEigenvalue, 0.0);
    EXPECT_GT(r.flatFreePoints, 0);
  }
}

TEST(PositiveSearch, ConstantWarpHasNoSlope) {
  const Scenario s = load_scenario("su2-berger");
  const auto f = make_profile(WarpProfile::single(form::Constant{0.7}, s.a, s.b));
  const PositiveSearch r = positive_point_search(Cohom1Metric::two_block(s.decomposition, f, s.a, s.b),
                                                 s.context(4, 42), interior_grid(s.a, s.b, 8));
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_EQ(r.tWithSlope, 0);
}

TEST(PositiveSearch, FlatTorusHasNoWitness) {
  const Scenario s = load_scenario("torus2-flat");
  const PositiveSearch r = positive_point_search(equality_metric(s), s.context(4, 42),
                                                 interior_grid(s.a, s.b, 8));
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_EQ(r.flatFreePoints, 0);
  EXPECT_EQ(r.pointsTried, 4);
}
