#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cohomlab/catalog.hpp"
#include "cohomlab/curvature_oracle.hpp"
#include "oracles.hpp"

using namespace cohomlab;

namespace {

AlgebraPtr shared(LieAlgebra a) { return std::make_shared<const LieAlgebra>(std::move(a)); }

Vec gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

Vec on_support(std::mt19937_64& rng, int n, const std::vector<int>& support) {
  std::normal_distribution<double> nd;
  Vec v = Vec::Zero(n);
  for (int i : support) v[i] = nd(rng);
  return v;
}

Mat random_spd(std::mt19937_64& rng, int n) {
  Mat B(n, n);
  for (int i = 0; i < n; ++i) B.row(i) = gaussian(rng, n).transpose();
  return B * B.transpose() / n + 0.5 * Mat::Identity(n, n);
}

double wedge(const Vec& x, const Vec& y) {
  return x.squaredNorm() * y.squaredNorm() - std::pow(x.dot(y), 2);
}

}  // namespace

TEST(Koszul, BiinvariantIsHalfBracket) {
  auto A = shared(su2_algebra());
  LeftInvariantMetric m(A, Mat::Identity(3, 3));
  std::mt19937_64 rng(1);
  for (int s = 0; s < 20; ++s) {
    const Vec x = gaussian(rng, 3), y = gaussian(rng, 3);
    EXPECT_LT((koszul_connection(m, x, y) - 0.5 * A->bracket(x, y)).norm(), 1e-14);
  }
}

TEST(Koszul, AbelianIsZero) {
  auto A = shared(abelian_algebra(3));
  LeftInvariantMetric m(A, Vec(Eigen::Vector3d(1, 2, 3)).asDiagonal());
  EXPECT_EQ(koszul_connection(m, A->basis(0), A->basis(1)), Vec::Zero(3));
}

TEST(Koszul, BergerMatchesChartChristoffel) {
  auto A = shared(su2_algebra());
  const double eps = 0.4;
  Mat P = Mat::Identity(3, 3);
  P(0, 0) = eps * eps;
  LeftInvariantMetric m(A, P);
  const auto chart = oracle::left_invariant_chart(*A, P);
  std::mt19937_64 rng(2);
  for (int s = 0; s < 10; ++s) {
    const Vec x = gaussian(rng, 3), y = gaussian(rng, 3);
    // Left-invariant y is D(u)^{-1} y in the chart, whose derivative along x is [x, y] / 2.
    const Vec fd = 0.5 * A->bracket(x, y) + oracle::fd_christoffel(chart, Vec::Zero(3), x, y);
    EXPECT_LT((koszul_connection(m, x, y) - fd).norm(), 1e-5 * (1 + fd.norm()));
  }
}

TEST(Koszul, MetricCompatible) {
  auto A = shared(so_algebra(4));
  std::mt19937_64 rng(3);
  LeftInvariantMetric m(A, random_spd(rng, 6));
  for (int s = 0; s < 20; ++s) {
    const Vec x = gaussian(rng, 6), y = gaussian(rng, 6), z = gaussian(rng, 6);
    const double v = m.inner(koszul_connection(m, x, y), z) + m.inner(y, koszul_connection(m, x, z));
    EXPECT_NEAR(v, 0.0, 1e-12);
  }
}

TEST(LeftInvariantCurvature, Biinvariant) {
  for (const LieAlgebra& g : {su2_algebra(), so_algebra(4), so_algebra(5)}) {
    auto A = shared(g);
    const int n = A->dim();
    LeftInvariantMetric m(A, Mat::Identity(n, n));
    std::mt19937_64 rng(4);
    for (int s = 0; s < 100; ++s) {
      const Vec x = gaussian(rng, n), y = gaussian(rng, n);
      EXPECT_NEAR(left_invariant_curvature(m, x, y), 0.25 * A->bracket(x, y).squaredNorm(), 1e-12);
    }
    const Vec x = gaussian(rng, n);
    EXPECT_NEAR(left_invariant_curvature(m, x, x), 0.0, 1e-14);
  }
  auto A = shared(su2_algebra());
  LeftInvariantMetric m(A, Mat::Identity(3, 3));
  EXPECT_NEAR(left_invariant_curvature(m, A->basis(1), A->basis(2)), 0.25, 1e-15);
}

TEST(LeftInvariantCurvature, MatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  Mat berger = Mat::Identity(3, 3);
  berger(0, 0) = 0.16;
  for (int n : {3, 4}) {
    auto A = shared(n == 3 ? su2_algebra() : so_algebra(4));
    const int d = A->dim();
    const Mat P = n == 3 ? berger : random_spd(rng, d);
    LeftInvariantMetric m(A, P);
    const auto chart = oracle::left_invariant_chart(*A, P);
    for (int s = 0; s < 8; ++s) {
      const Vec x = gaussian(rng, d), y = gaussian(rng, d);
      const double exact = left_invariant_curvature(m, x, y);
      const double fd = oracle::fd_sectional_numerator(chart, Vec::Zero(d), x, y);
      EXPECT_NEAR(exact, fd, 1e-5 * (1 + std::abs(fd))) << "dim " << d;
    }
  }
}

TEST(LeftInvariantCurvature, Symmetric) {
  std::mt19937_64 rng(6);
  auto A = shared(so_algebra(4));
  LeftInvariantMetric m(A, random_spd(rng, 6));
  for (int s = 0; s < 20; ++s) {
    const Vec x = gaussian(rng, 6), y = gaussian(rng, 6);
    EXPECT_NEAR(left_invariant_curvature(m, x, y), left_invariant_curvature(m, y, x), 1e-12);
  }
}

TEST(HomogeneousCurvature, RoundTwoSphere) {
  auto A = shared(so_algebra(3));
  BlockDecomposition d(A, {{0}, {1, 2}});
  std::mt19937_64 rng(7);
  for (int s = 0; s < 20; ++s) {
    const Vec x = on_support(rng, 3, {1, 2}), y = on_support(rng, 3, {1, 2});
    EXPECT_NEAR(homogeneous_curvature(d, {1.0, 1.0}, x, y), wedge(x, y), 1e-12);
    EXPECT_NEAR(homogeneous_curvature(d, {1.0, 1.0}, x, 2.5 * x), 0.0, 1e-14);
  }
}

TEST(HomogeneousCurvature, ThreeSphereQuarter) {
  auto A = shared(su2_algebra());
  BlockDecomposition d(A, {{}, {0, 1, 2}});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      EXPECT_NEAR(homogeneous_curvature(d, {1.0, 1.0}, A->basis(i), A->basis(j)), 0.25, 1e-15);
    }
}

TEST(HomogeneousCurvature, RejectsHComponent) {
  auto A = shared(so_algebra(3));
  BlockDecomposition d(A, {{0}, {1, 2}});
  EXPECT_THROW(homogeneous_curvature(d, {1.0, 1.0}, A->basis(0), A->basis(1)), std::invalid_argument);
}

TEST(HomogeneousCurvature, MatchesFiniteDifferencesOnQuotients) {
  std::mt19937_64 rng(8);
  for (const char* name : {"so4-stiefel", "so5-two-block", "su2-berger", "so3-sphere"}) {
    const Scenario s = load_scenario(name);
    const BlockDecomposition& d = s.decomposition;
    std::vector<double> phi{1.0};
    for (int b = 1; b < d.numBlocks(); ++b) phi.push_back(0.3 + 0.6 * b);
    Vec diag = Vec::Ones(d.dim());
    for (int b = 1; b < d.numBlocks(); ++b)
      for (int j : d.block(b)) diag[j] = phi[b];
    const auto chart = oracle::homogeneous_chart(d, diag);
    const auto m = oracle::m_indices(d);
    for (int k = 0; k < 6; ++k) {
      const Vec x = on_support(rng, d.dim(), m), y = on_support(rng, d.dim(), m);
      const double exact = homogeneous_curvature(d, phi, x, y);
      const double fd = oracle::fd_sectional_numerator(chart, Vec::Zero(static_cast<int>(m.size())),
                                                       oracle::to_m_coords(d, x),
                                                       oracle::to_m_coords(d, y));
      EXPECT_NEAR(exact, fd, 1e-5 * (1 + std::abs(fd))) << name;
    }
  }
}

TEST(HomogeneousCurvature, PolarizationIsQuadratic) {
  const Scenario s = load_scenario("so5-two-block");
  const auto m = oracle::m_indices(s.decomposition);
  const std::vector<double> phi{1.0, 0.5, 1.3};
  std::mt19937_64 rng(9);
  const int n = s.algebra->dim();
  for (int k = 0; k < 20; ++k) {
    const Vec x = on_support(rng, n, m), y = on_support(rng, n, m), z = on_support(rng, n, m);
    auto R = [&](const Vec& a, const Vec& b) { return homogeneous_curvature(s.decomposition, phi, a, b); };
    const double lhs = R(x, y + z) + R(x, y - z);
    const double rhs = 2 * R(x, y) + 2 * R(x, z);
    EXPECT_NEAR(lhs, rhs, 1e-10 * (1 + std::abs(rhs)));
    EXPECT_NEAR(R(x, y), R(y, x), 1e-12 * (1 + std::abs(R(x, y))));
  }
}

TEST(NomizuMap, StructuralProperties) {
  const Scenario s = load_scenario("so4-stiefel");
  const BlockDecomposition& d = s.decomposition;
  const auto m = oracle::m_indices(d);
  Vec diag = Vec::Ones(d.dim());
  for (int j : d.block(1)) diag[j] = 0.4;
  for (int j : d.block(2)) diag[j] = 1.7;
  std::mt19937_64 rng(10);
  const int n = d.dim();
  for (int k = 0; k < 20; ++k) {
    const Vec x = on_support(rng, n, m), y = on_support(rng, n, m), z = on_support(rng, n, m);
    const Vec lxy = nomizu_map(d, diag, x, y), lyx = nomizu_map(d, diag, y, x);
    // Antisymmetric part is half the m-bracket; the symmetric part is U.
    EXPECT_LT((0.5 * (lxy - lyx) - 0.5 * d.projectM(s.algebra->bracket(x, y))).norm(), 1e-12);
    // Lambda(x) is skew for g_phi.
    const double skew = y.dot(diag.asDiagonal() * nomizu_map(d, diag, x, z)) +
                        z.dot(diag.asDiagonal() * nomizu_map(d, diag, x, y));
    EXPECT_NEAR(skew, 0.0, 1e-12);
  }
}

TEST(GaussCodazzi, ProductMetricMixedPlanesFlat) {
  const Scenario s = load_scenario("so4-stiefel");
  auto one = make_profile(WarpProfile::single(form::Constant{1.0}, 0.0, 1.0));
  auto half = make_profile(WarpProfile::single(form::Constant{0.5}, 0.0, 1.0));
  Cohom1Metric M(s.decomposition, 0.0, 1.0, {half, one});
  const auto m = oracle::m_indices(s.decomposition);
  std::mt19937_64 rng(11);
  const Vec y = on_support(rng, 6, m);
  EXPECT_NEAR(gauss_codazzi_curvature(M, 0.5, 1.0, Vec::Zero(6), y), 0.0, 1e-14);
  EXPECT_NEAR(gauss_codazzi_curvature(M, 0.5, 0.0, y, y), 0.0, 1e-14);
}

TEST(GaussCodazzi, WarpedRoundSphere) {
  const Scenario s = load_scenario("so3-sphere");
  auto f = make_profile(WarpProfile::single(form::Sine{0.3, 1.1, 0.2, 0.9}, 0.0, 2.0));
  Cohom1Metric M(s.decomposition, 0.0, 2.0, {f, f});
  std::mt19937_64 rng(12);
  for (double t : {0.3, 1.0, 1.7}) {
    const Vec y = on_support(rng, 3, {1, 2});
    const Jet j = f->jet(t);
    const double expected = -j.v * j.d2 * y.squaredNorm();
    EXPECT_NEAR(gauss_codazzi_curvature(M, t, 1.0, Vec::Zero(3), y), expected, 1e-12);
  }
}

TEST(GaussCodazzi, MatchesChartOracle) {
  std::mt19937_64 rng(13);
  for (const char* name : {"su2-berger", "so4-stiefel"}) {
    const Scenario s = load_scenario(name);
    const Cohom1Metric M = s.demoMetric();
    const auto chart = oracle::cohom1_chart(M);
    const auto m = oracle::m_indices(s.decomposition);
    const int k = static_cast<int>(m.size());
    std::uniform_real_distribution<double> ut(0.4, 2.0), uc(-2, 2);
    for (int i = 0; i < 6; ++i) {
      const double t = ut(rng), c = uc(rng);
      const Vec x = on_support(rng, s.algebra->dim(), m), y = on_support(rng, s.algebra->dim(), m);
      Vec u(k + 1), v(k + 1);
      u << c, oracle::to_m_coords(s.decomposition, x);
      v << 0, oracle::to_m_coords(s.decomposition, y);
      Vec at = Vec::Zero(k + 1);
      at[0] = t;
      const double fd = oracle::fd_sectional_numerator(chart, at, u, v);
      const double exact = gauss_codazzi_curvature(M, t, c, x, y);
      EXPECT_NEAR(exact, fd, 1e-4 * (1 + std::abs(fd))) << name;
    }
  }
}
