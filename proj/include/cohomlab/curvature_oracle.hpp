#pragma once

#include <vector>

#include "cohomlab/cohom1_metric.hpp"
#include "cohomlab/lie_core.hpp"

namespace cohomlab {

/// Left-invariant metric <u, v> = u^T P v at the identity.
class LeftInvariantMetric {
 public:
  LeftInvariantMetric(AlgebraPtr algebra, Mat P);

  const LieAlgebra& algebra() const { return *algebra_; }
  const Mat& P() const { return P_; }
  double inner(const Vec& u, const Vec& v) const { return u.dot(P_ * v); }
  Vec solve(const Vec& b) const { return ldlt_.solve(b); }

 private:
  AlgebraPtr algebra_;
  Mat P_;
  Eigen::LDLT<Mat> ldlt_;
};

Vec koszul_connection(const LeftInvariantMetric& m, const Vec& x, const Vec& y);

/// R(x, y; y, x) for left-invariant fields.
double left_invariant_curvature(const LeftInvariantMetric& m, const Vec& x, const Vec& y);

/// R(x, y; y, x) on G/H for the metric Q(phi ., .) on m. phi has one entry
/// per block; entry 0 (h) is ignored.
double homogeneous_curvature(const BlockDecomposition& d, const std::vector<double>& phi,
                             const Vec& x, const Vec& y);

/// Levi-Civita connection of the normal-coordinate identification m = T_{eH} G/H
/// on invariant fields: Lambda(x) y = 1/2 [x, y]_m + U(x, y).
Vec nomizu_map(const BlockDecomposition& d, const Vec& phiDiag, const Vec& x, const Vec& y);

/// Curvature of dt^2 + g_phi(t) from the slice curvature, the Gauss equation,
/// the Codazzi term and the radial Riccati term.
double gauss_codazzi_curvature(const Cohom1Metric& M, double t, double c, const Vec& x,
                               const Vec& y);

}  // namespace cohomlab
