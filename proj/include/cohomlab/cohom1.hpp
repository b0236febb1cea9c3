#pragma once

#include <string>

#include "cohomlab/cohom1_metric.hpp"
#include "cohomlab/report.hpp"

namespace cohomlab {

/// R(c d_t + x, y; y, c d_t + x) from the general diagonal formula.
double curvature_general(const Cohom1Metric& M, double t, double c, const Vec& x, const Vec& y);

/// Same quantity from the two-block expansion (f_2 == 1).
double curvature_two_block(const Cohom1Metric& M, double t, double c, const Vec& x,
                           const Vec& y);

struct AbcCoefficients {
  double A = 0, B = 0, C = 0;
  double at(double c) const { return A + B * c + C * c * c; }
  /// Strict positivity of the quadratic in c for a nondegenerate plane.
  bool positive() const { return A > 0 && C > 0 && A * C - 0.25 * B * B > 0; }
};

AbcCoefficients abc_decompose(const Cohom1Metric& M, double t, const Vec& x, const Vec& y);

/// Sectional curvature normalized by the plane area in g.
double sectional(const Cohom1Metric& M, double t, double c, const Vec& x, const Vec& y,
                 double numerator);

/// 1/4 f^2 (1 - 3/4 f^2) - 1/16 f^4 (3 - 2 f^2)^2 and its factored form.
double discriminant_expanded(double f);
double discriminant_factored(double f);

/// Samples the two-block curvature against the lower bound -(ff')^2 |x1 ^ y1|^2
/// wherever -ff'' >= 9 f'^2. If histogramPath is nonempty, a CSV of the slack
/// distribution is written there.
CurvatureReport sec_lower_bound_check(const Cohom1Metric& M, const SamplingPlan& plan,
                                      const std::string& example = "",
                                      const std::string& histogramPath = "");

struct EqualityCase {
  double curvature = 0;
  bool curvatureZero = false;
  bool conditionsHold = false;
  bool consistent() const { return curvatureZero == conditionsHold; }
};

/// Zero set of R(c d_t + x2, y; y, c d_t + x2) against the conditions
/// c y1 = 0 and [x2, y2] + f^2 [x2, y1] = 0.
EqualityCase equality_case_check(const Cohom1Metric& M, double t, const Vec& x2, const Vec& y,
                                 double c = 0.0, double tol = 1e-12);

}  // namespace cohomlab
