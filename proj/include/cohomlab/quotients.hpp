#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cohomlab/cohom1.hpp"
#include "cohomlab/lie_core.hpp"
#include "cohomlab/profile_builder.hpp"

namespace cohomlab {

/// Group point g with Ad_g = adjoint_exp(a) * adjoint_exp(b).
struct GroupPoint {
  Vec a, b;
};

/// Either a biquotient G//H, or L\G/H with L one-sided and H given by the
/// basis indices hIndices. The one-sided case is handled as the biquotient of
/// L x H acting by (l, h).g = l g h^{-1}.
class QuotientContext {
 public:
  static QuotientContext biquotient(BiquotientSpec spec, std::vector<GroupPoint> points);
  static QuotientContext one_sided(AlgebraPtr algebra, Mat l, std::vector<int> hIndices,
                                   std::vector<GroupPoint> points);

  const LieAlgebra& algebra() const { return *spec_.algebra; }
  const BiquotientSpec& spec() const { return spec_; }
  bool oneSided() const { return oneSided_; }
  const Mat& l() const { return l_; }
  const std::vector<int>& hIndices() const { return h_; }
  const std::vector<GroupPoint>& samplePoints() const { return points_; }
  /// Dimension the vertical space has at a free point.
  int expectedVerticalDim() const;

  Mat adjoint(std::size_t point) const;
  /// Same context with H replaced by another right subalgebra.
  QuotientContext with_right(std::vector<int> hIndices) const;

 private:
  QuotientContext(BiquotientSpec spec) : spec_(std::move(spec)) {}
  void setPoints(std::vector<GroupPoint> points);
  BiquotientSpec spec_;
  bool oneSided_ = false;
  Mat l_;
  std::vector<int> h_;
  std::vector<GroupPoint> points_;
  std::vector<Mat> ad_;
};

/// Seeded points with coefficients uniform in [-2, 2].
std::vector<GroupPoint> sample_group_points(int dim, int count, std::uint64_t seed);

struct VerticalSpace {
  Mat basis;  ///< orthonormal columns
  bool free;
};

/// V_g = span{Ad_{g^-1} u_a - w_a}; in the one-sided case pr_m(Ad_{g^-1} l).
VerticalSpace vertical_space(const QuotientContext& ctx, std::size_t point);

/// Orthonormal basis of the Q-complement of the full vertical space in g.
Mat horizontal_space(const QuotientContext& ctx, std::size_t point);

/// F_g = {v in H_g : [v, H_g] = 0}, as orthonormal columns.
Mat flat_directions(const QuotientContext& ctx, std::size_t point);

/// dim(z(g) cap H_g) at one point.
int torus_rank_at(const QuotientContext& ctx, std::size_t point);

/// Common value over all sample points; throws if it varies.
int torus_rank(const QuotientContext& ctx);

/// Fraction of sample points with F_g = 0.
double flat_free_rate(const QuotientContext& ctx);

struct RicciBound {
  double bound;      ///< lower-bound chain with (f f')^2
  double printed;    ///< same chain with (f' f'')^2
  double corrected;  ///< chain with the frame normalization carried through: f'^2
  double upstairs;   ///< R(d_t, x; x, d_t) + sum_i R(c d_t + x, y^i; y^i, c d_t + x)
  int frameSize;
};

/// Horizontal directions at a slice: y1 + f^2 y2 with y1 + y2 in H^Q_g.
/// Returns a g-orthonormal frame as columns.
Mat slice_horizontal_frame(const Cohom1Metric& M, const QuotientContext& ctx, double t,
                           std::size_t point);

/// dim N = 1 + dim m - dim l for the one-sided context.
int quotient_dimension(const Cohom1Metric& M, const QuotientContext& ctx);

/// Ricci lower bound for the direction c d_t + x, x horizontal. Throws if
/// -f f'' >= C f'^2 fails at t with C = max(dim N, 9).
RicciBound quotient_ricci_bound(const Cohom1Metric& M, const QuotientContext& ctx, double t,
                                std::size_t point, double c, const Vec& x);

struct PositiveWitness {
  double t;
  std::size_t point;
  double minEigenvalue;
};

struct PositiveSearch {
  std::optional<PositiveWitness> witness;
  int pointsTried = 0;
  int flatFreePoints = 0;
  int tWithSlope = 0;
};

/// Looks for (t, g) with F_g = 0 on L\G/K, f'(t) != 0, and a positive definite
/// upstairs Ricci form on the horizontal directions.
PositiveSearch positive_point_search(const Cohom1Metric& M, const QuotientContext& ctx,
                                     const std::vector<double>& tGrid);

/// The context for Sigma = L\G/K, with K = h + m_1 of the metric.
QuotientContext sigma_context(const Cohom1Metric& M, const QuotientContext& ctx);

/// Glues two disc profiles and checks the doubled metric: boundary match,
/// sampled sectional curvature, quotient Ricci bound, diameter and product.
/// Ricci bounds use up to ricciPoints group samples and ricciDirections
/// horizontal directions per (t, point).
GlueReport glue_check(const GlueInput& left, const GlueInput& right, const QuotientContext& ctx,
                      const SamplingPlan& plan, const std::vector<double>& kappa,
                      const std::string& example = "", int ricciPoints = 4,
                      int ricciDirections = 16);

}  // namespace cohomlab
