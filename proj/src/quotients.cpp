#include "cohomlab/quotients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cohomlab/parallel.hpp"

namespace cohomlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Kernel with an absolute singular-value cutoff; inputs here are built from
// orthonormal bases, so the scale is fixed.
Mat kernel_abs(const Mat& M, double tol = 1e-9) {
  const int n = static_cast<int>(M.cols());
  if (n == 0) return Mat(0, 0);
  if (M.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Mat full_vertical_columns(const QuotientContext& ctx, std::size_t point) {
  const BiquotientSpec& s = ctx.spec();
  return ctx.adjoint(point).transpose() * s.u - s.w;
}

int required_C(const Cohom1Metric& M, const QuotientContext& ctx) {
  return std::max(quotient_dimension(M, ctx), 9);
}

bool inequality_holds(const Cohom1Metric& M, int C, double t) {
  return check_inequality(M.profile(1), C, {t}).maxViolation <= 1e-12;
}

void require_matching_h(const Cohom1Metric& M, const QuotientContext& ctx) {
  if (!ctx.oneSided()) throw std::invalid_argument("quotient: one-sided context required");
  std::vector<int> a = M.decomposition().block(0), b = ctx.hIndices();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw DimensionError("quotient: context h differs from the metric's h");
  if (!M.twoBlockNormalized()) throw std::invalid_argument("quotient: two-block metric required");
}

double wedge_q(const Vec& a, const Vec& b) {
  const double ab = a.dot(b);
  return std::max(0.0, a.squaredNorm() * b.squaredNorm() - ab * ab);
}

// Ricci of the upstairs metric restricted to horizontal vectors c d_t + Y alpha.
double upstairs_ricci(const Cohom1Metric& M, double t, const Mat& Y, double c, const Vec& x) {
  double r = curvature_general(M, t, 1.0, Vec::Zero(x.size()), x);
  for (int i = 0; i < Y.cols(); ++i) r += curvature_general(M, t, c, x, Y.col(i));
  return r;
}

}  // namespace

void QuotientContext::setPoints(std::vector<GroupPoint> points) {
  const LieAlgebra& A = *spec_.algebra;
  ad_.clear();
  for (const GroupPoint& p : points) {
    if (p.a.size() != A.dim() || p.b.size() != A.dim())
      throw DimensionError("QuotientContext: sample point dimension");
    Mat ad = adjoint_exp(A, p.a) * adjoint_exp(A, p.b);
    const double orth = (ad.transpose() * ad - Mat::Identity(A.dim(), A.dim())).cwiseAbs().maxCoeff();
    if (orth > 1e-10) throw std::runtime_error("QuotientContext: sample Ad not orthogonal");
    ad_.push_back(std::move(ad));
  }
  points_ = std::move(points);
}

QuotientContext QuotientContext::biquotient(BiquotientSpec spec, std::vector<GroupPoint> points) {
  QuotientContext ctx(std::move(spec));
  ctx.setPoints(std::move(points));
  return ctx;
}

QuotientContext QuotientContext::one_sided(AlgebraPtr algebra, Mat l, std::vector<int> hIndices,
                                           std::vector<GroupPoint> points) {
  const int n = algebra->dim();
  if (l.rows() != n) throw DimensionError("QuotientContext: l has wrong row count");
  const int nl = static_cast<int>(l.cols());
  const int nh = static_cast<int>(hIndices.size());
  Mat u = Mat::Zero(n, nl + nh), w = Mat::Zero(n, nl + nh);
  u.leftCols(nl) = l;
  for (int j = 0; j < nh; ++j) {
    if (hIndices[j] < 0 || hIndices[j] >= n) throw DimensionError("QuotientContext: h index");
    w(hIndices[j], nl + j) = 1.0;
  }
  QuotientContext ctx(BiquotientSpec(std::move(algebra), std::move(u), std::move(w)));
  ctx.oneSided_ = true;
  ctx.l_ = std::move(l);
  ctx.h_ = std::move(hIndices);
  ctx.setPoints(std::move(points));
  return ctx;
}

int QuotientContext::expectedVerticalDim() const {
  return oneSided_ ? static_cast<int>(l_.cols()) : spec_.hdim();
}

Mat QuotientContext::adjoint(std::size_t point) const { return ad_.at(point); }

QuotientContext QuotientContext::with_right(std::vector<int> hIndices) const {
  if (!oneSided_) throw std::invalid_argument("with_right: one-sided context required");
  return one_sided(spec_.algebra, l_, std::move(hIndices), points_);
}

std::vector<GroupPoint> sample_group_points(int dim, int count, std::uint64_t seed) {
  std::vector<GroupPoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    GroupPoint p{Vec(dim), Vec(dim)};
    for (int k = 0; k < dim; ++k) p.a[k] = u(rng);
    for (int k = 0; k < dim; ++k) p.b[k] = u(rng);
    out.push_back(std::move(p));
  }
  return out;
}

VerticalSpace vertical_space(const QuotientContext& ctx, std::size_t point) {
  Mat cols;
  if (ctx.oneSided()) {
    const int n = ctx.algebra().dim();
    Mat proj = Mat::Identity(n, n);
    for (int j : ctx.hIndices()) proj(j, j) = 0;
    cols = proj * ctx.adjoint(point).transpose() * ctx.l();
  } else {
    cols = full_vertical_columns(ctx, point);
  }
  Mat basis = orthonormal_span(cols);
  const bool isFree = basis.cols() == ctx.expectedVerticalDim();
  return {std::move(basis), isFree};
}

Mat horizontal_space(const QuotientContext& ctx, std::size_t point) {
  const Mat V = orthonormal_span(full_vertical_columns(ctx, point));
  const int n = ctx.algebra().dim();
  if (V.cols() == 0) return Mat::Identity(n, n);
  return kernel_abs(V.transpose());
}

Mat flat_directions(const QuotientContext& ctx, std::size_t point) {
  const LieAlgebra& A = ctx.algebra();
  const Mat B = horizontal_space(ctx, point);
  const int n = A.dim(), r = static_cast<int>(B.cols());
  if (r == 0) return Mat(n, 0);
  // alpha -> ([B alpha, b_j])_j, stacked over j.
  Mat map(n * r, r);
  for (int j = 0; j < r; ++j) map.block(j * n, 0, n, r) = -A.ad(B.col(j)) * B;
  const Mat N = kernel_abs(map);
  if (N.cols() == 0) return Mat(n, 0);
  return B * N;
}

int torus_rank_at(const QuotientContext& ctx, std::size_t point) {
  const Mat& Z = ctx.spec().centerBasis;
  if (Z.cols() == 0) return 0;
  const Mat V = orthonormal_span(full_vertical_columns(ctx, point));
  if (V.cols() == 0) return static_cast<int>(Z.cols());
  return static_cast<int>(kernel_abs(V.transpose() * Z).cols());
}

int torus_rank(const QuotientContext& ctx) {
  const std::size_t n = ctx.samplePoints().size();
  if (n == 0) throw std::invalid_argument("torus_rank: no sample points");
  std::vector<int> ranks(n);
  parallel_for(n, [&](std::size_t i) { ranks[i] = torus_rank_at(ctx, i); });
  for (int r : ranks)
    if (r != ranks[0]) throw std::runtime_error("torus_rank: dimension varies across samples");
  return ranks[0];
}

double flat_free_rate(const QuotientContext& ctx) {
  const std::size_t n = ctx.samplePoints().size();
  if (n == 0) return 0;
  std::vector<int> free(n);
  parallel_for(n, [&](std::size_t i) { free[i] = flat_directions(ctx, i).cols() == 0; });
  long count = 0;
  for (int f : free) count += f;
  return static_cast<double>(count) / static_cast<double>(n);
}

Mat slice_horizontal_frame(const Cohom1Metric& M, const QuotientContext& ctx, double t,
                           std::size_t point) {
  const Mat HQ = horizontal_space(ctx, point);
  const BlockJets j = M.jets(t);
  const Vec phi = M.phiDiag(j.phi);
  Mat Z = HQ.array().colwise() / phi.array();
  if (Z.cols() == 0) return Z;
  const Mat G = Z.transpose() * phi.asDiagonal() * Z;
  Eigen::LLT<Mat> llt(G);
  if (llt.info() != Eigen::Success) throw std::runtime_error("slice_horizontal_frame: degenerate frame");
  // Z L^{-T} is g-orthonormal.
  const Mat Lt = llt.matrixL().transpose();
  return Lt.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(Z);
}

int quotient_dimension(const Cohom1Metric& M, const QuotientContext& ctx) {
  if (!ctx.oneSided()) throw std::invalid_argument("quotient_dimension: one-sided context required");
  const BlockDecomposition& d = M.decomposition();
  int dimM = 0;
  for (int i = 1; i < d.numBlocks(); ++i) dimM += static_cast<int>(d.block(i).size());
  return 1 + dimM - static_cast<int>(ctx.l().cols());
}

RicciBound quotient_ricci_bound(const Cohom1Metric& M, const QuotientContext& ctx, double t,
                                std::size_t point, double c, const Vec& x) {
  require_matching_h(M, ctx);
  M.requireInterior(t);
  const int C = required_C(M, ctx);
  if (!inequality_holds(M, C, t))
    throw std::domain_error("quotient_ricci_bound: -ff'' >= C f'^2 fails at t");
  const Mat Y = slice_horizontal_frame(M, ctx, t, point);
  const Vec phi = M.phiDiag(M.jets(t).phi);
  const Vec coeff = Y.transpose() * phi.asDiagonal() * x;
  if ((x - Y * coeff).norm() > 1e-9 * std::max(1.0, x.norm()))
    throw std::invalid_argument("quotient_ricci_bound: x is not horizontal");

  const BlockDecomposition& d = M.decomposition();
  const Jet f = M.profile(1).jet(t);
  const Vec x1 = d.project(x, 1);
  const double nx1 = x1.squaredNorm();
  const int k = static_cast<int>(Y.cols());
  double wedges = 0;
  for (int i = 0; i < k; ++i) wedges += wedge_q(x1, d.project(Y.col(i), 1));
  const double ff = f.v * f.d1;
  RicciBound r;
  r.bound = -f.v * f.d2 * nx1 - ff * ff * wedges + 0.0;  // no -0 in reports
  r.printed = (-f.v * f.d2 - k * std::pow(f.d1 * f.d2, 2)) * nx1;
  r.corrected = (-f.v * f.d2 - k * f.d1 * f.d1) * nx1;
  r.upstairs = upstairs_ricci(M, t, Y, c, x);
  r.frameSize = k;
  return r;
}

QuotientContext sigma_context(const Cohom1Metric& M, const QuotientContext& ctx) {
  const BlockDecomposition& d = M.decomposition();
  std::vector<int> k = d.block(0);
  k.insert(k.end(), d.block(1).begin(), d.block(1).end());
  return ctx.with_right(std::move(k));
}

PositiveSearch positive_point_search(const Cohom1Metric& M, const QuotientContext& ctx,
                                     const std::vector<double>& tGrid) {
  require_matching_h(M, ctx);
  if (M.decomposition().block(1).empty())
    throw std::invalid_argument("positive_point_search: m_1 must be nonzero");
  PositiveSearch out;
  const QuotientContext sigma = sigma_context(M, ctx);
  const int C = required_C(M, ctx);

  std::vector<double> ts;
  for (double t : tGrid) {
    const Jet f = M.profile(1).jet(t);
    if (std::abs(f.d1) > 1e-12 && inequality_holds(M, C, t)) ts.push_back(t);
  }
  out.tWithSlope = static_cast<int>(ts.size());

  for (std::size_t p = 0; p < ctx.samplePoints().size(); ++p) {
    ++out.pointsTried;
    if (flat_directions(sigma, p).cols() != 0) continue;
    ++out.flatFreePoints;
    for (double t : ts) {
      const Mat Y = slice_horizontal_frame(M, ctx, t, p);
      const int k = static_cast<int>(Y.cols());
      const int n = k + 1;
      // Quadratic form in (c, alpha) by polarization.
      auto q = [&](const Vec& z) { return upstairs_ricci(M, t, Y, z[0], Y * z.tail(k)); };
      Mat B(n, n);
      Vec diag(n);
      for (int i = 0; i < n; ++i) diag[i] = q(Vec::Unit(n, i));
      for (int i = 0; i < n; ++i) {
        B(i, i) = diag[i];
        for (int j = i + 1; j < n; ++j) {
          B(i, j) = B(j, i) = 0.5 * (q(Vec::Unit(n, i) + Vec::Unit(n, j)) - diag[i] - diag[j]);
        }
      }
      const double lmin = Eigen::SelfAdjointEigenSolver<Mat>(B).eigenvalues().minCoeff();
      if (lmin > 1e-12) {
        out.witness = PositiveWitness{t, p, lmin};
        return out;
      }
    }
  }
  return out;
}

GlueReport glue_check(const GlueInput& left, const GlueInput& right, const QuotientContext& ctx,
                      const SamplingPlan& plan, const std::vector<double>& kappa,
                      const std::string& example, int ricciPoints, int ricciDirections) {
  const double fl = (*left.profile.f)(left.profile.R);
  const double fr = (*right.profile.f)(right.profile.R);
  const double mismatch = std::abs(fl * fl - fr * fr);
  if (mismatch > 1e-12) throw std::runtime_error("glue_check: boundary slice metrics differ");
  const Cohom1Metric M = glue_metric(left, right);

  CurvatureReport report = sec_lower_bound_check(M, plan, example);

  const int C = required_C(M, ctx);
  const auto ts = interior_grid(M.a(), M.b(), plan.tCount, plan.endpointMargin);
  const std::size_t np =
      std::min<std::size_t>(ctx.samplePoints().size(), static_cast<std::size_t>(ricciPoints));
  struct Slot {
    double bound = kInf, upstairs = kInf;
    long n = 0;
  };
  std::vector<Slot> slots(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    const double t = ts[i];
    if (!inequality_holds(M, C, t)) return;
    auto rng = stream_rng(plan.seed ^ 0x5bd1e995u, i);
    std::normal_distribution<double> nd;
    for (std::size_t p = 0; p < np; ++p) {
      const Mat Y = slice_horizontal_frame(M, ctx, t, p);
      if (Y.cols() == 0) continue;
      for (int r = 0; r < ricciDirections; ++r) {
        Vec a(Y.cols());
        for (int k = 0; k < a.size(); ++k) a[k] = nd(rng);
        const Vec x = Y * a.normalized();
        for (double c : plan.cValues) {
          const RicciBound b = quotient_ricci_bound(M, ctx, t, p, c, x);
          slots[i].bound = std::min(slots[i].bound, b.bound);
          slots[i].upstairs = std::min(slots[i].upstairs, b.upstairs);
          ++slots[i].n;
        }
      }
    }
  });
  double minBound = kInf, minUp = kInf;
  long nRicci = 0;
  for (const Slot& s : slots) {
    minBound = std::min(minBound, s.bound);
    minUp = std::min(minUp, s.upstairs);
    nRicci += s.n;
  }
  if (nRicci > 0) report.minRicciBound = minBound;

  auto certified = [](const BuiltDiscProfile& p) {
    const Jet j = p.f->jet(p.R0);
    return std::pow(j.d1 / j.v, 2);
  };
  const double certifiedMinSec = -std::max(certified(left.profile), certified(right.profile));
  double kmax = 0;
  for (double k : kappa) kmax = std::max(kmax, k);
  const double diameter = 2 * (left.profile.R + right.profile.R) + std::numbers::pi * kmax;
  const double product = certifiedMinSec * diameter * diameter;
  report.diameter = diameter;
  report.product = product;
  report.extra["certifiedMinSec"] = certifiedMinSec;
  report.extra["boundaryMismatch"] = mismatch;
  report.extra["ricciSamples"] = nRicci;
  report.extra["minUpstairsRicci"] = nRicci > 0 ? nlohmann::json(minUp) : nlohmann::json(nullptr);
  return GlueReport{std::move(report), mismatch, certifiedMinSec, diameter, product};
}

}  // namespace cohomlab
