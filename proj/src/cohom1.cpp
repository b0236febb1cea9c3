#include "cohomlab/cohom1.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "cohomlab/curvature_oracle.hpp"
#include "cohomlab/parallel.hpp"

namespace cohomlab {

namespace {

bool is_unit_constant(const WarpProfile& p) {
  for (const auto& piece : p.pieces()) {
    const auto* c = std::get_if<form::Constant>(&piece.form);
    if (!c || c->value != 1.0) return false;
  }
  return true;
}

double max_on_grid(const WarpProfile& p, double a, double b) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : interior_grid(a, b, 257)) m = std::max(m, p(t));
  return m;
}

}  // namespace

Cohom1Metric::Cohom1Metric(BlockDecomposition decomposition, double a, double b,
                           std::vector<ProfilePtr> profiles)
    : decomposition_(std::move(decomposition)), a_(a), b_(b), profiles_(std::move(profiles)) {
  if (!(a_ < b_)) throw std::invalid_argument("Cohom1Metric: need a < b");
  if (static_cast<int>(profiles_.size()) != decomposition_.numBlocks() - 1)
    throw DimensionError("Cohom1Metric: one profile per m-block expected");
  for (const auto& p : profiles_) {
    if (!p) throw std::invalid_argument("Cohom1Metric: null profile");
    const double slack = 1e-12 * std::max(1.0, b_ - a_);
    if (p->lo() > a_ + slack || p->hi() < b_ - slack)
      throw std::invalid_argument("Cohom1Metric: profile domain does not cover the interval");
    for (double t : interior_grid(a_, b_, 257))
      if (!((*p)(t) > 0)) throw std::invalid_argument("Cohom1Metric: profile not positive");
  }
  twoBlock_ = decomposition_.numBlocks() == 3 && is_unit_constant(*profiles_[1]) &&
              max_on_grid(*profiles_[0], a_, b_) <= 1.0 + 1e-12;
}

Cohom1Metric Cohom1Metric::two_block(BlockDecomposition decomposition, ProfilePtr f, double a,
                                     double b) {
  if (decomposition.numBlocks() != 3)
    throw std::invalid_argument("two_block: decomposition must have blocks h, m1, m2");
  if (max_on_grid(*f, a, b) > 1.0 + 1e-12)
    throw std::invalid_argument("two_block: f must satisfy f <= 1");
  auto one = make_profile(WarpProfile::single(form::Constant{1.0}, a, b));
  return Cohom1Metric(std::move(decomposition), a, b, {std::move(f), one});
}

BlockJets Cohom1Metric::jets(double t) const {
  const int k = decomposition_.numBlocks();
  BlockJets J{std::vector<double>(k, 1.0), std::vector<double>(k, 0.0),
              std::vector<double>(k, 0.0)};
  for (int i = 1; i < k; ++i) {
    const Jet f = profiles_[i - 1]->jet(t);
    J.phi[i] = f.v * f.v;
    J.phidot[i] = 2 * f.v * f.d1;
    J.phiddot[i] = 2 * f.d1 * f.d1 + 2 * f.v * f.d2;
  }
  return J;
}

Vec Cohom1Metric::phiDiag(const std::vector<double>& perBlock) const {
  Vec w = Vec::Ones(decomposition_.dim());
  for (int i = 1; i < decomposition_.numBlocks(); ++i)
    for (int j : decomposition_.block(i)) w[j] = perBlock[i];
  return w;
}

double Cohom1Metric::inner(double t, const Vec& u, const Vec& v) const {
  const Vec w = phiDiag(jets(t).phi);
  return u.dot(w.cwiseProduct(v));
}

double Cohom1Metric::planeArea(double t, double c, const Vec& x, const Vec& y) const {
  const Vec w = phiDiag(jets(t).phi);
  const double xx = c * c + x.dot(w.cwiseProduct(x));
  const double yy = y.dot(w.cwiseProduct(y));
  const double xy = x.dot(w.cwiseProduct(y));
  return xx * yy - xy * xy;
}

void Cohom1Metric::requireInterior(double t) const {
  if (!(t > a_ && t < b_))
    throw std::domain_error("t = " + exact_decimal(t) + " is not interior to (" +
                            exact_decimal(a_) + ", " + exact_decimal(b_) + ")");
}

namespace {

void require_in_m(const BlockDecomposition& d, const Vec& x) {
  if (x.size() != d.dim()) throw DimensionError("curvature: vector length");
  if (d.offMNorm(x) > 1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("curvature: vector has an h-component");
}

}  // namespace

double curvature_general(const Cohom1Metric& M, double t, double c, const Vec& x,
                         const Vec& y) {
  M.requireInterior(t);
  const BlockDecomposition& d = M.decomposition();
  require_in_m(d, x);
  require_in_m(d, y);
  const LieAlgebra& A = d.algebra();
  const BlockJets J = M.jets(t);
  const Vec w = M.phiDiag(J.phi);
  const Vec wd = d.projectM(M.phiDiag(J.phidot));
  const Vec wdd = d.projectM(M.phiDiag(J.phiddot));

  double r = homogeneous_curvature(d, J.phi, x, y);

  const double dxx = x.dot(wd.cwiseProduct(x));
  const double dyy = y.dot(wd.cwiseProduct(y));
  const double dxy = x.dot(wd.cwiseProduct(y));
  r -= 0.25 * (dxx * dyy - dxy * dxy);

  auto pi_plus = [&](const Vec& u, const Vec& v) -> Vec {
    return 0.5 * (A.bracket(u, w.cwiseProduct(v)) + A.bracket(v, w.cwiseProduct(u)));
  };
  const Vec ratio = wd.cwiseQuotient(w);
  const double linear = 1.5 * wd.cwiseProduct(A.bracket(x, y)).dot(y) +
                        ratio.cwiseProduct(y).dot(d.projectM(pi_plus(x, y))) -
                        ratio.cwiseProduct(x).dot(d.projectM(pi_plus(y, y)));
  r += c * linear;

  const Vec rad = 2.0 * wdd - wd.cwiseProduct(ratio);
  r -= 0.25 * c * c * y.dot(rad.cwiseProduct(y));
  return r;
}

double curvature_two_block(const Cohom1Metric& M, double t, double c, const Vec& x,
                           const Vec& y) {
  if (!M.twoBlockNormalized())
    throw std::invalid_argument("curvature_two_block: metric is not two-block normalized");
  M.requireInterior(t);
  const BlockDecomposition& d = M.decomposition();
  require_in_m(d, x);
  require_in_m(d, y);
  const LieAlgebra& A = d.algebra();
  const Jet F = M.profile(1).jet(t);
  const double f = F.v, f2 = f * f, fp = F.d1, fpp = F.d2;

  const Vec x1 = d.project(x, 1), x2 = d.project(x, 2);
  const Vec y1 = d.project(y, 1), y2 = d.project(y, 2);
  const Vec b22 = A.bracket(x2, y2);
  const Vec b11 = A.bracket(x1, y1);

  double r = 0.75 * f2 * d.projectH(A.bracket(x, y)).squaredNorm();
  r += 0.25 * (d.project(b22, 2) + f2 * (A.bracket(x1, y2) + A.bracket(x2, y1))).squaredNorm();
  r += 0.25 * f2 * b11.squaredNorm();
  r += 0.5 * f2 * (3 - 2 * f2) * b11.dot(b22);
  r += (1 - 0.75 * f2) * d.projectPrefix(b22, 1).squaredNorm();
  r += 3 * c * f * fp * b22.dot(y1);
  r -= c * c * f * fpp * y1.squaredNorm();
  const double wedge = x1.squaredNorm() * y1.squaredNorm() - std::pow(x1.dot(y1), 2);
  r -= (f * fp) * (f * fp) * wedge;
  return r;
}

AbcCoefficients abc_decompose(const Cohom1Metric& M, double t, const Vec& x, const Vec& y) {
  const double r0 = curvature_general(M, t, 0.0, x, y);
  const double rp = curvature_general(M, t, 1.0, x, y);
  const double rm = curvature_general(M, t, -1.0, x, y);
  return {r0, 0.5 * (rp - rm), 0.5 * (rp + rm) - r0};
}

double sectional(const Cohom1Metric& M, double t, double c, const Vec& x, const Vec& y,
                 double numerator) {
  return numerator / M.planeArea(t, c, x, y);
}

double discriminant_expanded(double f) {
  const double f2 = f * f;
  return 0.25 * f2 * (1 - 0.75 * f2) - f2 * f2 * (3 - 2 * f2) * (3 - 2 * f2) / 16.0;
}

double discriminant_factored(double f) {
  const double g = 1 - f * f;
  return 0.25 * f * f * g * g * g;
}

CurvatureReport sec_lower_bound_check(const Cohom1Metric& M, const SamplingPlan& plan,
                                      const std::string& example,
                                      const std::string& histogramPath) {
  if (!M.twoBlockNormalized())
    throw std::invalid_argument("sec_lower_bound_check: metric is not two-block normalized");
  const BlockDecomposition& d = M.decomposition();
  std::vector<int> support;
  for (int i = 1; i < d.numBlocks(); ++i)
    support.insert(support.end(), d.block(i).begin(), d.block(i).end());
  const auto ts = interior_grid(M.a(), M.b(), plan.tCount, plan.endpointMargin);

  struct Slot {
    long n = 0, checked = 0, violations = 0;
    double minSec = std::numeric_limits<double>::infinity();
    double minSlack = std::numeric_limits<double>::infinity();
    Witness w;
    double disc = 0;
    std::vector<double> slacks;
  };
  std::vector<Slot> slots(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    Slot& s = slots[i];
    const double t = ts[i];
    const Jet F = M.profile(1).jet(t);
    if (!(F.v > 0 && F.v <= 1 + 1e-12))
      throw std::domain_error("sec_lower_bound_check: requires 0 < f <= 1");
    s.disc = std::abs(discriminant_expanded(F.v) - discriminant_factored(F.v));
    const double scale = std::max(F.v * std::abs(F.d2), 9 * F.d1 * F.d1);
    const bool hypothesis = -F.v * F.d2 - 9 * F.d1 * F.d1 >= -1e-12 * std::max(1.0, scale);
    const double ff = F.v * F.d1;
    auto rng = stream_rng(plan.seed, i);
    for (int p = 0; p < plan.pairsPerT; ++p) {
      const Vec x = random_unit(rng, d.dim(), support);
      const Vec y = random_unit(rng, d.dim(), support);
      const Vec x1 = d.project(x, 1), y1 = d.project(y, 1);
      const double wedge = x1.squaredNorm() * y1.squaredNorm() - std::pow(x1.dot(y1), 2);
      for (double c : plan.cValues) {
        const double r = curvature_two_block(M, t, c, x, y);
        ++s.n;
        const double area = M.planeArea(t, c, x, y);
        if (area > 1e-14) {
          const double sec = r / area;
          if (sec < s.minSec) {
            s.minSec = sec;
            s.w = Witness{t, c, x, y};
          }
        }
        if (!hypothesis) continue;
        ++s.checked;
        const double slack = r + ff * ff * wedge;
        s.minSlack = std::min(s.minSlack, slack);
        if (slack < -1e-12) ++s.violations;
        if (!histogramPath.empty()) s.slacks.push_back(slack);
      }
    }
  });

  CurvatureReport rep;
  rep.example = example;
  rep.seed = plan.seed;
  rep.minSec = std::numeric_limits<double>::infinity();
  double minSlack = std::numeric_limits<double>::infinity();
  double disc = 0;
  long checked = 0;
  std::vector<double> allSlacks;
  for (const auto& s : slots) {
    rep.nSamples += s.n;
    rep.violations += s.violations;
    checked += s.checked;
    disc = std::max(disc, s.disc);
    minSlack = std::min(minSlack, s.minSlack);
    if (s.minSec < rep.minSec) {
      rep.minSec = s.minSec;
      rep.minSecWitness = s.w;
    }
    allSlacks.insert(allSlacks.end(), s.slacks.begin(), s.slacks.end());
  }
  if (checked > 0) rep.minSlack = minSlack;
  rep.extra["hypothesisSamples"] = checked;
  rep.extra["discriminantResidual"] = disc;

  if (!histogramPath.empty() && !allSlacks.empty()) {
    const double lo = *std::min_element(allSlacks.begin(), allSlacks.end());
    const double hi = *std::max_element(allSlacks.begin(), allSlacks.end());
    const int bins = 50;
    std::vector<long> counts(bins, 0);
    const double width = (hi > lo) ? (hi - lo) / bins : 1.0;
    for (double s : allSlacks)
      counts[std::min(bins - 1, static_cast<int>((s - lo) / width))]++;
    std::ofstream out(histogramPath);
    out << "bin_lo,bin_hi,count\n";
    for (int b = 0; b < bins; ++b)
      out << exact_decimal(lo + b * width) << ',' << exact_decimal(lo + (b + 1) * width) << ','
          << counts[b] << '\n';
    rep.slackHistogramCsvPath = histogramPath;
  }
  return rep;
}

EqualityCase equality_case_check(const Cohom1Metric& M, double t, const Vec& x2, const Vec& y,
                                 double c, double tol) {
  const BlockDecomposition& d = M.decomposition();
  const Jet F = M.profile(1).jet(t);
  if (F.d1 == 0.0) throw std::domain_error("equality_case_check: requires f'(t) != 0");
  if (d.project(x2, 1).cwiseAbs().maxCoeff() > 1e-14)
    throw std::invalid_argument("equality_case_check: x must lie in m2");
  const Vec y1 = d.project(y, 1), y2 = d.project(y, 2);
  const LieAlgebra& A = d.algebra();
  EqualityCase e;
  e.curvature = curvature_two_block(M, t, c, x2, y);
  const double scale = std::max(1.0, x2.squaredNorm() * y.squaredNorm());
  e.curvatureZero = std::abs(e.curvature) <= tol * scale;
  const Vec cond = A.bracket(x2, y2) + F.v * F.v * A.bracket(x2, y1);
  e.conditionsHold = (std::abs(c) * y1.norm() <= tol) && cond.norm() <= tol * std::sqrt(scale);
  return e;
}

}  // namespace cohomlab
