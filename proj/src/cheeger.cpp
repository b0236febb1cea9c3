#include "cohomlab/cheeger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cohomlab/cohom1.hpp"
#include "cohomlab/parallel.hpp"

namespace cohomlab {

double cheeger_deform(double phi, double delta) {
  if (!(phi > 0) || !(delta > 0)) throw std::invalid_argument("cheeger_deform: need phi, delta > 0");
  return delta * phi / (phi + delta);
}

std::vector<double> cheeger_deform(const std::vector<double>& phi, double delta) {
  std::vector<double> out;
  out.reserve(phi.size());
  for (double p : phi) out.push_back(cheeger_deform(p, delta));
  return out;
}

ChainMetric::ChainMetric(BlockDecomposition chain, std::vector<double> c)
    : chain_(std::move(chain)), c_(std::move(c)) {
  if (static_cast<int>(c_.size()) != chain_.numBlocks())
    throw DimensionError("ChainMetric: one weight per block expected");
  for (bool f : chain_.prefixFlags())
    if (!f) throw std::invalid_argument("ChainMetric: every prefix must be flagged a subalgebra");
  for (double x : c_)
    if (!(x > 0)) throw std::invalid_argument("ChainMetric: weights must be positive");
  for (int i = 0; i < chain_.dim(); ++i)
    if (chain_.blockOf(i) < 0) throw std::invalid_argument("ChainMetric: blocks must cover g");
}

bool ChainMetric::nondecreasing() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] < c_[i - 1]) return false;
  return true;
}

LeftInvariantMetric ChainMetric::metric() const {
  Vec w(chain_.dim());
  for (int j = 0; j < chain_.dim(); ++j) w[j] = c_[chain_.blockOf(j)];
  return LeftInvariantMetric(chain_.algebraPtr(), w.asDiagonal().toDenseMatrix());
}

CurvatureReport chain_metric_curvature_scan(const ChainMetric& m, int nPlanes, std::uint64_t seed,
                                            const std::string& example) {
  const LeftInvariantMetric g = m.metric();
  const int n = m.decomposition().dim();
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  const int chunk = 256;
  const int chunks = (nPlanes + chunk - 1) / chunk;
  struct Slot {
    double minSec = std::numeric_limits<double>::infinity();
    Witness w;
    long n = 0;
  };
  std::vector<Slot> slots(chunks);
  parallel_for(chunks, [&](std::size_t ci) {
    auto rng = stream_rng(seed, ci);
    Slot& s = slots[ci];
    const int end = std::min<int>(nPlanes, (ci + 1) * chunk);
    for (int p = static_cast<int>(ci) * chunk; p < end; ++p) {
      const Vec x = random_unit(rng, n, all);
      const Vec y = random_unit(rng, n, all);
      const double area = g.inner(x, x) * g.inner(y, y) - std::pow(g.inner(x, y), 2);
      ++s.n;
      if (area < 1e-14) continue;
      const double sec = left_invariant_curvature(g, x, y) / area;
      if (sec < s.minSec) {
        s.minSec = sec;
        s.w = Witness{0, 0, x, y};
      }
    }
  });
  CurvatureReport rep;
  rep.example = example;
  rep.seed = seed;
  rep.minSec = std::numeric_limits<double>::infinity();
  for (const auto& s : slots) {
    rep.nSamples += s.n;
    if (s.minSec < rep.minSec) {
      rep.minSec = s.minSec;
      rep.minSecWitness = s.w;
    }
  }
  rep.extra["nondecreasingWeights"] = m.nondecreasing();
  return rep;
}

ChainMetric sphere_chain_constants(const SphereChainData& s) {
  const int k = s.chain.numBlocks();
  if (static_cast<int>(s.rho.size()) != k)
    throw DimensionError("sphere_chain_constants: one rho per block expected");
  for (int i = 0; i < k; ++i) {
    if (!(s.rho[i] > 0)) throw std::invalid_argument("sphere_chain_constants: rho must be positive");
    if (i > 0 && s.rho[i] > s.rho[i - 1])
      throw std::invalid_argument("sphere_chain_constants: rho must be nonincreasing");
  }
  if (!(s.mu > 0) || !(s.mu < s.rho.back()))
    throw std::invalid_argument("sphere_chain_constants: need 0 < mu < rho_r");
  std::vector<double> c(k);
  for (int i = 0; i < k; ++i) c[i] = s.mu * s.rho[i] / (s.rho[i] - s.mu);
  ChainMetric m(s.chain, c);
  if (!m.nondecreasing())
    throw std::logic_error("sphere_chain_constants: constants not nondecreasing");
  return m;
}

Cohom1Metric ball_profile(const SphereChainData& s, ProfilePtr lambda, double a, double b,
                          double t0) {
  for (double t : interior_grid(a, b, 257))
    if (!((*lambda)(t) > 0)) throw std::invalid_argument("ball_profile: lambda must be positive");
  const Jet l0 = lambda->jet(t0);
  if (std::abs(l0.v - 1.0) > 1e-12 || !(l0.d1 > 0))
    throw std::invalid_argument("ball_profile: need lambda(t0) = 1 and lambda'(t0) > 0");
  const int k = s.chain.numBlocks();
  if (static_cast<int>(s.rho.size()) != k) throw DimensionError("ball_profile: rho size");
  std::vector<ProfilePtr> profiles;
  for (int i = 1; i < k; ++i)
    profiles.push_back(make_profile(
        WarpProfile::single(form::BallBlock{lambda, s.mu, s.rho[i]}, lambda->lo(), lambda->hi())));
  return Cohom1Metric(s.chain, a, b, std::move(profiles));
}

ProfilePtr default_ball_lambda() {
  return make_profile(
      WarpProfile::single(form::Sine{-2.0, 1.0, 0.5 * std::numbers::pi, 2.0}, 0.0, std::numbers::pi));
}

Cohom1Metric cheeger_deformed(const Cohom1Metric& M, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("cheeger_deformed: delta must be positive");
  std::vector<ProfilePtr> profiles;
  for (const auto& p : M.profiles())
    profiles.push_back(
        make_profile(WarpProfile::single(form::CheegerDeformed{p, delta}, p->lo(), p->hi())));
  return Cohom1Metric(M.decomposition(), M.a(), M.b(), std::move(profiles));
}

CurvatureReport sample_min_sec(const Cohom1Metric& M, const SamplingPlan& plan,
                               const std::string& example) {
  const BlockDecomposition& d = M.decomposition();
  std::vector<int> support;
  for (int i = 1; i < d.numBlocks(); ++i)
    support.insert(support.end(), d.block(i).begin(), d.block(i).end());
  const auto ts = interior_grid(M.a(), M.b(), plan.tCount, plan.endpointMargin);
  struct Slot {
    double minSec = std::numeric_limits<double>::infinity();
    Witness w;
    long n = 0;
  };
  std::vector<Slot> slots(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    auto rng = stream_rng(plan.seed, i);
    Slot& s = slots[i];
    for (int p = 0; p < plan.pairsPerT; ++p) {
      const Vec x = random_unit(rng, d.dim(), support);
      const Vec y = random_unit(rng, d.dim(), support);
      for (double c : plan.cValues) {
        ++s.n;
        const double area = M.planeArea(ts[i], c, x, y);
        if (area < 1e-14) continue;
        const double sec = curvature_general(M, ts[i], c, x, y) / area;
        if (sec < s.minSec) {
          s.minSec = sec;
          s.w = Witness{ts[i], c, x, y};
        }
      }
    }
  });
  CurvatureReport rep;
  rep.example = example;
  rep.seed = plan.seed;
  rep.minSec = std::numeric_limits<double>::infinity();
  for (const auto& s : slots) {
    rep.nSamples += s.n;
    if (s.minSec < rep.minSec) {
      rep.minSec = s.minSec;
      rep.minSecWitness = s.w;
    }
  }
  return rep;
}

double diameter_proxy(const Cohom1Metric& M, const std::vector<double>& kappa, int gridPoints) {
  const int k = static_cast<int>(M.profiles().size());
  if (static_cast<int>(kappa.size()) != k) throw DimensionError("diameter_proxy: kappa size");
  double best = 0;
  for (double t : interior_grid(M.a(), M.b(), gridPoints, 0.0))
    for (int i = 0; i < k; ++i) best = std::max(best, (*M.profiles()[i])(t) * kappa[i]);
  return (M.b() - M.a()) + std::numbers::pi * best;
}

std::vector<CurvatureReport> cheeger_family_scan(const Cohom1Metric& M,
                                                 const std::vector<double>& deltas,
                                                 const SamplingPlan& plan,
                                                 const std::vector<double>& kappa,
                                                 const std::string& example) {
  std::vector<CurvatureReport> out;
  for (double delta : deltas) {
    const Cohom1Metric Md = cheeger_deformed(M, delta);
    CurvatureReport r = sample_min_sec(Md, plan, example);
    r.diameter = diameter_proxy(Md, kappa);
    r.product = r.minSec * (*r.diameter) * (*r.diameter);
    r.extra["delta"] = delta;
    out.push_back(std::move(r));
  }
  return out;
}

bool product_trend_nondecreasing(const std::vector<CurvatureReport>& reports, double tol) {
  // Walk from the largest delta to the smallest.
  std::vector<const CurvatureReport*> order;
  for (const auto& r : reports) order.push_back(&r);
  auto delta = [](const CurvatureReport* r) { return r->extra.value("delta", 0.0); };
  std::stable_sort(order.begin(), order.end(),
                   [&](auto* x, auto* y) { return delta(x) > delta(y); });
  for (size_t i = 1; i < order.size(); ++i) {
    const double prev = order[i - 1]->product.value_or(0.0);
    const double cur = order[i]->product.value_or(0.0);
    if (std::min(cur, 0.0) < std::min(prev, 0.0) - tol) return false;
  }
  return true;
}

}  // namespace cohomlab
