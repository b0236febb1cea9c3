#include "cohomlab/profile_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cohomlab/parallel.hpp"

namespace cohomlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int sgn(double x, double tol) { return x > tol ? 1 : (x < -tol ? -1 : 0); }

Jet cone_jet(double t, double c0) {
  const double s = 1 + c0 * c0 * t * t;
  return {c0 * t / std::sqrt(s), c0 * std::pow(s, -1.5), -3 * c0 * c0 * c0 * t * std::pow(s, -2.5)};
}

form::PowerOfPoly root_of(form::Polynomial p, int C) {
  return form::PowerOfPoly{std::move(p), 1.0 / (C + 1)};
}

}  // namespace

InequalityReport check_inequality(const WarpProfile& f, int C, const std::vector<double>& grid) {
  InequalityReport r;
  r.maxViolation = -kInf;
  r.maxConcavity = -kInf;
  r.points.reserve(grid.size());
  for (double t : grid) {
    const Jet j = f.jet(t);
    const double margin = -j.v * j.d2 - C * j.d1 * j.d1;
    const double conc = (C + 1) * std::pow(j.v, C - 1) * (j.v * j.d2 + C * j.d1 * j.d1);
    r.points.push_back({t, margin, conc});
    r.maxViolation = std::max(r.maxViolation, -margin);
    r.maxConcavity = std::max(r.maxConcavity, conc);
    if (j.v > 0) {
      const double normalized = conc / ((C + 1) * std::pow(j.v, C - 1));
      if (sgn(normalized, 1e-12) != sgn(-margin, 1e-12)) ++r.signMismatches;
    }
  }
  if (grid.empty()) r.maxViolation = r.maxConcavity = 0;
  return r;
}

double solve_R0(double delta, double c0) {
  if (!(delta > 0) || !(c0 > 0)) throw std::invalid_argument("solve_R0: delta and c0 must be positive");
  const double target = 1.0 / std::sqrt(delta);
  auto g = [&](double t) { return t * (1 + c0 * c0 * t * t) - target; };
  double lo = 0, hi = std::max(1.0, target);
  while (g(hi) < 0) hi *= 2;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  const double r = 0.5 * (lo + hi);
  if (r < 1 - 1e-9) throw std::domain_error("solve_R0: R0 < 1, delta too large for this c0");
  return r;
}

BuiltDiscProfile build_disc_profile(double delta, double c0, int C, bool strict) {
  if (C < 9) throw std::invalid_argument("build_disc_profile: C must be at least 9");
  const double R0 = solve_R0(delta, c0);
  const double e = C + 1.0;
  auto h0 = [&](double t) { return jet_pow(cone_jet(t, c0), e); };

  double cs = R0;
  Jet hs = h0(cs);
  if (!(hs.d2 < 0)) {
    if (strict) throw std::domain_error("build_disc_profile: (f0^{C+1})'' >= 0 at R0");
    cs = std::max(R0, std::sqrt(C / 3.0) / c0);
    hs = h0(cs);
    hs.d2 = std::min(hs.d2, 0.0);
  }
  const double R = cs + (1 - hs.v) / hs.d1 + 1;

  const double s0 = hs.d1, k0 = hs.d2;
  const double w1 = k0 < 0 ? std::min(0.5, s0 / -k0) : 0.5;
  const double p = s0 + 0.5 * k0 * w1;
  const double hA = hs.v + s0 * w1 + k0 * w1 * w1 * 5.0 / 14.0;
  const double w2 = 0.1;
  const double hB = 1 - 0.5 * p * w2;
  const double plateau = (hB - hA) / p;
  if (!(p > 0) || plateau < -1e-12)
    throw std::runtime_error("build_disc_profile: cap construction infeasible");

  const double tA = cs + w1;
  const double tB = tA + std::max(plateau, 0.0);
  const double capEnd = tB + w2;
  if (capEnd > R - 0.5) throw std::runtime_error("build_disc_profile: cap does not fit before R");

  const double q = k0 * w1 * w1;
  std::vector<Piece> pieces;
  pieces.push_back({1.0, cs, form::CheegerCone{c0}});
  pieces.push_back({cs, tA,
                    root_of(poly_rescale({hs.v, s0 * w1, 0.5 * q, 0, 0, -0.5 * q, 0.5 * q, -q / 7},
                                         cs, w1),
                            C)});
  if (tB > tA) pieces.push_back({tA, tB, root_of(form::Polynomial{{hA, p}, tA}, C)});
  const double d = p * w2;
  pieces.push_back({tB, capEnd, root_of(poly_rescale({hB, d, 0, 0, -2.5 * d, 3 * d, -d}, tB, w2), C)});
  pieces.push_back({capEnd, R, form::Constant{1.0}});
  if (pieces[0].hi <= pieces[0].lo) pieces.erase(pieces.begin());

  BuiltDiscProfile out{delta, c0, C, R0, cs, capEnd, R, make_profile(WarpProfile(std::move(pieces)))};
  return out;
}

nlohmann::json disc_profile_json(const BuiltDiscProfile& p) {
  return {{"delta", p.delta},       {"c0", p.c0},
          {"C", p.C},               {"R0", p.R0},
          {"capStart", p.capStart}, {"capEnd", p.capEnd},
          {"R", p.R},               {"concaveFromR0", p.concaveFromR0()},
          {"profile", p.f->to_json()}};
}

bool DiscProfileInvariants::pass() const {
  return f0Mismatch == 0 && maxConcavity.value_or(0.0) <= 1e-12 && minF > 0 && maxF <= 1 + 1e-15 &&
         minSlope >= -1e-15 && terminalLength > 0 && joins.value <= 1e-12 && joins.d1 <= 1e-12 &&
         joins.d2 <= 1e-9;
}

nlohmann::json DiscProfileInvariants::to_json() const {
  return {{"f0Mismatch", f0Mismatch},
          {"maxConcavityAfterR0", maxConcavity ? nlohmann::json(*maxConcavity) : nlohmann::json(nullptr)},
          {"minF", minF},
          {"maxF", maxF},
          {"minSlope", minSlope},
          {"terminalConstantLength", terminalLength},
          {"joins", {{"value", joins.value}, {"d1", joins.d1}, {"d2", joins.d2}}},
          {"pass", pass()}};
}

DiscProfileInvariants check_disc_profile(const BuiltDiscProfile& p, const std::vector<double>& grid) {
  const WarpProfile& f = *p.f;
  DiscProfileInvariants r;
  r.minF = r.minSlope = std::numeric_limits<double>::infinity();
  r.maxF = -std::numeric_limits<double>::infinity();
  for (double t : grid) {
    const Jet j = f.jet(t);
    r.minF = std::min(r.minF, j.v);
    r.maxF = std::max(r.maxF, j.v);
    r.minSlope = std::min(r.minSlope, j.d1);
    if (t <= p.R0) {
      const double f0 = p.c0 * t / std::sqrt(1 + p.c0 * p.c0 * t * t);
      r.f0Mismatch = std::max(r.f0Mismatch, std::abs(j.v - f0));
    } else {
      const double h2 = jet_pow(j, p.C + 1.0).d2;
      r.maxConcavity = std::max(r.maxConcavity.value_or(h2), h2);
    }
  }
  r.terminalLength = p.R - p.capEnd;
  r.joins = f.check_joins();
  return r;
}

DeformationReport deformation_conditions(const std::vector<ProfilePtr>& f,
                                 const std::vector<ProfilePtr>& ft, double c0, double eps,
                                 const std::vector<double>& grid, bool correctedRho) {
  if (f.size() != ft.size() || f.empty())
    throw DimensionError("deformation_conditions: tuples must have equal nonzero length");
  const std::size_t k = f.size();
  DeformationReport r{kInf, kInf, kInf, kInf};
  for (double t : grid) {
    std::vector<Jet> a(k), b(k);
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = f[i]->jet(t);
      b[i] = ft[i]->jet(t);
      r.cond1 = std::min(r.cond1, eps - std::abs(b[i].v - c0));
      r.cond2 = std::min(r.cond2, std::abs(a[i].d1) + eps - std::abs(b[i].d1));
      r.cond3 = std::min(r.cond3, a[i].d2 + eps - b[i].d2);
    }
    auto rho = [&](std::size_t i) {
      const double num = b[i].d1 - (correctedRho ? b[0].d1 : a[0].d1);
      const double den = a[i].d1 - a[0].d1;
      if (den == 0) return num == 0 ? 1.0 : kInf;
      return num / den;
    };
    const double rk = rho(k - 1);
    for (std::size_t i = 1; i < k; ++i) {
      const double near = std::min(eps - std::abs(b[i].d1 - a[0].d1), eps - std::abs(a[i].d1 - a[0].d1));
      const double ri = rho(i);
      double ratio = std::min(1 + eps - std::abs(rk), eps - std::abs(ri - rk));
      if (std::isnan(ratio)) ratio = -kInf;
      r.cond4 = std::min(r.cond4, std::max(near, ratio));
    }
  }
  if (k == 1 && !grid.empty()) r.cond4 = eps;
  return r;
}

AbcScan abc_positivity_scan(const Cohom1Metric& M, const std::vector<double>& ts, int pairsPerT,
                            std::uint64_t seed) {
  const BlockDecomposition& d = M.decomposition();
  std::vector<int> support;
  for (int i = 1; i < d.numBlocks(); ++i)
    support.insert(support.end(), d.block(i).begin(), d.block(i).end());

  struct Slot {
    long n = 0, bad = 0;
    double minA = kInf, minC = kInf, minDisc = kInf, worst = kInf;
    Witness w;
  };
  std::vector<Slot> slots(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    auto rng = stream_rng(seed, i);
    Slot& s = slots[i];
    for (int p = 0; p < pairsPerT; ++p) {
      const Vec x = random_unit(rng, d.dim(), support);
      const Vec y = random_unit(rng, d.dim(), support);
      const double wedge = 1 - x.dot(y) * x.dot(y);
      if (wedge < 1e-10) continue;
      const AbcCoefficients abc = abc_decompose(M, ts[i], x, y);
      const double A = abc.A / wedge, Cc = abc.C;
      const double disc = (abc.A * abc.C - 0.25 * abc.B * abc.B) / wedge;
      ++s.n;
      if (!(A > 0 && Cc > 0 && disc > 0)) ++s.bad;
      s.minA = std::min(s.minA, A);
      s.minC = std::min(s.minC, Cc);
      s.minDisc = std::min(s.minDisc, disc);
      const double m = std::min({A, Cc, disc});
      if (m < s.worst) {
        s.worst = m;
        s.w = {ts[i], 0.0, x, y};
      }
    }
  });
  AbcScan out;
  out.minA = out.minC = out.minDisc = kInf;
  double worst = kInf;
  for (const Slot& s : slots) {
    out.samples += s.n;
    out.failures += s.bad;
    out.minA = std::min(out.minA, s.minA);
    out.minC = std::min(out.minC, s.minC);
    out.minDisc = std::min(out.minDisc, s.minDisc);
    if (s.worst < worst) {
      worst = s.worst;
      out.worst = s.w;
    }
  }
  return out;
}

EqualizeResult equalize_profiles(const Cohom1Metric& M, const EqualizeOptions& opt) {
  const auto& F = M.profiles();
  const std::size_t k = F.size();
  const double t0 = opt.t0;
  const double t1 = t0 + opt.t1Offset;
  const double w2 = 2 * opt.blendHalfWidth;
  if (!(t0 > M.a() && t1 + w2 < M.b()))
    throw std::invalid_argument("equalize_profiles: t0, t1 and the blend must lie inside (a, b)");
  for (const auto& f : F) {
    if (std::abs(f->jet(t0).v - F[0]->jet(t0).v) > 1e-10)
      throw std::invalid_argument("equalize_profiles: profiles must agree at t0");
    if (!(f->jet(t0).d1 > 0)) throw std::invalid_argument("equalize_profiles: need f_i'(t0) > 0");
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return F[i]->jet(t0).d1 < F[j]->jet(t0).d1; });
  const ProfilePtr& f1 = F[order.front()];
  const ProfilePtr& fk = F[order.back()];
  const Jet j1 = f1->jet(t1), jk = fk->jet(t1);
  const double D = jk.v - j1.v, Dp = jk.d1 - j1.d1;

  // e = Dp (t - s)^3 / (3 L^2) on [s, t1] matches fk - f1 to first order at t1.
  const bool flat = std::abs(D) < 1e-14 && std::abs(Dp) < 1e-14;
  double s = t1;
  form::Polynomial e{{0.0}, t1};
  if (!flat) {
    const double L = 3 * D / Dp;
    if (!(L > 0) || !std::isfinite(L))
      throw std::runtime_error("equalize_profiles: slopes and values at t1 are not ordered");
    s = t1 - L;
    if (!(s > M.a())) throw std::runtime_error("equalize_profiles: correction does not fit in (a, t1)");
    e = form::Polynomial{{0, 0, 0, Dp / (3 * L * L)}, s};
  }

  std::vector<double> Ci(k, 0.0);
  std::vector<ProfilePtr> bar(k);
  for (std::size_t i = 0; i < k; ++i) {
    Ci[i] = flat ? 0.0 : (F[i]->jet(t1).v - j1.v) / D;
    bar[i] = make_profile(WarpProfile::single(
        form::Combination{{1.0}, {F[i]}, poly_scale(e, -Ci[i])}, s, M.b()));
  }

  double m = kInf;
  for (const auto& b : bar) m = std::min(m, b->jet(t1).d2);
  ProfilePtr target;
  if (opt.target) {
    target = *opt.target;
  } else {
    const double kappa = std::max(1.0, -2 * m / j1.d1);
    target = make_profile(WarpProfile::single(
        form::ExpSaturation{j1.v, j1.d1 / kappa, kappa, t1}, t1, M.b()));
  }

  std::vector<ProfilePtr> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Piece> pieces;
    if (s > M.a()) pieces.push_back({M.a(), s, form::Scaled{F[i], 1.0}});
    if (t1 > s) pieces.push_back({s, t1, form::Scaled{bar[i], 1.0}});
    pieces.push_back({t1, t1 + w2, form::Blend{bar[i], target, t1, t1 + w2}});
    pieces.push_back({t1 + w2, M.b(), form::Scaled{target, 1.0}});
    out[i] = make_profile(WarpProfile(std::move(pieces)));
  }

  bool ok8 = true;
  if (!flat) {
    const ProfilePtr& bk = bar[order.back()];
    for (double t : interior_grid(s, t1, 64)) {
      const Jet b = bk->jet(t), a1 = f1->jet(t), ak = fk->jet(t);
      if (b.v > a1.v + 1e-12 || b.v > ak.v + 1e-12) ok8 = false;
      if (t < t1 - 1e-9 && !(b.d1 > a1.d1)) ok8 = false;
    }
  }

  Cohom1Metric result(M.decomposition(), M.a(), M.b(), out);
  AbcScan scan = abc_positivity_scan(result, interior_grid(M.a(), M.b(), opt.scanPoints),
                                     opt.scanPairs, opt.seed);
  return EqualizeResult{std::move(result), target, t1, Ci, ok8, scan};
}

Cohom1Metric glue_metric(const GlueInput& left, const GlueInput& right) {
  const BlockDecomposition& dl = left.decomposition;
  const BlockDecomposition& dr = right.decomposition;
  if (dl.blocks() != dr.blocks() || dl.algebra().constants() != dr.algebra().constants())
    throw std::invalid_argument("glue_metric: slice data differ");
  const BuiltDiscProfile& L = left.profile;
  const BuiltDiscProfile& R = right.profile;
  const double pivot = L.R + R.R;
  std::vector<Piece> pieces = L.f->pieces();
  const auto& rp = R.f->pieces();
  for (auto it = rp.rbegin(); it != rp.rend(); ++it)
    pieces.push_back({pivot - it->hi, pivot - it->lo, form::Reflected{R.f, pivot}});
  return Cohom1Metric::two_block(dl, make_profile(WarpProfile(std::move(pieces))), 1.0,
                                 pivot - 1.0);
}

}  // namespace cohomlab
