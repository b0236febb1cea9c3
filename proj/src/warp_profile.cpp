#include "cohomlab/warp_profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cohomlab {

Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2 * a.d1 * b.d1 + a.v * b.d2};
}
Jet operator*(double s, const Jet& a) { return {s * a.v, s * a.d1, s * a.d2}; }
Jet operator/(const Jet& a, const Jet& b) {
  const double iv = 1.0 / b.v;
  Jet inv{iv, -b.d1 * iv * iv, -b.d2 * iv * iv + 2 * b.d1 * b.d1 * iv * iv * iv};
  return a * inv;
}
Jet jet_pow(const Jet& a, double p) {
  const double g = std::pow(a.v, p);
  const double g1 = p * std::pow(a.v, p - 1);
  const double g2 = p * (p - 1) * std::pow(a.v, p - 2);
  return {g, g1 * a.d1, g2 * a.d1 * a.d1 + g1 * a.d2};
}
Jet jet_sqrt(const Jet& a) { return jet_pow(a, 0.5); }

Jet smoothstep(double u) {
  if (u <= 0) return {0, 0, 0};
  if (u >= 1) return {1, 0, 0};
  const double u2 = u * u, u3 = u2 * u;
  return {u3 * (10 - 15 * u + 6 * u2), 30 * u2 * (1 - 2 * u + u2), 60 * u * (1 - 3 * u + 2 * u2)};
}

Jet eval_poly(const form::Polynomial& p, double t) {
  const double x = t - p.origin;
  Jet r;
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
    r.d2 = r.d2 * x + 2 * r.d1;
    r.d1 = r.d1 * x + r.v;
    r.v = r.v * x + *it;
  }
  return r;
}

form::Polynomial poly_integrate(const form::Polynomial& p, double constant) {
  form::Polynomial out{{constant}, p.origin};
  for (size_t k = 0; k < p.coeffs.size(); ++k)
    out.coeffs.push_back(p.coeffs[k] / static_cast<double>(k + 1));
  return out;
}

form::Polynomial poly_rescale(const std::vector<double>& coeffsInU, double t0, double w) {
  form::Polynomial out{coeffsInU, t0};
  double scale = 1;
  for (auto& c : out.coeffs) {
    c /= scale;
    scale *= w;
  }
  return out;
}

form::Polynomial poly_add(const form::Polynomial& a, const form::Polynomial& b) {
  if (a.origin != b.origin) throw std::invalid_argument("poly_add: origins differ");
  form::Polynomial out{std::vector<double>(std::max(a.coeffs.size(), b.coeffs.size()), 0.0),
                       a.origin};
  for (size_t k = 0; k < a.coeffs.size(); ++k) out.coeffs[k] += a.coeffs[k];
  for (size_t k = 0; k < b.coeffs.size(); ++k) out.coeffs[k] += b.coeffs[k];
  return out;
}

form::Polynomial poly_scale(const form::Polynomial& a, double s) {
  form::Polynomial out = a;
  for (auto& c : out.coeffs) c *= s;
  return out;
}

form::Polynomial hermite_quintic(double t0, const Jet& a, double t1, const Jet& b) {
  const double h = t1 - t0;
  if (!(h > 0)) throw std::invalid_argument("hermite_quintic: empty interval");
  const double c0 = a.v, c1 = a.d1 * h, c2 = 0.5 * a.d2 * h * h;
  const double r0 = b.v - (c0 + c1 + c2);
  const double r1 = b.d1 * h - (c1 + 2 * c2);
  const double r2 = b.d2 * h * h - 2 * c2;
  const double c3 = 10 * r0 - 4 * r1 + 0.5 * r2;
  const double c4 = -15 * r0 + 7 * r1 - r2;
  const double c5 = 6 * r0 - 3 * r1 + 0.5 * r2;
  return poly_rescale({c0, c1, c2, c3, c4, c5}, t0, h);
}

std::string exact_decimal(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

struct JetVisitor {
  double t;

  Jet operator()(const form::Constant& f) const { return {f.value, 0, 0}; }
  Jet operator()(const form::CheegerCone& f) const {
    const double s = 1 + f.c0 * f.c0 * t * t;
    return {f.c0 * t / std::sqrt(s), f.c0 * std::pow(s, -1.5),
            -3 * f.c0 * f.c0 * f.c0 * t * std::pow(s, -2.5)};
  }
  Jet operator()(const form::Polynomial& f) const { return eval_poly(f, t); }
  Jet operator()(const form::PowerOfPoly& f) const {
    return jet_pow(eval_poly(f.poly, t), f.exponent);
  }
  Jet operator()(const form::Sine& f) const {
    const double a = f.frequency * t + f.phase;
    return {f.offset + f.amplitude * std::sin(a), f.amplitude * f.frequency * std::cos(a),
            -f.amplitude * f.frequency * f.frequency * std::sin(a)};
  }
  Jet operator()(const form::ExpSaturation& f) const {
    const double e = std::exp(-f.rate * (t - f.origin));
    return {f.a + f.b * (1 - e), f.b * f.rate * e, -f.b * f.rate * f.rate * e};
  }
  Jet operator()(const form::Scaled& f) const { return f.factor * f.base->jet(t); }
  Jet operator()(const form::Shifted& f) const { return f.base->jet(t - f.shift); }
  Jet operator()(const form::Reflected& f) const {
    const Jet b = f.base->jet(f.pivot - t);
    return {b.v, -b.d1, b.d2};
  }
  Jet operator()(const form::BallBlock& f) const {
    const Jet lam = f.lambda->jet(t);
    const Jet num = (f.mu * f.rho) * lam;
    const Jet den = f.rho * lam + f.mu * (Jet{1, 0, 0} - lam);
    return jet_sqrt(num / den);
  }
  Jet operator()(const form::CheegerDeformed& f) const {
    const Jet b = f.base->jet(t);
    const Jet sq = b * b;
    return jet_sqrt((f.delta * sq) / (sq + Jet{f.delta, 0, 0}));
  }
  Jet operator()(const form::Combination& f) const {
    Jet r = f.poly.coeffs.empty() ? Jet{} : eval_poly(f.poly, t);
    for (size_t i = 0; i < f.bases.size(); ++i) r = r + f.weights[i] * f.bases[i]->jet(t);
    return r;
  }
  Jet operator()(const form::Blend& f) const {
    const double w = f.hi - f.lo;
    Jet s = smoothstep((t - f.lo) / w);
    s.d1 /= w;
    s.d2 /= w * w;
    const Jet one{1, 0, 0};
    if (s.v == 0 && s.d1 == 0 && s.d2 == 0) return f.from->jet(t);
    if (s.v == 1 && s.d1 == 0 && s.d2 == 0) return f.to->jet(t);
    return (one - s) * f.from->jet(t) + s * f.to->jet(t);
  }
};

using nlohmann::json;

json poly_json(const form::Polynomial& p) {
  json c = json::array();
  for (double x : p.coeffs) c.push_back(exact_decimal(x));
  return {{"coeffs", c}, {"origin", exact_decimal(p.origin)}};
}

double num(const json& j) {
  if (j.is_string()) return std::stod(j.get<std::string>());
  return j.get<double>();
}

form::Polynomial poly_from(const json& j) {
  form::Polynomial p;
  for (const auto& c : j.at("coeffs")) p.coeffs.push_back(num(c));
  p.origin = num(j.at("origin"));
  return p;
}

struct JsonVisitor {
  json operator()(const form::Constant& f) const {
    return {{"type", "Constant"}, {"value", exact_decimal(f.value)}};
  }
  json operator()(const form::CheegerCone& f) const {
    return {{"type", "CheegerCone"}, {"c0", exact_decimal(f.c0)}};
  }
  json operator()(const form::Polynomial& f) const {
    json j = poly_json(f);
    j["type"] = "Polynomial";
    return j;
  }
  json operator()(const form::PowerOfPoly& f) const {
    return {{"type", "PowerOfPoly"}, {"poly", poly_json(f.poly)},
            {"exponent", exact_decimal(f.exponent)}};
  }
  json operator()(const form::Sine& f) const {
    return {{"type", "Sine"},
            {"amplitude", exact_decimal(f.amplitude)},
            {"frequency", exact_decimal(f.frequency)},
            {"phase", exact_decimal(f.phase)},
            {"offset", exact_decimal(f.offset)}};
  }
  json operator()(const form::ExpSaturation& f) const {
    return {{"type", "ExpSaturation"}, {"a", exact_decimal(f.a)},      {"b", exact_decimal(f.b)},
            {"rate", exact_decimal(f.rate)}, {"origin", exact_decimal(f.origin)}};
  }
  json operator()(const form::Scaled& f) const {
    return {{"type", "Scaled"}, {"base", f.base->to_json()}, {"factor", exact_decimal(f.factor)}};
  }
  json operator()(const form::Shifted& f) const {
    return {{"type", "Shifted"}, {"base", f.base->to_json()}, {"shift", exact_decimal(f.shift)}};
  }
  json operator()(const form::Reflected& f) const {
    return {{"type", "Reflected"}, {"base", f.base->to_json()}, {"pivot", exact_decimal(f.pivot)}};
  }
  json operator()(const form::BallBlock& f) const {
    return {{"type", "BallBlock"},
            {"lambda", f.lambda->to_json()},
            {"mu", exact_decimal(f.mu)},
            {"rho", exact_decimal(f.rho)}};
  }
  json operator()(const form::CheegerDeformed& f) const {
    return {{"type", "CheegerDeformed"},
            {"base", f.base->to_json()},
            {"delta", exact_decimal(f.delta)}};
  }
  json operator()(const form::Combination& f) const {
    json terms = json::array();
    for (size_t i = 0; i < f.bases.size(); ++i)
      terms.push_back({{"weight", exact_decimal(f.weights[i])}, {"base", f.bases[i]->to_json()}});
    return {{"type", "Combination"}, {"terms", terms}, {"poly", poly_json(f.poly)}};
  }
  json operator()(const form::Blend& f) const {
    return {{"type", "Blend"},
            {"from", f.from->to_json()},
            {"to", f.to->to_json()},
            {"lo", exact_decimal(f.lo)},
            {"hi", exact_decimal(f.hi)}};
  }
};

ProfilePtr sub(const json& j) { return make_profile(WarpProfile::from_json(j)); }

Form form_from(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "Constant") return form::Constant{num(j.at("value"))};
  if (type == "CheegerCone") return form::CheegerCone{num(j.at("c0"))};
  if (type == "Polynomial") return poly_from(j);
  if (type == "PowerOfPoly") return form::PowerOfPoly{poly_from(j.at("poly")), num(j.at("exponent"))};
  if (type == "Sine")
    return form::Sine{num(j.at("amplitude")), num(j.at("frequency")), num(j.at("phase")),
                      num(j.at("offset"))};
  if (type == "ExpSaturation")
    return form::ExpSaturation{num(j.at("a")), num(j.at("b")), num(j.at("rate")),
                               num(j.at("origin"))};
  if (type == "Scaled") return form::Scaled{sub(j.at("base")), num(j.at("factor"))};
  if (type == "Shifted") return form::Shifted{sub(j.at("base")), num(j.at("shift"))};
  if (type == "Reflected") return form::Reflected{sub(j.at("base")), num(j.at("pivot"))};
  if (type == "BallBlock")
    return form::BallBlock{sub(j.at("lambda")), num(j.at("mu")), num(j.at("rho"))};
  if (type == "CheegerDeformed") return form::CheegerDeformed{sub(j.at("base")), num(j.at("delta"))};
  if (type == "Combination") {
    form::Combination c;
    for (const auto& term : j.at("terms")) {
      c.weights.push_back(num(term.at("weight")));
      c.bases.push_back(sub(term.at("base")));
    }
    c.poly = poly_from(j.at("poly"));
    return c;
  }
  if (type == "Blend")
    return form::Blend{sub(j.at("from")), sub(j.at("to")), num(j.at("lo")), num(j.at("hi"))};
  throw std::invalid_argument("unknown profile form: " + type);
}

}  // namespace

WarpProfile::WarpProfile(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("WarpProfile: no pieces");
  for (size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].lo < pieces_[i].hi))
      throw std::invalid_argument("WarpProfile: empty piece interval");
    if (i > 0 && pieces_[i].lo != pieces_[i - 1].hi)
      throw std::invalid_argument("WarpProfile: pieces must be contiguous");
  }
}

WarpProfile WarpProfile::single(Form f, double lo, double hi) {
  return WarpProfile({Piece{lo, hi, std::move(f)}});
}

std::vector<double> WarpProfile::breakpoints() const {
  std::vector<double> out;
  for (size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].lo);
  return out;
}

Jet WarpProfile::jet(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(hi() - lo()));
  if (!(t >= lo() - slack && t <= hi() + slack))
    throw std::domain_error("WarpProfile: t = " + exact_decimal(t) + " outside [" +
                            exact_decimal(lo()) + ", " + exact_decimal(hi()) + "]");
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double x, const Piece& p) { return x < p.lo; });
  const Piece& p = (it == pieces_.begin()) ? pieces_.front() : *std::prev(it);
  return std::visit(JetVisitor{t}, p.form);
}

JoinDiagnostics WarpProfile::check_joins() const {
  JoinDiagnostics d;
  for (size_t i = 1; i < pieces_.size(); ++i) {
    const double t = pieces_[i].lo;
    const Jet l = std::visit(JetVisitor{t}, pieces_[i - 1].form);
    const Jet r = std::visit(JetVisitor{t}, pieces_[i].form);
    d.value = std::max(d.value, std::abs(l.v - r.v));
    d.d1 = std::max(d.d1, std::abs(l.d1 - r.d1));
    d.d2 = std::max(d.d2, std::abs(l.d2 - r.d2));
  }
  return d;
}

nlohmann::json WarpProfile::to_json() const {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : pieces_)
    pieces.push_back({{"lo", exact_decimal(p.lo)},
                      {"hi", exact_decimal(p.hi)},
                      {"form", std::visit(JsonVisitor{}, p.form)}});
  return {{"pieces", pieces}};
}

WarpProfile WarpProfile::from_json(const nlohmann::json& j) {
  std::vector<Piece> pieces;
  for (const auto& p : j.at("pieces"))
    pieces.push_back(Piece{num(p.at("lo")), num(p.at("hi")), form_from(p.at("form"))});
  return WarpProfile(std::move(pieces));
}

ProfilePtr make_profile(WarpProfile p) { return std::make_shared<const WarpProfile>(std::move(p)); }

}  // namespace cohomlab
