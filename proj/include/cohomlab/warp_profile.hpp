#pragma once

#include <json.hpp>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace cohomlab {

/// Value with exact first and second derivatives in t.
struct Jet {
  double v = 0, d1 = 0, d2 = 0;
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(double s, const Jet& a);
Jet operator/(const Jet& a, const Jet& b);
Jet jet_pow(const Jet& a, double p);
Jet jet_sqrt(const Jet& a);

class WarpProfile;
using ProfilePtr = std::shared_ptr<const WarpProfile>;

namespace form {

struct Constant {
  double value;
};
/// c0 t / sqrt(1 + c0^2 t^2).
struct CheegerCone {
  double c0;
};
/// sum_k coeffs[k] (t - origin)^k.
struct Polynomial {
  std::vector<double> coeffs;
  double origin = 0;
};
/// poly(t)^exponent.
struct PowerOfPoly {
  Polynomial poly;
  double exponent;
};
/// offset + amplitude sin(frequency t + phase).
struct Sine {
  double amplitude, frequency, phase, offset;
};
/// a + b (1 - exp(-rate (t - origin))).
struct ExpSaturation {
  double a, b, rate, origin;
};
struct Scaled {
  ProfilePtr base;
  double factor;
};
/// base(t - shift).
struct Shifted {
  ProfilePtr base;
  double shift;
};
/// base(pivot - t).
struct Reflected {
  ProfilePtr base;
  double pivot;
};
/// sqrt(lambda mu rho / (lambda rho + (1 - lambda) mu)).
struct BallBlock {
  ProfilePtr lambda;
  double mu, rho;
};
/// sqrt(delta f^2 / (f^2 + delta)).
struct CheegerDeformed {
  ProfilePtr base;
  double delta;
};
/// sum_i weight_i base_i(t) + poly(t).
struct Combination {
  std::vector<double> weights;
  std::vector<ProfilePtr> bases;
  Polynomial poly;
};
/// (1 - S) from + S to, with S the quintic smoothstep from lo to hi.
struct Blend {
  ProfilePtr from, to;
  double lo, hi;
};

}  // namespace form

using Form = std::variant<form::Constant, form::CheegerCone, form::Polynomial, form::PowerOfPoly,
                          form::Sine, form::ExpSaturation, form::Scaled, form::Shifted, form::Reflected,
                          form::BallBlock, form::CheegerDeformed, form::Combination, form::Blend>;

struct Piece {
  double lo, hi;
  Form form;
};

struct JoinDiagnostics {
  double value = 0, d1 = 0, d2 = 0;
};

/// Piecewise-analytic scalar function with exact f, f', f''.
class WarpProfile {
 public:
  explicit WarpProfile(std::vector<Piece> pieces);
  static WarpProfile single(Form form, double lo, double hi);

  double lo() const { return pieces_.front().lo; }
  double hi() const { return pieces_.back().hi; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::vector<double> breakpoints() const;

  /// Throws std::domain_error outside [lo, hi]. At a breakpoint the piece to
  /// the right is used.
  Jet jet(double t) const;
  double operator()(double t) const { return jet(t).v; }

  JoinDiagnostics check_joins() const;

  nlohmann::json to_json() const;
  static WarpProfile from_json(const nlohmann::json& j);

 private:
  std::vector<Piece> pieces_;
};

ProfilePtr make_profile(WarpProfile p);

/// Quintic smoothstep 6u^5 - 15u^4 + 10u^3 as a jet in u.
Jet smoothstep(double u);

/// Polynomial helpers, coefficients in powers of (t - origin).
Jet eval_poly(const form::Polynomial& p, double t);
form::Polynomial poly_integrate(const form::Polynomial& p, double constant = 0);
/// p((t - t0) / w) re-expressed in powers of (t - t0).
form::Polynomial poly_rescale(const std::vector<double>& coeffsInU, double t0, double w);
form::Polynomial poly_add(const form::Polynomial& a, const form::Polynomial& b);
form::Polynomial poly_scale(const form::Polynomial& a, double s);

/// Quintic on [t0, t1] matching the jets at both ends.
form::Polynomial hermite_quintic(double t0, const Jet& a, double t1, const Jet& b);

std::string exact_decimal(double x);

}  // namespace cohomlab
