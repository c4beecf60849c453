#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "vfg/valfield.hpp"

namespace vfg {

/// Point of E(K): the point at infinity or an affine pair.
struct CurvePoint {
  bool inf = true;
  Laurent x, y;

  static CurvePoint infinity() { return CurvePoint{}; }
  static CurvePoint affine(Laurent x, Laurent y) { return CurvePoint{false, std::move(x), std::move(y)}; }

  std::string str() const { return inf ? "inf" : "(" + x.str() + ", " + y.str() + ")"; }
};

/// Coordinates agree to the precision carried by both points.
inline bool same_point(const CurvePoint& P, const CurvePoint& Q) {
  if (P.inf || Q.inf) return P.inf == Q.inf;
  return equal_to_precision(P.x, Q.x) && equal_to_precision(P.y, Q.y);
}

/// Point of the residue curve over k.
struct ResiduePoint {
  bool inf = true;
  Coeff x, y;

  static ResiduePoint infinity() { return ResiduePoint{}; }
  static ResiduePoint affine(Coeff x, Coeff y) { return ResiduePoint{false, std::move(x), std::move(y)}; }
  friend bool operator==(const ResiduePoint& a, const ResiduePoint& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return a.x == b.x && a.y == b.y;
  }
  std::string str() const { return inf ? "inf" : "(" + x.get_str() + ", " + y.get_str() + ")"; }
};

/// Weierstrass cubic over k, with the chord-tangent law on its smooth points.
class ResidueCurve {
 public:
  ResidueCurve(BaseField k, std::array<Coeff, 5> a) : k_(k), a_(std::move(a)) {}

  const BaseField& field() const { return k_; }
  const std::array<Coeff, 5>& coeffs() const { return a_; }

  Coeff residual(const Coeff& x, const Coeff& y) const {
    const auto& [a1, a2, a3, a4, a6] = a_;
    return k_.reduce(y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6);
  }
  bool on_curve(const ResiduePoint& P) const { return P.inf || residual(P.x, P.y) == 0; }
  /// F_y and F_x of the defining polynomial at P.
  std::pair<Coeff, Coeff> gradient(const ResiduePoint& P) const {
    const auto& [a1, a2, a3, a4, a6] = a_;
    return {k_.reduce(2 * P.y + a1 * P.x + a3), k_.reduce(a1 * P.y - 3 * P.x * P.x - 2 * a2 * P.x - a4)};
  }
  bool is_smooth(const ResiduePoint& P) const {
    if (P.inf) return true;
    const auto [fy, fx] = gradient(P);
    return fy != 0 || fx != 0;
  }

  ResiduePoint neg(const ResiduePoint& P) const {
    if (P.inf) return P;
    return ResiduePoint::affine(P.x, k_.reduce(-P.y - a_[0] * P.x - a_[2]));
  }
  ResiduePoint add(const ResiduePoint& P, const ResiduePoint& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    const auto& [a1, a2, a3, a4, a6] = a_;
    Coeff lambda, nu;
    if (P.x == Q.x) {
      if (k_.reduce(P.y + Q.y + a1 * Q.x + a3) == 0) return ResiduePoint::infinity();
      const Coeff den = k_.reduce(2 * P.y + a1 * P.x + a3);
      lambda = k_.reduce((3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) * k_.inv(den));
      nu = k_.reduce((-P.x * P.x * P.x + a4 * P.x + 2 * a6 - a3 * P.y) * k_.inv(den));
    } else {
      const Coeff den = k_.inv(k_.reduce(Q.x - P.x));
      lambda = k_.reduce((Q.y - P.y) * den);
      nu = k_.reduce((P.y * Q.x - Q.y * P.x) * den);
    }
    const Coeff x3 = k_.reduce(lambda * lambda + a1 * lambda - a2 - P.x - Q.x);
    const Coeff y3 = k_.reduce(-(lambda + a1) * x3 - nu - a3);
    return ResiduePoint::affine(x3, y3);
  }
  ResiduePoint mul(const ResiduePoint& P, std::int64_t n) const {
    if (n < 0) return mul(neg(P), -n);
    ResiduePoint r, b = P;
    while (n) {
      if (n & 1) r = add(r, b);
      b = add(b, b);
      n >>= 1;
    }
    return r;
  }

  /// The unique singular point, if any.
  std::optional<ResiduePoint> singular_point() const;

 private:
  BaseField k_;
  std::array<Coeff, 5> a_;
};

/// Change of variables x = u^2 x' + r, y = u^3 y' + u^2 s x' + t.
struct Transform {
  Laurent u, r, s, t;

  static Transform identity(const Field& K) { return Transform{K.one(), K.zero(), K.zero(), K.zero()}; }
  /// Apply this, then `next`.
  Transform then(const Transform& n) const {
    return Transform{u * n.u, r + u * u * n.r, s + u * n.s, t + u * u * s * n.r + u * u * u * n.t};
  }
  std::string str() const { return "[" + u.str() + ", " + r.str() + ", " + s.str() + ", " + t.str() + "]"; }
};

struct ReductionType {
  enum class Kind { Good, Additive, SplitMult, NonsplitMult };
  Kind kind = Kind::Good;
  Coeff d;  // square class of the tangent discriminant (NonsplitMult)

  std::string name() const {
    switch (kind) {
      case Kind::Good: return "good";
      case Kind::Additive: return "additive";
      case Kind::SplitMult: return "split_multiplicative";
      case Kind::NonsplitMult: return "nonsplit_multiplicative";
    }
    return "?";
  }
  std::string str() const {
    switch (kind) {
      case Kind::Good: return "Good";
      case Kind::Additive: return "Additive";
      case Kind::SplitMult: return "SplitMult";
      case Kind::NonsplitMult: return "NonsplitMult(" + d.get_str() + ")";
    }
    return "?";
  }
  bool multiplicative() const { return kind == Kind::SplitMult || kind == Kind::NonsplitMult; }
};

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over K, with Delta != 0.
class Curve {
 public:
  Curve(const Field& K, Laurent a1, Laurent a2, Laurent a3, Laurent a4, Laurent a6)
      : K_(K), a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)} {
    const auto& [A1, A2, A3, A4, A6] = a_;
    b2_ = A1 * A1 + 4 * A2;
    b4_ = 2 * A4 + A1 * A3;
    b6_ = A3 * A3 + 4 * A6;
    b8_ = A1 * A1 * A6 + 4 * A2 * A6 - A1 * A3 * A4 + A2 * A3 * A3 - A4 * A4;
    c4_ = b2_ * b2_ - 24 * b4_;
    c6_ = -(b2_ * b2_ * b2_) + 36 * b2_ * b4_ - 216 * b6_;
    disc_ = -(b2_ * b2_ * b8_) - 8 * (b4_ * b4_ * b4_) - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
    if (disc_.is_exact_zero()) fail(ErrorKind::NotElliptic, "discriminant vanishes");
    if (disc_.is_zero_to_precision())
      fail(ErrorKind::PrecisionLoss, "discriminant is " + disc_.str() + ", valuation undecidable");
  }
  static Curve short_form(const Field& K, Laurent A, Laurent B) { return Curve(K, K.zero(), K.zero(), K.zero(), std::move(A), std::move(B)); }

  const Field& field() const { return K_; }
  const Laurent& a1() const { return a_[0]; }
  const Laurent& a2() const { return a_[1]; }
  const Laurent& a3() const { return a_[2]; }
  const Laurent& a4() const { return a_[3]; }
  const Laurent& a6() const { return a_[4]; }
  const std::array<Laurent, 5>& coeffs() const { return a_; }
  const Laurent& b2() const { return b2_; }
  const Laurent& b4() const { return b4_; }
  const Laurent& b6() const { return b6_; }
  const Laurent& b8() const { return b8_; }
  const Laurent& c4() const { return c4_; }
  const Laurent& c6() const { return c6_; }
  const Laurent& disc() const { return disc_; }
  Laurent j() const { return K_.div(c4_ * c4_ * c4_, disc_); }
  bool is_short() const { return a_[0].is_exact_zero() && a_[1].is_exact_zero() && a_[2].is_exact_zero(); }
  bool is_integral_model() const {
    return std::all_of(a_.begin(), a_.end(), [](const Laurent& a) { return is_integral(a); });
  }

  std::string str() const {
    if (is_short()) return "short[" + a_[3].str() + ", " + a_[4].str() + "]";
    std::string s = "[";
    for (std::size_t i = 0; i < 5; ++i) s += (i ? ", " : "") + a_[i].str();
    return s + "]";
  }

  Laurent residual(const Laurent& x, const Laurent& y) const {
    const auto& [A1, A2, A3, A4, A6] = a_;
    return y * y + A1 * x * y + A3 * y - x * x * x - A2 * x * x - A4 * x - A6;
  }
  bool on_curve(const CurvePoint& P) const { return P.inf || residual(P.x, P.y).is_zero_to_precision(); }
  void require_on_curve(const CurvePoint& P) const {
    if (!on_curve(P)) fail(ErrorKind::NotOnCurve, P.str() + " does not satisfy " + str());
  }

  CurvePoint neg(const CurvePoint& P) const {
    if (P.inf) return P;
    return CurvePoint::affine(P.x, -P.y - a_[0] * P.x - a_[2]);
  }

  CurvePoint add(const CurvePoint& P, const CurvePoint& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    const auto& [A1, A2, A3, A4, A6] = a_;
    const Laurent dx = Q.x - P.x;
    Laurent lambda, nu;
    if (dx.is_zero_to_precision()) {
      const Laurent sy = P.y + Q.y + A1 * Q.x + A3;
      if (sy.is_zero_to_precision()) return CurvePoint::infinity();
      if (!(Q.y - P.y).is_zero_to_precision())
        fail(ErrorKind::PrecisionLoss, "x-coordinates agree to precision but the points differ");
      const Laurent den = 2 * P.y + A1 * P.x + A3;
      const Laurent inv = K_.inv(den);
      lambda = (3 * P.x * P.x + 2 * A2 * P.x + A4 - A1 * P.y) * inv;
      nu = (-(P.x * P.x * P.x) + A4 * P.x + 2 * A6 - A3 * P.y) * inv;
    } else {
      const Laurent inv = K_.inv(dx);
      lambda = (Q.y - P.y) * inv;
      nu = (P.y * Q.x - Q.y * P.x) * inv;
    }
    const Laurent x3 = lambda * lambda + A1 * lambda - A2 - P.x - Q.x;
    const Laurent y3 = -(lambda + A1) * x3 - nu - A3;
    return CurvePoint::affine(x3, y3);
  }

  CurvePoint mul(const CurvePoint& P, std::int64_t n) const {
    if (n < 0) return mul(neg(P), -n);
    CurvePoint r, b = P;
    while (n) {
      if (n & 1) r = add(r, b);
      n >>= 1;
      if (n) b = add(b, b);
    }
    return r;
  }

  /// The curve E' in the new coordinates.
  Curve transform(const Transform& T) const {
    const auto& [A1, A2, A3, A4, A6] = a_;
    const Laurent &u = T.u, &r = T.r, &s = T.s, &t = T.t;
    if (u.is_zero_to_precision()) fail(ErrorKind::BadParameter, "transform needs u != 0");
    const Laurent ui = K_.inv(u);
    const Laurent u2 = ui * ui, u3 = u2 * ui, u4 = u2 * u2, u6 = u3 * u3;
    return Curve(K_, (A1 + 2 * s) * ui, (A2 - s * A1 + 3 * r - s * s) * u2, (A3 + r * A1 + 2 * t) * u3,
                 (A4 - s * A3 + 2 * r * A2 - (t + r * s) * A1 + 3 * r * r - 2 * s * t) * u4,
                 (A6 + r * A4 + r * r * A2 + r * r * r - t * A3 - t * t - r * t * A1) * u6);
  }

  /// Residue reduction of an integral model.
  ResidueCurve residue_curve() const {
    require_integral();
    std::array<Coeff, 5> r;
    for (std::size_t i = 0; i < 5; ++i) r[i] = residue(a_[i]);
    return ResidueCurve(K_.base(), r);
  }

  void require_integral() const {
    if (!is_integral_model()) fail(ErrorKind::NotIntegral, "model " + str() + " is not integral");
  }

 private:
  Field K_;
  std::array<Laurent, 5> a_;
  Laurent b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

/// Image of P under the change of variables, and its inverse.
inline CurvePoint transform_point(const Field& K, const Transform& T, const CurvePoint& P) {
  if (P.inf) return P;
  const Laurent ui = K.inv(T.u);
  const Laurent xr = P.x - T.r;
  return CurvePoint::affine(xr * ui * ui, (P.y - T.s * xr - T.t) * ui * ui * ui);
}
inline CurvePoint untransform_point(const Transform& T, const CurvePoint& P) {
  if (P.inf) return P;
  const Laurent u2 = T.u * T.u;
  return CurvePoint::affine(u2 * P.x + T.r, u2 * T.u * P.y + u2 * T.s * P.x + T.t);
}

inline std::optional<ResiduePoint> ResidueCurve::singular_point() const {
  const auto& [a1, a2, a3, a4, a6] = a_;
  const Coeff b2 = k_.reduce(a1 * a1 + 4 * a2), b4 = k_.reduce(2 * a4 + a1 * a3), b6 = k_.reduce(a3 * a3 + 4 * a6);
  const Coeff b8 = k_.reduce(a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4);
  const Coeff d = k_.reduce(-b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6);
  if (d != 0) return std::nullopt;
  if (k_.characteristic() == 2 || k_.characteristic() == 3)
    fail(ErrorKind::CharNotSupported, "singular point search needs residue characteristic not 2 or 3");
  // completing the square and cube: x = X - b2/12, y = Y - (a1 x + a3)/2 gives Y^2 = X^3 + A X + B
  const Coeff c4 = k_.reduce(b2 * b2 - 24 * b4);
  const Coeff c6 = k_.reduce(-b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6);
  const Coeff A = k_.reduce(-c4 * k_.inv(48)), B = k_.reduce(-c6 * k_.inv(864));
  const Coeff X0 = A == 0 ? Coeff(0) : k_.reduce(-3 * B * k_.inv(k_.reduce(2 * A)));
  const Coeff x0 = k_.reduce(X0 - b2 * k_.inv(12));
  const Coeff y0 = k_.reduce(-(a1 * x0 + a3) * k_.inv(2));
  return ResiduePoint::affine(x0, y0);
}

/// Result of the minimal-model search.
struct MinimalModel {
  Curve curve;
  Transform T;  // from the input curve to `curve`
  Gamma v_disc;
  std::string certificate;
};

namespace detail {
inline void require_char(const Field& K) {
  const auto p = K.base().characteristic();
  if (p == 2 || p == 3) fail(ErrorKind::CharNotSupported, "residue characteristic " + std::to_string(p));
}

/// Largest m on the (1/e) grid with 4m <= v(A) and 6m <= v(B).
inline Gamma scaling_exponent(const Laurent& A, const Laurent& B, std::int64_t e) {
  const auto bound = [](const Laurent& z, std::int64_t w) -> std::optional<Gamma> {
    if (z.is_exact_zero()) return std::nullopt;
    return z.valuation_bound() / w;
  };
  const auto ba = bound(A, 4), bb = bound(B, 6);
  Gamma lim;
  if (!ba) {
    lim = *bb;
    if (B.is_zero_to_precision()) fail(ErrorKind::PrecisionLoss, "v(B) undetermined");
  } else if (!bb) {
    lim = *ba;
    if (A.is_zero_to_precision()) fail(ErrorKind::PrecisionLoss, "v(A) undetermined");
  } else {
    lim = min(*ba, *bb);
    // an undetermined valuation only bounds from below; it must not be the binding one
    if ((A.is_zero_to_precision() && *ba <= *bb) || (B.is_zero_to_precision() && *bb <= *ba))
      fail(ErrorKind::PrecisionLoss, "v(A), v(B) undetermined at this precision");
  }
  return Gamma(Gamma(lim.num() * e, lim.den()).floor(), e);
}
}  // namespace detail

/// Short form y^2 = x^3 + Ax + B via an admissible change of variables (u = 1).
inline std::pair<Curve, Transform> short_model(const Curve& C) {
  const Field& K = C.field();
  detail::require_char(K);
  const Coeff half(1, 2);
  const Laurent r = C.b2().scale(Coeff(-1, 12));
  const Laurent s = C.a1().scale(-half);
  const Laurent t = (C.a3() + r * C.a1()).scale(-half);
  const Transform T{K.one(), r, s, t};
  return {C.transform(T), T};
}

/// Minimal model: short form, then scaling by u = t^m with m the largest
/// grid value keeping A and B integral.
inline MinimalModel minimal_model(const Curve& C) {
  const Field& K = C.field();
  auto [S, T] = short_model(C);
  const std::int64_t e = std::lcm(K.ram(), std::lcm(S.a4().ram(), S.a6().ram()));
  const Gamma m = detail::scaling_exponent(S.a4(), S.a6(), e);
  const Transform U{K.t(m), K.zero(), K.zero(), K.zero()};
  const Curve M = S.transform(U);
  const Transform total = T.then(U);
  const Gamma step(1, e);
  std::string cert;
  const Gamma vA = M.a4().is_exact_zero() ? Gamma::infinity() : M.a4().valuation_bound();
  const Gamma vB = M.a6().is_exact_zero() ? Gamma::infinity() : M.a6().valuation_bound();
  if (vA < 4 * step) cert = "v(A)=" + vA.str() + "<" + (4 * step).str();
  if (vB < 6 * step) cert += std::string(cert.empty() ? "" : ", ") + "v(B)=" + vB.str() + "<" + (6 * step).str();
  if (vA == Gamma(0) || vB == Gamma(0)) cert += std::string(cert.empty() ? "" : ", ") + "unit coefficient";
  return MinimalModel{M, total, M.disc().valuation(), cert};
}

/// Reduction type of the minimal model.
inline ReductionType reduction_type_of_model(const Curve& M) {
  if (M.disc().valuation() == Gamma(0)) return ReductionType{ReductionType::Kind::Good, {}};
  const ResidueCurve R = M.residue_curve();
  const auto sp = R.singular_point();
  if (!sp) return ReductionType{ReductionType::Kind::Good, {}};
  const BaseField& k = R.field();
  const auto& [a1, a2, a3, a4, a6] = R.coeffs();
  // tangent cone at the singular point: Y^2 + a1 XY - (3x0 + a2) X^2
  const Coeff q = k.reduce(a1 * a1 + 4 * (3 * sp->x + a2));
  if (q == 0) return ReductionType{ReductionType::Kind::Additive, {}};
  if (k.is_square(q)) return ReductionType{ReductionType::Kind::SplitMult, {}};
  return ReductionType{ReductionType::Kind::NonsplitMult, k.square_class(q)};
}

inline ReductionType reduction_type(const Curve& C) { return reduction_type_of_model(minimal_model(C).curve); }

/// Residue image of P on an integral model.
inline ResiduePoint reduce_point(const Curve& C, const CurvePoint& P) {
  C.require_integral();
  if (P.inf) return ResiduePoint::infinity();
  if (!is_integral(P.x)) {
    if (P.x.is_zero_to_precision()) fail(ErrorKind::PrecisionLoss, "v(x) undetermined");
    return ResiduePoint::infinity();
  }
  return ResiduePoint::affine(residue(P.x), residue(P.y));
}

inline bool in_E0(const Curve& C, const CurvePoint& P) { return C.residue_curve().is_smooth(reduce_point(C, P)); }

/// A point of E(O) over a smooth residue point. For affine targets `anchor`
/// fixes x (or y when the tangent is vertical); at infinity it fixes -x/y.
inline CurvePoint lift_point(const Curve& C, const ResiduePoint& Pt, const Laurent& anchor) {
  const Field& K = C.field();
  const ResidueCurve R = C.residue_curve();
  if (!R.on_curve(Pt)) fail(ErrorKind::NotOnCurve, "residue point " + Pt.str() + " is off the residue curve");
  if (!R.is_smooth(Pt)) fail(ErrorKind::NotSmooth, "residue point " + Pt.str() + " is singular");
  const auto& [A1, A2, A3, A4, A6] = C.coeffs();
  const Gamma target = min(K.prec(), anchor.precision());
  if (Pt.inf) {
    if (anchor.is_exact_zero()) return CurvePoint::infinity();
    if (!(anchor.valuation() > Gamma(0))) fail(ErrorKind::BadParameter, "anchor at infinity must lie in M");
    const Laurent z = -anchor;
    const Laurent z2 = z * z, z3 = z2 * z;
    // w^2 + a1 z w^2 + a3 z^3 w = w^3 + a2 z^2 w^2 + a4 z^4 w + a6 z^6 in ascending powers of w
    const Poly f{-(A6 * z3 * z3), A3 * z3 - A4 * z2 * z2, K.one() + A1 * z - A2 * z2, -K.one()};
    const Laurent w = hensel_root(f, K.one(), target);
    const Laurent zi = K.inv(z);
    return CurvePoint::affine(w * zi * zi, w * zi * zi * zi);
  }
  const auto [fy, fx] = R.gradient(Pt);
  if (!((anchor - K.constant(fy != 0 ? Pt.x : Pt.y)).valuation_bound() > Gamma(0)))
    fail(ErrorKind::BadParameter, "anchor does not reduce to the residue point");
  if (fy != 0) {
    const Laurent& x = anchor;
    const Poly f{-(x * x * x + A2 * x * x + A4 * x + A6), A1 * x + A3, K.one()};
    return CurvePoint::affine(x, hensel_root(f, K.constant(Pt.y), target));
  }
  const Laurent& y = anchor;
  const Poly f{y * y + A3 * y - A6, A1 * y - A4, -A2, -K.one()};
  return CurvePoint::affine(hensel_root(f, K.constant(Pt.x), target), y);
}

struct FiltrationData {
  Gamma level;                 // v(-x/y) on E0^-, 0 on E0 \ E0^-, inf at infinity
  std::optional<Laurent> param;  // -x/y on E0^-
};

inline FiltrationData filtration(const Curve& C, const CurvePoint& P) {
  if (!in_E0(C, P)) fail(ErrorKind::NotInE0, P.str() + " reduces to the singular point");
  if (P.inf) return FiltrationData{Gamma::infinity(), C.field().zero()};
  if (reduce_point(C, P).inf) {
    const Laurent f = -(P.x * C.field().inv(P.y));
    return FiltrationData{f.valuation(), f};
  }
  return FiltrationData{Gamma(0), std::nullopt};
}

inline bool in_E_r(const Curve& C, const CurvePoint& P, const Gamma& r, bool open = false) {
  const Gamma l = filtration(C, P).level;
  return open ? l > r : l >= r;
}

/// Class of P in E_r / E_r^- = B_r / B_r^- = k: residue of (-x/y) t^-r.
inline Coeff quotient_class(const Curve& C, const CurvePoint& P, const Gamma& r) {
  if (!(r > Gamma(0))) fail(ErrorKind::BadParameter, "quotient level must be positive");
  const FiltrationData fd = filtration(C, P);
  if (fd.level < r) fail(ErrorKind::BadParameter, P.str() + " is not in E_" + r.str());
  if (fd.level > r) return Coeff(0);
  return residue(fd.param->shift(-r));
}

/// Some P in E0 with nP = Q and reduce(P) = target; NotDivisible when
/// n * target differs from the reduction of Q.
inline CurvePoint divide_point(const Curve& C, const CurvePoint& Q, std::int64_t n, const ResiduePoint& target) {
  const Field& K = C.field();
  if (n < 1) fail(ErrorKind::BadParameter, "n must be positive");
  const auto p = K.base().characteristic();
  if (p != 0 && static_cast<std::uint64_t>(n) % p == 0) fail(ErrorKind::Unsupported, "p divides n");
  C.require_on_curve(Q);
  if (Q.inf) return Q;
  if (!in_E0(C, Q)) fail(ErrorKind::NotInE0, Q.str() + " is not in E0");
  const ResidueCurve R = C.residue_curve();
  if (!R.on_curve(target) || !R.is_smooth(target)) fail(ErrorKind::NotSmooth, "target must be a smooth residue point");
  if (!(R.mul(target, n) == reduce_point(C, Q)))
    fail(ErrorKind::NotDivisible, "n * " + target.str() + " != " + reduce_point(C, Q).str());
  CurvePoint P0;
  if (!target.inf) {
    const auto [fy, fx] = R.gradient(target);
    P0 = lift_point(C, target, K.constant(fy != 0 ? target.x : target.y));
  }
  // remaining defect lies in E0^-: divide it in the formal group by Newton steps
  const CurvePoint D = C.add(Q, C.neg(C.mul(P0, n)));
  if (D.inf) return P0;
  const FiltrationData fd = filtration(C, D);
  const Laurent goal = *fd.param;
  const Coeff inv_n = K.base().inv(K.base().from_int(static_cast<long>(n)));
  Laurent z = goal.scale(inv_n);
  const Gamma target_prec = goal.precision().is_finite() ? goal.precision() : K.prec();
  for (int it = 0; it < 400; ++it) {
    const CurvePoint S = lift_point(C, ResiduePoint::infinity(), z.truncate(target_prec));
    const CurvePoint nS = C.mul(S, n);
    const Laurent fz = nS.inf ? K.zero() : -(nS.x * K.inv(nS.y));
    const Laurent err = fz - goal;
    if (err.is_zero_to_precision()) return C.add(P0, S);
    z = (z - err.scale(inv_n)).approximant();
  }
  fail(ErrorKind::NoConvergence, "formal-group division did not converge");
}

/// Component map for y^2 + xy = x^3 + a4 x + a6 with v(a4) = v(a6) = v(Delta) = l > 0.
inline Gamma component_w(const Curve& C, const CurvePoint& P) {
  const Gamma l = C.disc().valuation();
  const bool shape = C.a1() == C.field().one() && C.a2().is_exact_zero() && C.a3().is_exact_zero() && l > Gamma(0) &&
                     !C.a4().is_zero_to_precision() && C.a4().valuation() == l && !C.a6().is_zero_to_precision() &&
                     C.a6().valuation() == l;
  if (!shape) fail(ErrorKind::WrongShape, "component map needs y^2 + xy = x^3 + a4 x + a6 with v(a4) = v(a6) = v(Delta) > 0");
  if (P.inf || in_E0(C, P)) return Gamma(0);
  const Gamma vy = P.y.valuation(), vxy = (P.x + P.y).valuation();
  if (vy == vxy) return l / 2;
  if (vy < vxy) return P.x.valuation();
  return -P.x.valuation();
}

inline Gamma fold_mod(const Gamma& w, const Gamma& l) {
  // representative in (-l/2, l/2]
  Gamma r = w - Gamma((w / l).floor()) * l;
  if (r > l / 2) r = r - l;
  return r;
}

}  // namespace vfg
