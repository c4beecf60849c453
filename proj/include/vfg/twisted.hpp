#pragma once

#include <optional>
#include <string>

#include "vfg/valfield.hpp"

namespace vfg {

/// L = K(sqrt d) with d a non-square, normalized so that v(d) is 0 or 1.
class QuadExt {
 public:
  QuadExt(const Field& K, const Laurent& d) : K_(K) {
    if (K.ram() != 1) fail(ErrorKind::Unsupported, "twisted groups need the value group Z (e = 1)");
    if (K.base().characteristic() == 2) fail(ErrorKind::CharNotSupported, "residue characteristic 2");
    if (d.is_zero_to_precision()) fail(ErrorKind::ZeroArgument, "d must be nonzero");
    const Gamma v = d.valuation();
    const std::int64_t k = v.floor();
    const std::int64_t half = k >= 0 ? k / 2 : -((1 - k) / 2);
    d_ = d.shift(Gamma(-2 * half));
    vd_ = static_cast<int>(k - 2 * half);
    if (nth_power(K, d_, 2).is_power) fail(ErrorKind::BadParameter, "d = " + d.str() + " is a square in K");
  }

  const Field& field() const { return K_; }
  const Laurent& d() const { return d_; }
  bool ramified() const { return vd_ == 1; }
  /// 1/2 in the ramified case, 0 otherwise: the valuation of sqrt d.
  Gamma shift() const { return ramified() ? Gamma(1, 2) : Gamma(0); }
  std::string str() const { return "K(sqrt(" + d_.str() + "))"; }

 private:
  Field K_;
  Laurent d_;
  int vd_ = 0;
};

/// a + b sqrt d with a^2 - d b^2 = 1.
struct TwistedElement {
  Laurent a, b;

  std::string str() const { return "(" + a.str() + ", " + b.str() + ")"; }
};

inline Laurent gd_norm(const QuadExt& L, const Laurent& a, const Laurent& b) { return a * a - L.d() * b * b; }

inline TwistedElement gd_element(const QuadExt& L, Laurent a, Laurent b) {
  const Laurent n = gd_norm(L, a, b) - L.field().one();
  if (!n.is_zero_to_precision()) fail(ErrorKind::NormViolation, "norm of (" + a.str() + ", " + b.str() + ") is not 1");
  return TwistedElement{std::move(a), std::move(b)};
}

inline TwistedElement gd_identity(const QuadExt& L) { return TwistedElement{L.field().one(), L.field().zero()}; }

inline TwistedElement gd_mul(const QuadExt& L, const TwistedElement& x, const TwistedElement& y) {
  gd_element(L, x.a, x.b);
  gd_element(L, y.a, y.b);
  return gd_element(L, x.a * y.a + L.d() * x.b * y.b, x.a * y.b + y.a * x.b);
}

inline TwistedElement gd_inv(const QuadExt& L, const TwistedElement& x) { return gd_element(L, x.a, -x.b); }

/// (1 + s sqrt d) / (1 - s sqrt d): every element other than -1 arises this way.
inline TwistedElement gd_from_parameter(const QuadExt& L, const Laurent& s) {
  const Field& K = L.field();
  const Laurent ds2 = L.d() * s * s;
  const Laurent den = K.inv(K.one() - ds2);
  return gd_element(L, (K.one() + ds2) * den, (s + s) * den);
}

/// v(a + b sqrt d) on L: min(v(a), v(b) + v(sqrt d)). Infinity for exact zero.
inline Gamma gd_valuation(const QuadExt& L, const Laurent& a, const Laurent& b) {
  if (a.is_exact_zero() && b.is_exact_zero()) return Gamma::infinity();
  const Gamma h = L.shift();
  const Gamma ba = a.valuation_bound(), bb = b.valuation_bound() + h;
  // the smaller candidate must be an actual valuation, not just a bound
  if (ba < bb || (ba == bb && !a.is_zero_to_precision())) {
    if (a.is_zero_to_precision()) fail(ErrorKind::PrecisionLoss, "v(a) undetermined");
    return ba;
  }
  if (b.is_zero_to_precision()) fail(ErrorKind::PrecisionLoss, "v(b) undetermined");
  return bb;
}

/// 1/2 v(N(a + b sqrt d)) when N is determinable.
inline std::optional<Gamma> gd_half_norm_valuation(const QuadExt& L, const Laurent& a, const Laurent& b) {
  const Laurent n = gd_norm(L, a, b);
  if (n.is_zero_to_precision()) return std::nullopt;
  return n.valuation() / 2;
}

struct BoundaryDatum {
  bool ramified = false;
  Coeff abar, bbar;  // unramified: a point of G(dbar)(k)
  Laurent f;         // ramified: b
  Gamma level;       // ramified: v(x - 1) = v(b) + 1/2
};

inline bool in_kernel(const QuadExt& L, const TwistedElement& x) {
  if (residue(x.a) != 1) return false;
  return L.ramified() || x.b.valuation_bound() > Gamma(0);
}

inline BoundaryDatum gd_boundary_map(const QuadExt& L, const TwistedElement& x) {
  gd_element(L, x.a, x.b);
  if (!L.ramified()) return BoundaryDatum{false, residue(x.a), residue(x.b), {}, {}};
  if (residue(x.a) != 1) fail(ErrorKind::NotInKernel, x.str() + " reduces to -1");
  return BoundaryDatum{true, 1, 0, x.b, gd_valuation(L, x.a - L.field().one(), x.b)};
}

/// The kernel element with f-value b: a = sqrt(1 + d b^2) near 1.
inline TwistedElement gd_solve_from_b(const QuadExt& L, const Laurent& b) {
  const Field& K = L.field();
  if (b.is_exact_zero()) return gd_identity(L);
  const Gamma vb = b.valuation_bound();
  if (L.ramified() ? vb < Gamma(0) : !(vb > Gamma(0)))
    fail(ErrorKind::BadParameter, std::string("kernel needs v(b) ") + (L.ramified() ? ">= 0" : "> 0"));
  const Poly f{-(K.one() + L.d() * b * b), K.zero(), K.one()};
  return gd_element(L, hensel_root(f, K.one(), min(K.prec(), b.precision() + vb + L.d().valuation())), b);
}

struct LevelData {
  Gamma level;      // v(x - 1) in L
  bool in_r = false;
  bool in_r_open = false;
  Coeff quotient;   // class of x in G(d)_r / G(d)_r^- (0 unless x lies in G(d)_r)
};

inline LevelData gd_level(const QuadExt& L, const TwistedElement& x, const Gamma& r) {
  if (!(r > Gamma(0))) fail(ErrorKind::BadParameter, "level must be positive");
  if (!in_kernel(L, x)) fail(ErrorKind::NotInKernel, x.str() + " is not in G(d)^-");
  const Gamma lv = gd_valuation(L, x.a - L.field().one(), x.b);
  LevelData out{lv, lv >= r, lv > r, 0};
  if (lv == r) out.quotient = residue(x.b.shift(-(r - L.shift())));
  return out;
}

}  // namespace vfg
