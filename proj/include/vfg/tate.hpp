#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vfg/elliptic.hpp"

namespace vfg {

/// Power series in q over Z (stored in Q), known modulo q^order. The constant
/// term is index 0.
struct QSeries {
  std::vector<Coeff> c;

  std::int64_t order() const { return static_cast<std::int64_t>(c.size()); }
  /// As an element of Q((q)) with q written as t, carrying O(q^order).
  Laurent as_laurent() const {
    std::vector<Laurent::Term> ts;
    for (std::size_t n = 0; n < c.size(); ++n)
      if (c[n] != 0) ts.emplace_back(static_cast<std::int64_t>(n), c[n]);
    return Laurent::from_terms(ts, BaseField::rationals(), 1, order());
  }
  std::string str() const { return as_laurent().str(); }
};

namespace detail {
inline Coeff sigma(std::int64_t n, int k) {
  mpz_class s = 0;
  for (std::int64_t d = 1; d <= n; ++d)
    if (n % d == 0) {
      mpz_class p;
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k));
      s += p;
    }
  return Coeff(s);
}
}  // namespace detail

/// a4(q) and a6(q) modulo q^M.
inline std::pair<QSeries, QSeries> coeff_series(std::int64_t M) {
  if (M < 1) fail(ErrorKind::BadParameter, "series order must be positive");
  QSeries a4{std::vector<Coeff>(static_cast<std::size_t>(M))}, a6{std::vector<Coeff>(static_cast<std::size_t>(M))};
  for (std::int64_t n = 1; n < M; ++n) {
    const Coeff s3 = detail::sigma(n, 3), s5 = detail::sigma(n, 5);
    a4.c[static_cast<std::size_t>(n)] = -5 * s3;
    a6.c[static_cast<std::size_t>(n)] = -(5 * s3 + 7 * s5) / 12;
  }
  return {a4, a6};
}

/// q * prod_{n >= 1} (1 - q^n)^24 modulo q^M.
inline QSeries delta_product(std::int64_t M) {
  const Field Kq(BaseField::rationals(), 1, Gamma(M));
  Laurent p = Kq.t().truncate(Gamma(M));
  for (std::int64_t n = 1; n < M; ++n) {
    const Laurent f = Kq.one() - Kq.t(Gamma(n));
    for (int i = 0; i < 24; ++i) p = (p * f).truncate(Gamma(M));
  }
  QSeries out{std::vector<Coeff>(static_cast<std::size_t>(M))};
  for (const auto& [k, c] : p.terms()) out.c[static_cast<std::size_t>(k)] = c;
  return out;
}

struct DeltaCheck {
  bool pass = false;
  Laurent from_coeffs, product;
};

/// Discriminant of y^2 + xy = x^3 + a4(q) x + a6(q) against the product formula, mod q^M.
inline DeltaCheck delta_product_check(std::int64_t M) {
  const Field Kq(BaseField::rationals(), 1, Gamma(M));
  const auto [a4, a6] = coeff_series(M);
  const Curve C(Kq, Kq.one(), Kq.zero(), Kq.zero(), a4.as_laurent(), a6.as_laurent());
  const Laurent prod = delta_product(M).as_laurent();
  return DeltaCheck{C.disc() == prod, C.disc(), prod};
}

/// Element of Q[u, u^-1][[q]] mod q^M; index d holds the q^d coefficient.
class QUSeries {
 public:
  QUSeries(std::int64_t M) : c_(static_cast<std::size_t>(M), Laurent::zero()) {}  // NOLINT

  std::int64_t order() const { return static_cast<std::int64_t>(c_.size()); }
  Laurent& operator[](std::int64_t d) { return c_[static_cast<std::size_t>(d)]; }
  const Laurent& operator[](std::int64_t d) const { return c_[static_cast<std::size_t>(d)]; }

  friend QUSeries operator+(const QUSeries& a, const QUSeries& b) {
    QUSeries r(a.order());
    for (std::int64_t d = 0; d < a.order(); ++d) r[d] = a[d] + b[d];
    return r;
  }
  friend QUSeries operator-(const QUSeries& a, const QUSeries& b) {
    QUSeries r(a.order());
    for (std::int64_t d = 0; d < a.order(); ++d) r[d] = a[d] - b[d];
    return r;
  }
  friend QUSeries operator*(const QUSeries& a, const QUSeries& b) {
    QUSeries r(a.order());
    for (std::int64_t i = 0; i < a.order(); ++i) {
      if (a[i].is_exact_zero()) continue;
      for (std::int64_t j = 0; i + j < a.order(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    }
    return r;
  }
  /// Constant-in-u series from a scalar q-series.
  static QUSeries from_q(const QSeries& s, std::int64_t M) {
    QUSeries r(M);
    for (std::int64_t d = 0; d < std::min(M, s.order()); ++d) r[d] = Laurent::constant(s.c[static_cast<std::size_t>(d)]);
    return r;
  }
  static QUSeries from_u(const Laurent& p, std::int64_t M) {
    QUSeries r(M);
    r[0] = p;
    return r;
  }

 private:
  std::vector<Laurent> c_;
};

struct FormalReport {
  std::int64_t order = 0;
  bool pass = false;
  std::int64_t first_nonzero = -1;  // q-degree of the first nonzero residual coefficient
  std::string residual;             // that coefficient, as a Laurent polynomial in u
};

/// Expands the curve equation at (X(u,q), Y(u,q)) in Q(u)[[q]] mod q^M.
/// Multiplying through by (1-u)^6 keeps every coefficient a Laurent polynomial in u.
/// `a4_perturbation` is added to a4 (used to show the check is not vacuous).
inline FormalReport verify_formal(std::int64_t M, const Coeff& a4_perturbation = 0) {
  if (M < 2) fail(ErrorKind::BadParameter, "formal verification needs order >= 2");
  auto [a4, a6] = coeff_series(M);
  a4.c[1] += a4_perturbation;
  const Laurent u = Laurent::monomial(1, Gamma(1)), one = Laurent::from_int(1);
  const Laurent w = one - u;
  std::vector<Laurent> up(static_cast<std::size_t>(M)), un(static_cast<std::size_t>(M));
  up[0] = un[0] = one;
  for (std::size_t m = 1; m < up.size(); ++m) {
    up[m] = Laurent::monomial(1, Gamma(static_cast<std::int64_t>(m)));
    un[m] = Laurent::monomial(1, Gamma(-static_cast<std::int64_t>(m)));
  }
  // Xh = (1-u)^2 X, Yh = (1-u)^3 Y
  QUSeries Xh(M), Yh(M);
  Xh[0] = u;
  Yh[0] = u * u;
  const Laurent w2 = w * w, w3 = w2 * w;
  for (std::int64_t d = 1; d < M; ++d) {
    Laurent ad, bd;
    for (std::int64_t m = 1; m <= d; ++m) {
      if (d % m) continue;
      const auto um = up[static_cast<std::size_t>(m)], uinv = un[static_cast<std::size_t>(m)];
      ad = ad + (um + uinv - Laurent::from_int(2)).scale(Coeff(m));
      bd = bd + um.scale(Coeff((m - 1) * m / 2)) - uinv.scale(Coeff(m * (m + 1) / 2)) + Laurent::from_int(m);
    }
    Xh[d] = ad * w2;
    Yh[d] = bd * w3;
  }
  const QUSeries A4 = QUSeries::from_q(a4, M), A6 = QUSeries::from_q(a6, M);
  const QUSeries W = QUSeries::from_u(w, M), W4 = QUSeries::from_u(w2 * w2, M), W6 = QUSeries::from_u(w3 * w3, M);
  const QUSeries R = Yh * Yh + Xh * Yh * W - Xh * Xh * Xh - A4 * Xh * W4 - A6 * W6;
  FormalReport rep{M, true, -1, "0"};
  for (std::int64_t d = 0; d < M; ++d)
    if (!R[d].is_exact_zero()) {
      rep.pass = false;
      rep.first_nonzero = d;
      rep.residual = R[d].str();
      break;
    }
  return rep;
}

/// E_q: y^2 + xy = x^3 + a4(q) x + a6(q), with v(Delta) = v(q) certified.
struct TateCurve {
  Laurent q;
  Gamma ell;
  Curve curve;
};

namespace detail {
/// sum_n s_n q^n with the result known modulo t^P.
inline Laurent eval_qseries(const QSeries& s, const Laurent& q, const Gamma& P, const Field& K) {
  Laurent acc = K.zero().truncate(P), qn = K.one();
  for (std::int64_t n = 1; n < s.order(); ++n) {
    qn = (qn * q).truncate(P);
    acc = acc + qn.scale(s.c[static_cast<std::size_t>(n)]);
  }
  return acc;
}
}  // namespace detail

inline TateCurve tate_curve(const Field& K, const Laurent& q) {
  if (q.is_zero_to_precision() || !(q.valuation() > Gamma(0)))
    fail(ErrorKind::BadParameter, "Tate parameter needs 0 < v(q) < infinity");
  const Gamma ell = q.valuation();
  const Gamma P = K.prec();
  // the q^n term has valuation n*ell; everything at or past P is absorbed in O(t^P)
  const std::int64_t M = (P / ell).floor() + 2;
  const auto [a4s, a6s] = coeff_series(M);
  const Laurent a4 = detail::eval_qseries(a4s, q, P, K), a6 = detail::eval_qseries(a6s, q, P, K);
  Curve C(K, K.one(), K.zero(), K.zero(), a4, a6);
  if (C.disc().valuation() != ell)
    fail(ErrorKind::PrecisionLoss, "v(Delta) = " + C.disc().valuation().str() + " differs from v(q)");
  return TateCurve{q, ell, C};
}

/// u q^m with 0 <= v(u q^m) < v(q).
inline Laurent domain_reduce(const TateCurve& T, const Laurent& u) {
  if (u.is_exact_zero()) fail(ErrorKind::ZeroArgument, "Tate map at 0");
  const Gamma r = u.valuation();
  const std::int64_t m = (r / T.ell).floor();
  if (m == 0) return u;
  const Field& K = T.curve.field();
  return u * K.pow(T.q, -m);
}

/// t(u) = (X(u,q), Y(u,q)), extended to K^x with kernel q^Z.
inline CurvePoint tate_map(const TateCurve& T, const Laurent& u0) {
  const Field& K = T.curve.field();
  Laurent u = domain_reduce(T, u0);
  // move into (-ell/2, ell/2]: keeps every series term of positive valuation d(ell - |r|)
  if (u.valuation() > T.ell / 2) u = u * K.inv(T.q);
  const Laurent one = K.one();
  const Laurent w = one - u;
  if (w.is_exact_zero()) return CurvePoint::infinity();
  if (w.is_zero_to_precision()) fail(ErrorKind::PrecisionLoss, "u agrees with 1 to its precision");
  const Gamma r = u.valuation(), s = w.valuation();
  const Gamma ar = r < Gamma(0) ? -r : r, as = s < Gamma(0) ? -s : s;
  const Gamma P = K.prec();
  const Gamma R = P + 3 * as + 2 * ar + Gamma(1);
  const Laurent wi = w.inverse(R);
  const Laurent wi2 = wi * wi;
  Laurent X = u * wi2, Y = u * u * wi2 * wi;
  X = X.truncate(P);
  Y = Y.truncate(P);
  const Gamma gap = T.ell - ar;  // > 0
  const std::int64_t D = (P / gap).ceil();
  const Laurent ui = u.inverse(P + ar + Gamma(1));
  // u^m and u^-m are needed modulo t^(P - m ell) at most
  std::vector<Laurent> up{one}, un{one};
  for (std::int64_t m = 1; m <= D; ++m) {
    const Gamma cut = P - m * T.ell + m * ar + Gamma(1);
    up.push_back((up.back() * u).truncate(max(cut, P - m * T.ell)));
    un.push_back((un.back() * ui).truncate(max(cut, P - m * T.ell)));
  }
  Laurent qd = one;
  for (std::int64_t d = 1; d <= D; ++d) {
    qd = (qd * T.q).truncate(P + D * ar);
    Laurent ad = K.zero(), bd = K.zero();
    for (std::int64_t m = 1; m <= d; ++m) {
      if (d % m) continue;
      const Laurent& um = up[static_cast<std::size_t>(m)];
      const Laurent& uin = un[static_cast<std::size_t>(m)];
      ad = ad + (um + uin - K.from_int(2)).scale(Coeff(m));
      bd = bd + um.scale(Coeff((m - 1) * m / 2)) - uin.scale(Coeff(m * (m + 1) / 2)) + K.from_int(m);
    }
    X = X + (qd * ad).truncate(P);
    Y = Y + (qd * bd).truncate(P);
  }
  return CurvePoint::affine(X, Y);
}

struct Region {
  enum class Kind { E0, U, V, W };
  Kind kind = Kind::E0;
  Gamma r;

  std::string str() const {
    switch (kind) {
      case Kind::E0: return "E0";
      case Kind::U: return "U(" + r.str() + ")";
      case Kind::V: return "V(" + r.str() + ")";
      case Kind::W: return "W";
    }
    return "?";
  }
};

/// Which coset of E0 the point lies in.
inline Region region_classify(const TateCurve& T, const CurvePoint& P) {
  T.curve.require_on_curve(P);
  if (in_E0(T.curve, P)) return Region{Region::Kind::E0, Gamma(0)};
  const Laurent s = P.x + P.y;
  if (P.y.is_zero_to_precision() || s.is_zero_to_precision())
    fail(ErrorKind::PrecisionLoss, "v(y) or v(x + y) undetermined");
  const Gamma vy = P.y.valuation(), vs = s.valuation();
  if (vy > vs) return Region{Region::Kind::U, vs};
  if (vs > vy) return Region{Region::Kind::V, vy};
  if (vy != T.ell / 2) fail(ErrorKind::NotOnCurve, "v(y) = v(x + y) away from v(q)/2");
  return Region{Region::Kind::W, vy};
}

}  // namespace vfg
