#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vfg/field.hpp"

namespace vfg {

/// Element of RV = K^x / (1 + M), encoded by (valuation, leading coefficient).
struct RV {
  Gamma gamma;
  Coeff lead;

  friend bool operator==(const RV&, const RV&) = default;
  std::string str() const { return "(" + gamma.str() + ", " + lead.get_str() + ")"; }
};

/// Residue of an integral element: coefficient of t^0.
inline Coeff residue(const Laurent& x) {
  if (x.is_zero_to_precision()) {
    if (x.precision() > Gamma(0)) return Coeff(0);
    fail(ErrorKind::PrecisionLoss, "residue of " + x.str() + " undetermined");
  }
  if (x.valuation() < Gamma(0)) fail(ErrorKind::NotIntegral, "residue of non-integral element " + x.str());
  return x.coeff_at(Gamma(0));
}

inline RV rv(const Laurent& x) {
  if (x.is_exact_zero()) fail(ErrorKind::ZeroArgument, "rv(0)");
  return RV{x.valuation(), x.lead()};
}

inline RV rv_mul(const BaseField& k, const RV& a, const RV& b) { return RV{a.gamma + b.gamma, k.mul(a.lead, b.lead)}; }

/// Splitting of RV -> Gamma: g -> rv(t^g).
inline RV rv_section(const Gamma& g) { return RV{g, Coeff(1)}; }

/// Polynomial with coefficients in K, ascending degree.
using Poly = std::vector<Laurent>;

inline Laurent poly_eval(const Poly& f, const Laurent& x) {
  if (f.empty()) return Laurent::zero(x.base(), x.ram());
  Laurent acc = f.back();
  for (std::size_t i = f.size() - 1; i-- > 0;) acc = acc * x + f[i];
  return acc;
}

inline Poly poly_derivative(const Poly& f) {
  Poly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i].scale(Coeff(static_cast<long>(i))));
  return d;
}

namespace detail {
inline bool reached(const Laurent& fx, const Gamma& bound) {
  return fx.is_zero_to_precision() ? fx.precision() >= bound : fx.valuation() >= bound;
}
}  // namespace detail

/// Newton-Hensel lifting of a simple root: from x0 with v(f(x0)) > 2 v(f'(x0))
/// returns x with f(x) = 0 modulo t^target and v(x - x0) > v(f'(x0)).
/// Exact roots are returned exactly; otherwise the result carries precision `target`.
inline Laurent hensel_root(const Poly& f, const Laurent& x0, const Gamma& target) {
  const Poly df = poly_derivative(f);
  Laurent x = x0.approximant();
  Laurent fx = poly_eval(f, x);
  if (fx.is_exact_zero()) return x;
  Laurent dfx = poly_eval(df, x);
  if (dfx.is_zero_to_precision()) fail(ErrorKind::NoConvergence, "derivative vanishes at the starting point");
  const Gamma m = dfx.valuation();
  if (!(fx.valuation_bound() > 2 * m))
    fail(ErrorKind::NoConvergence, "Newton criterion v(f(x0)) > 2 v(f'(x0)) fails");
  const Gamma goal = target + m;
  for (int iter = 0; iter < 256; ++iter) {
    if (fx.is_exact_zero()) return x;
    if (detail::reached(fx, goal)) return x.truncate(target);
    if (fx.is_zero_to_precision()) fail(ErrorKind::PrecisionLoss, "polynomial coefficients too imprecise for target " + target.str());
    const Gamma vf = fx.valuation();
    // relative precision for the correction: enough that x - delta is right below `target`
    const Gamma rel = max(target - vf + m + Gamma(1), Gamma(1));
    const Laurent delta = fx * dfx.inverse(rel);
    x = x - delta.exact_truncation(target);
    fx = poly_eval(f, x);
    dfx = poly_eval(df, x);
    if (dfx.is_zero_to_precision() || dfx.valuation() != m) fail(ErrorKind::NoConvergence, "Newton iteration left the basin");
  }
  fail(ErrorKind::NoConvergence, "Newton iteration did not converge");
}

struct NthPowerResult {
  bool is_power = false;
  std::optional<Laurent> root;
};

/// Decide x in (K^x)^n and produce a root. The root is exact when x is an exact
/// monomial; otherwise it is lifted by Hensel to the precision x supports
/// (relative working precision of K for exact non-monomials).
inline NthPowerResult nth_power(const Field& K, const Laurent& x, std::int64_t n) {
  if (n < 1) fail(ErrorKind::BadParameter, "nth power needs n >= 1");
  if (x.is_exact_zero()) fail(ErrorKind::ZeroArgument, "nth power test of 0");
  const auto p = x.base().characteristic();
  if (p != 0 && static_cast<std::uint64_t>(n) % p == 0)
    fail(ErrorKind::Unsupported, "p divides n: Hensel lifting unavailable");
  const Laurent xe = x.embed(std::lcm(x.ram(), K.ram()));
  const std::int64_t e = xe.ram();
  const std::int64_t k = xe.valuation_units();
  if (k % n != 0) return {};
  const auto c = x.base().nth_root(xe.lead(), static_cast<std::uint64_t>(n));
  if (!c) return {};
  const Gamma v(k, e);
  const Laurent w = xe.shift(-v).scale(x.base().inv(xe.lead()));  // unit with residue 1
  const Laurent scale = Laurent::monomial(*c, Gamma(k / n, e), x.base(), e);
  if (w.is_exact() && w.is_monomial()) return {true, scale};
  const Gamma target = w.is_exact() ? K.prec() : w.precision();
  Poly f(static_cast<std::size_t>(n + 1), Laurent::zero(x.base(), e));
  f[0] = -w;
  f[static_cast<std::size_t>(n)] = Laurent::from_int(1, x.base(), e);
  const Laurent y = hensel_root(f, Laurent::from_int(1, x.base(), e), target);
  return {true, scale * y};
}

struct OOMembership {
  bool in_o = false;
  bool in_O = false;
};

/// Membership of x in o(a) = v^-1 o(v(a)) and O(a) = v^-1 O(v(a)) for the
/// archimedean value group Q: o(v(a)) = {0}, O(v(a)) = Gamma. The element 0
/// (v = infinity) is counted in both.
inline OOMembership oO_membership(const Laurent& x, const Laurent& a) {
  if (a.is_exact_zero()) fail(ErrorKind::ZeroArgument, "o(a) needs a != 0");
  const Gamma va = a.valuation();
  const Gamma bound = va < Gamma(0) ? -va : va;
  const Gamma vx = x.valuation();
  if (vx.is_infinite()) return {true, true};
  const Gamma ax = vx < Gamma(0) ? -vx : vx;
  // |n vx| < |va| for all n > 0 forces vx = 0 in Q; |vx| < n |va| for some n iff va != 0
  const bool in_o = ax == Gamma(0) && bound > Gamma(0);
  const bool in_O = bound > Gamma(0);
  return {in_o, in_O};
}

}  // namespace vfg
