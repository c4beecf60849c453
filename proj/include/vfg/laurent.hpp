#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vfg/base_field.hpp"
#include "vfg/error.hpp"
#include "vfg/gamma.hpp"

namespace vfg {

/// Truncated Laurent/Puiseux series sum c_k t^(k/e) over Q or F_p.
///
/// Terms are stored sparsely with exponents in units of 1/e. An element is
/// either exact (a finite Laurent polynomial) or carries an absolute precision
/// N meaning the true value is known modulo t^(N/e); every stored exponent is
/// below N. Values are immutable once built.
class Laurent {
 public:
  using Term = std::pair<std::int64_t, Coeff>;

  Laurent() = default;
  explicit Laurent(BaseField base, std::int64_t e = 1) : base_(base), e_(e) {
    if (e < 1) fail(ErrorKind::BadParameter, "ramification index must be positive");
  }

  static Laurent zero(BaseField base = {}, std::int64_t e = 1) { return Laurent(base, e); }
  static Laurent constant(const Coeff& c, BaseField base = {}, std::int64_t e = 1) {
    return monomial(c, Gamma(0), base, e);
  }
  static Laurent from_int(long n, BaseField base = {}, std::int64_t e = 1) {
    return constant(Coeff(n), base, e);
  }
  /// c * t^g; g must lie on the (1/e)Z grid.
  static Laurent monomial(const Coeff& c, const Gamma& g, BaseField base = {}, std::int64_t e = 1) {
    Laurent r(base, e);
    const Coeff cc = base.reduce(c);
    if (cc != 0) r.terms_.emplace_back(g.scaled(e), cc);
    return r;
  }
  /// The element 0 + O(t^g).
  static Laurent big_o(const Gamma& g, BaseField base = {}, std::int64_t e = 1) {
    Laurent r(base, e);
    if (g.is_finite()) r.prec_ = g.scaled(e);
    return r;
  }
  /// Build from raw (exponent-in-1/e-units, coefficient) terms; sorts, merges, drops zeros.
  static Laurent from_terms(std::vector<Term> terms, BaseField base, std::int64_t e,
                            std::optional<std::int64_t> prec_units = std::nullopt) {
    Laurent r(base, e);
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    for (auto& [k, c] : terms) {
      if (prec_units && k >= *prec_units) continue;
      Coeff cc = base.reduce(c);
      if (!r.terms_.empty() && r.terms_.back().first == k) {
        r.terms_.back().second = base.add(r.terms_.back().second, cc);
        if (r.terms_.back().second == 0) r.terms_.pop_back();
      } else if (cc != 0) {
        r.terms_.emplace_back(k, std::move(cc));
      }
    }
    r.prec_ = prec_units;
    return r;
  }

  const BaseField& base() const { return base_; }
  std::int64_t ram() const { return e_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::optional<std::int64_t> prec_units() const { return prec_; }

  bool is_exact() const { return !prec_.has_value(); }
  /// Absolute precision; infinity when exact.
  Gamma precision() const { return prec_ ? Gamma(*prec_, e_) : Gamma::infinity(); }
  bool is_exact_zero() const { return terms_.empty() && !prec_; }
  /// No nonzero terms are known: zero up to the stored precision.
  bool is_zero_to_precision() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }

  /// Least stored exponent; infinity for exact zero.
  Gamma valuation() const {
    if (!terms_.empty()) return Gamma(terms_.front().first, e_);
    if (!prec_) return Gamma::infinity();
    fail(ErrorKind::PrecisionLoss, "valuation undetermined: element is O(t^" + precision().str() + ")");
  }
  /// v(x) if determinable, else the precision (a lower bound).
  Gamma valuation_bound() const {
    if (!terms_.empty()) return Gamma(terms_.front().first, e_);
    return precision();
  }
  std::int64_t valuation_units() const {
    if (terms_.empty()) (void)valuation();
    return terms_.front().first;
  }
  const Coeff& lead() const {
    if (terms_.empty()) fail(ErrorKind::PrecisionLoss, "leading coefficient of zero");
    return terms_.front().second;
  }

  /// Coefficient of t^g; PrecisionLoss if g is at or beyond the precision.
  Coeff coeff_at(const Gamma& g) const {
    if (!g.divides_grid(e_)) return Coeff(0);
    const std::int64_t k = g.scaled(e_);
    if (prec_ && k >= *prec_) fail(ErrorKind::PrecisionLoss, "coefficient of t^" + g.str() + " beyond precision");
    for (const auto& [kk, c] : terms_)
      if (kk == k) return c;
    return Coeff(0);
  }

  /// Same value over the finer grid (1/e')Z, e | e'.
  Laurent embed(std::int64_t e2) const {
    if (e2 == e_) return *this;
    if (e2 % e_ != 0) fail(ErrorKind::BadParameter, "cannot embed ramification " + std::to_string(e_) + " into " + std::to_string(e2));
    const std::int64_t f = e2 / e_;
    Laurent r(base_, e2);
    r.terms_.reserve(terms_.size());
    for (const auto& [k, c] : terms_) r.terms_.emplace_back(k * f, c);
    if (prec_) r.prec_ = *prec_ * f;
    return r;
  }

  /// Lower the precision to g (absolute), dropping terms at or above it.
  Laurent truncate(const Gamma& g) const {
    if (g.is_infinite()) return *this;
    const std::int64_t k = g.scaled_ceil(e_);
    if (prec_ && *prec_ <= k) return *this;
    Laurent r(base_, e_);
    for (const auto& t : terms_)
      if (t.first < k) r.terms_.push_back(t);
    r.prec_ = k;
    return r;
  }
  /// The stored polynomial, forgetting the precision tag.
  Laurent approximant() const {
    Laurent r = *this;
    r.prec_.reset();
    return r;
  }
  /// Drop all terms with exponent >= g (closed) and return the exact remainder.
  Laurent exact_truncation(const Gamma& g) const {
    Laurent r(base_, e_);
    for (const auto& t : terms_)
      if (Gamma(t.first, e_) < g) r.terms_.push_back(t);
    return r;
  }

  Laurent operator-() const {
    Laurent r = *this;
    for (auto& t : r.terms_) t.second = base_.neg(t.second);
    return r;
  }

  friend Laurent operator+(const Laurent& x, const Laurent& y) {
    if (x.e_ != y.e_) {
      const std::int64_t l = std::lcm(x.e_, y.e_);
      return x.embed(l) + y.embed(l);
    }
    check_base(x, y);
    Laurent r(x.base_, x.e_);
    r.prec_ = min_prec(x.prec_, y.prec_);
    auto i = x.terms_.begin(), j = y.terms_.begin();
    r.terms_.reserve(x.terms_.size() + y.terms_.size());
    auto push = [&](std::int64_t k, Coeff c) {
      if (r.prec_ && k >= *r.prec_) return;
      if (c != 0) r.terms_.emplace_back(k, std::move(c));
    };
    while (i != x.terms_.end() || j != y.terms_.end()) {
      if (j == y.terms_.end() || (i != x.terms_.end() && i->first < j->first)) {
        push(i->first, i->second);
        ++i;
      } else if (i == x.terms_.end() || j->first < i->first) {
        push(j->first, j->second);
        ++j;
      } else {
        push(i->first, x.base_.add(i->second, j->second));
        ++i;
        ++j;
      }
    }
    return r;
  }
  friend Laurent operator-(const Laurent& x, const Laurent& y) { return x + (-y); }

  friend Laurent operator*(const Laurent& x, const Laurent& y) {
    if (x.e_ != y.e_) {
      const std::int64_t l = std::lcm(x.e_, y.e_);
      return x.embed(l) * y.embed(l);
    }
    check_base(x, y);
    Laurent r(x.base_, x.e_);
    if (x.is_exact_zero() || y.is_exact_zero()) return r;
    // precision: min(prec_x + v(y), prec_y + v(x)), with v replaced by its bound when unknown
    std::optional<std::int64_t> p;
    const auto vx = x.lower_units(), vy = y.lower_units();
    if (x.prec_) p = *x.prec_ + vy;
    if (y.prec_) p = min_prec(p, std::optional<std::int64_t>(*y.prec_ + vx));
    r.prec_ = p;
    if (x.terms_.empty() || y.terms_.empty()) return r;
    const std::int64_t lo = x.terms_.front().first + y.terms_.front().first;
    std::int64_t hi = x.terms_.back().first + y.terms_.back().first + 1;
    if (p) hi = std::min(hi, *p);
    if (hi <= lo) return r;
    std::vector<Coeff> acc(static_cast<std::size_t>(hi - lo));
    std::vector<char> used(acc.size(), 0);
    for (const auto& [kx, cx] : x.terms_) {
      if (kx + y.terms_.front().first >= hi) break;
      for (const auto& [ky, cy] : y.terms_) {
        const std::int64_t k = kx + ky;
        if (k >= hi) break;
        const auto idx = static_cast<std::size_t>(k - lo);
        if (used[idx]) {
          acc[idx] += cx * cy;
        } else {
          acc[idx] = cx * cy;
          used[idx] = 1;
        }
      }
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
      if (!used[i]) continue;
      Coeff c = x.base_.is_rational() ? std::move(acc[i]) : x.base_.reduce(acc[i]);
      if (c != 0) r.terms_.emplace_back(lo + static_cast<std::int64_t>(i), std::move(c));
    }
    return r;
  }

  /// Multiplicative inverse. Exact non-monomials are expanded to relative
  /// precision `rel_prec` (in units of t); inexact x with v(x)=m gives
  /// absolute precision prec(x) - 2m.
  Laurent inverse(const Gamma& rel_prec) const {
    if (is_exact_zero()) fail(ErrorKind::DivisionByZero, "inverse of exact zero");
    if (terms_.empty()) fail(ErrorKind::PrecisionLoss, "inverse of an element indistinguishable from zero");
    const std::int64_t m = terms_.front().first;
    const Coeff c_inv = base_.inv(terms_.front().second);
    if (!prec_ && terms_.size() == 1) {
      Laurent r(base_, e_);
      r.terms_.emplace_back(-m, c_inv);
      return r;
    }
    std::int64_t rel;  // number of units of relative precision
    if (prec_) {
      rel = *prec_ - m;
    } else {
      rel = rel_prec.scaled_ceil(e_);
    }
    if (rel <= 0) fail(ErrorKind::PrecisionLoss, "no relative precision left for inverse");
    // unit part w = x / (c t^m) = 1 + h; g = 1/w via g_n = -sum h_k g_{n-k}
    std::vector<Coeff> h(static_cast<std::size_t>(rel));
    for (const auto& [k, c] : terms_) {
      const std::int64_t d = k - m;
      if (d >= rel) break;
      h[static_cast<std::size_t>(d)] = base_.mul(c, c_inv);
    }
    std::vector<std::int64_t> nz;
    for (std::int64_t d = 1; d < rel; ++d)
      if (h[static_cast<std::size_t>(d)] != 0) nz.push_back(d);
    std::vector<Coeff> g(static_cast<std::size_t>(rel));
    g[0] = 1;
    for (std::int64_t n = 1; n < rel; ++n) {
      Coeff s = 0;
      for (std::int64_t d : nz) {
        if (d > n) break;
        s += h[static_cast<std::size_t>(d)] * g[static_cast<std::size_t>(n - d)];
      }
      g[static_cast<std::size_t>(n)] = base_.neg(base_.is_rational() ? s : base_.reduce(s));
    }
    Laurent r(base_, e_);
    for (std::int64_t n = 0; n < rel; ++n) {
      const Coeff& gn = g[static_cast<std::size_t>(n)];
      if (gn != 0) r.terms_.emplace_back(n - m, base_.mul(gn, c_inv));
    }
    r.prec_ = rel - m;
    return r;
  }

  /// x^n for n >= 0; negative n goes through `inverse(rel_prec)`.
  Laurent pow(std::int64_t n, const Gamma& rel_prec) const {
    if (n < 0) return inverse(rel_prec).pow(-n, rel_prec);
    Laurent result = Laurent::from_int(1, base_, e_);
    Laurent b = *this;
    while (n) {
      if (n & 1) result = result * b;
      n >>= 1;
      if (n) b = b * b;
    }
    return result;
  }

  Laurent scale(const Coeff& c) const { return *this * constant(c, base_, e_); }
  /// Multiply by t^g exactly.
  Laurent shift(const Gamma& g) const {
    const Laurent s = *this;
    const std::int64_t e2 = std::lcm(e_, g.den());
    Laurent r = s.embed(e2);
    const std::int64_t k = g.scaled(e2);
    for (auto& t : r.terms_) t.first += k;
    if (r.prec_) *r.prec_ += k;
    return r;
  }

  /// Structural equality (terms, grid and precision tag).
  friend bool operator==(const Laurent& a, const Laurent& b) {
    if (a.e_ != b.e_) {
      const std::int64_t l = std::lcm(a.e_, b.e_);
      return a.embed(l) == b.embed(l);
    }
    return a.base_ == b.base_ && a.prec_ == b.prec_ && a.terms_ == b.terms_;
  }

  /// Values agree modulo the smaller of the two precisions.
  friend bool equal_to_precision(const Laurent& a, const Laurent& b) { return (a - b).is_zero_to_precision(); }

  /// Canonical text: `3*t^-2 + 1/4*t + t^3 + O(t^10)`.
  std::string str() const {
    std::string out;
    const bool fp = !base_.is_rational();
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& [k, c] = terms_[i];
      Coeff mag = c;
      bool negative = false;
      if (!fp && c < 0) {
        negative = true;
        mag = -c;
      }
      if (i == 0) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      const Gamma g(k, e_);
      if (g == Gamma(0)) {
        out += mag.get_str();
      } else {
        if (mag != 1) out += mag.get_str() + "*";
        out += t_power(g);
      }
    }
    if (prec_) {
      if (!out.empty()) out += " + ";
      const Gamma g(*prec_, e_);
      out += "O(" + (g == Gamma(0) ? std::string("1") : t_power(g)) + ")";
    }
    if (out.empty()) out = "0";
    return out;
  }

  static std::string t_power(const Gamma& g) {
    if (g == Gamma(1)) return "t";
    if (g.is_integer()) return "t^" + g.str();
    return "t^(" + g.str() + ")";
  }

 private:

  static void check_base(const Laurent& x, const Laurent& y) {
    if (!(x.base_ == y.base_)) fail(ErrorKind::BadParameter, "mixing elements over " + x.base_.str() + " and " + y.base_.str());
  }
  static std::optional<std::int64_t> min_prec(std::optional<std::int64_t> a, std::optional<std::int64_t> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
  }
  /// v(x) in units, or the precision if no terms are known (never called on exact zero).
  std::int64_t lower_units() const { return terms_.empty() ? *prec_ : terms_.front().first; }

  BaseField base_;
  std::int64_t e_ = 1;
  std::vector<Term> terms_;
  std::optional<std::int64_t> prec_;
};

inline Laurent operator*(const Coeff& c, const Laurent& x) { return x.scale(c); }

inline bool is_integral(const Laurent& x) { return x.is_zero_to_precision() ? x.precision() >= Gamma(0) : x.valuation() >= Gamma(0); }

}  // namespace vfg
