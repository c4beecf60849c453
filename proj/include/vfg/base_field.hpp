#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "vfg/error.hpp"

namespace vfg {

/// Coefficients live in Q or in F_p; both are stored as mpq_class, and in F_p
/// mode every coefficient is kept as its canonical representative in [0, p).
using Coeff = mpq_class;

/// Residue field k: the rationals, or the prime field F_p.
class BaseField {
 public:
  BaseField() = default;

  static BaseField rationals() { return BaseField(); }
  static BaseField prime(std::uint64_t p) {
    if (p < 2 || mpz_probab_prime_p(mpz_class(static_cast<unsigned long>(p)).get_mpz_t(), 30) == 0)
      fail(ErrorKind::BadParameter, "field characteristic " + std::to_string(p) + " is not prime");
    BaseField f;
    f.p_ = p;
    return f;
  }

  bool is_rational() const { return p_ == 0; }
  /// 0 for Q.
  std::uint64_t characteristic() const { return p_; }

  friend bool operator==(const BaseField&, const BaseField&) = default;

  Coeff reduce(const Coeff& c) const {
    if (p_ == 0) return c;
    const mpz_class P(static_cast<unsigned long>(p_));
    mpz_class n = c.get_num() % P;
    if (n < 0) n += P;
    mpz_class d = c.get_den() % P;
    if (d == 0) fail(ErrorKind::DivisionByZero, "denominator divisible by p=" + std::to_string(p_));
    mpz_class di;
    mpz_invert(di.get_mpz_t(), d.get_mpz_t(), P.get_mpz_t());
    mpz_class r = (n * di) % P;
    return Coeff(r);
  }

  Coeff add(const Coeff& a, const Coeff& b) const { return p_ == 0 ? Coeff(a + b) : reduce(a + b); }
  Coeff sub(const Coeff& a, const Coeff& b) const { return p_ == 0 ? Coeff(a - b) : reduce(a - b); }
  Coeff mul(const Coeff& a, const Coeff& b) const { return p_ == 0 ? Coeff(a * b) : reduce(a * b); }
  Coeff neg(const Coeff& a) const { return p_ == 0 ? Coeff(-a) : reduce(-a); }
  Coeff inv(const Coeff& a) const {
    if (a == 0) fail(ErrorKind::DivisionByZero, "inverse of zero coefficient");
    return p_ == 0 ? Coeff(1 / a) : reduce(Coeff(1) / a);
  }
  Coeff from_int(long n) const { return reduce(Coeff(n)); }

  Coeff pow(const Coeff& a, std::uint64_t n) const {
    Coeff r = from_int(1), b = a;
    while (n) {
      if (n & 1) r = mul(r, b);
      b = mul(b, b);
      n >>= 1;
    }
    return r;
  }

  /// Some c with c^n = a, if one exists in k.
  std::optional<Coeff> nth_root(const Coeff& a, std::uint64_t n) const {
    if (n == 0) fail(ErrorKind::BadParameter, "zeroth root");
    if (a == 0) return Coeff(0);
    if (p_ == 0) {
      mpz_class num = a.get_num(), den = a.get_den();
      const bool neg = num < 0;
      if (neg) {
        if (n % 2 == 0) return std::nullopt;
        num = -num;
      }
      mpz_class rn, rd;
      if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n) == 0) return std::nullopt;
      if (mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n) == 0) return std::nullopt;
      Coeff r(rn, rd);
      r.canonicalize();
      return neg ? Coeff(-r) : r;
    }
    for (std::uint64_t x = 1; x < p_; ++x) {
      const Coeff c(static_cast<unsigned long>(x));
      if (pow(c, n) == a) return c;
    }
    return std::nullopt;
  }

  bool is_square(const Coeff& a) const { return nth_root(a, 2).has_value(); }

  /// Canonical representative of the square class of a nonzero a:
  /// squarefree integer for Q, 1 or the least non-square for F_p.
  Coeff square_class(const Coeff& a) const {
    if (a == 0) fail(ErrorKind::ZeroArgument, "square class of zero");
    if (p_ != 0) {
      if (is_square(a)) return Coeff(1);
      for (std::uint64_t x = 2; x < p_; ++x)
        if (!is_square(Coeff(static_cast<unsigned long>(x)))) return Coeff(static_cast<unsigned long>(x));
      return Coeff(1);
    }
    mpz_class n = a.get_num() * a.get_den();
    const int sign = n < 0 ? -1 : 1;
    if (n < 0) n = -n;
    mpz_class out = 1;
    for (unsigned long q = 2; q * q <= n && q < 1000000UL; ++q) {
      int e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
        n /= q;
        ++e;
      }
      if (e % 2 == 1) out *= q;
    }
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) out *= n;
    return Coeff(sign * out);
  }

  std::string str() const { return p_ == 0 ? "Q" : "F_" + std::to_string(p_); }

 private:
  std::uint64_t p_ = 0;
};

inline std::string coeff_str(const Coeff& c) { return c.get_str(); }

}  // namespace vfg
