#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace vfg {

/// Element of the value group Gamma = Q together with a maximal element infinity.
///
/// Finite values are kept as reduced fractions num/den with den > 0. Overflow is
/// not checked: valuations met in practice are tiny.
class Gamma {
 public:
  constexpr Gamma() = default;
  constexpr Gamma(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Gamma(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (d == 0) throw std::invalid_argument("Gamma: zero denominator");
    normalize();
  }

  static constexpr Gamma infinity() {
    Gamma g;
    g.inf_ = true;
    return g;
  }

  constexpr bool is_infinite() const { return inf_; }
  constexpr bool is_finite() const { return !inf_; }
  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  bool is_integer() const { return !inf_ && den_ == 1; }

  /// Largest integer <= value.
  std::int64_t floor() const {
    require_finite();
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  std::int64_t ceil() const {
    require_finite();
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
  }

  /// Value scaled by e, which must be integral (exponent grid of ramification e).
  std::int64_t scaled(std::int64_t e) const {
    require_finite();
    if ((num_ * e) % den_ != 0) throw std::domain_error("Gamma " + str() + " not in (1/" + std::to_string(e) + ")Z");
    return num_ * e / den_;
  }
  /// ceil(value * e).
  std::int64_t scaled_ceil(std::int64_t e) const {
    require_finite();
    return (Gamma(num_ * e, den_)).ceil();
  }
  bool divides_grid(std::int64_t e) const { return inf_ || (num_ * e) % den_ == 0; }

  friend Gamma operator+(const Gamma& a, const Gamma& b) {
    if (a.inf_ || b.inf_) return infinity();
    return Gamma(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Gamma operator-(const Gamma& a) {
    a.require_finite();
    Gamma r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend Gamma operator-(const Gamma& a, const Gamma& b) {
    b.require_finite();
    return a + (-b);
  }
  friend Gamma operator*(std::int64_t k, const Gamma& a) {
    if (a.inf_) {
      if (k <= 0) throw std::domain_error("Gamma: non-positive multiple of infinity");
      return a;
    }
    return Gamma(k * a.num_, a.den_);
  }
  friend Gamma operator*(const Gamma& a, const Gamma& b) {
    a.require_finite();
    b.require_finite();
    return Gamma(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Gamma operator/(const Gamma& a, std::int64_t k) {
    a.require_finite();
    if (k == 0) throw std::domain_error("Gamma: division by zero");
    return Gamma(a.num_, a.den_ * k);
  }
  friend Gamma operator/(const Gamma& a, const Gamma& b) {
    a.require_finite();
    b.require_finite();
    if (b.num_ == 0) throw std::domain_error("Gamma: division by zero");
    return Gamma(a.num_ * b.den_, a.den_ * b.num_);
  }
  Gamma& operator+=(const Gamma& o) { return *this = *this + o; }
  Gamma& operator-=(const Gamma& o) { return *this = *this - o; }

  friend bool operator==(const Gamma& a, const Gamma& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Gamma& a, const Gamma& b) {
    if (a.inf_ || b.inf_) {
      if (a.inf_ && b.inf_) return std::strong_ordering::equal;
      return a.inf_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// `5`, `-1/2`, `inf`.
  std::string str() const {
    if (inf_) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Gamma& g) { return os << g.str(); }

 private:
  void normalize() {
    if (den_ < 0) {
      den_ = -den_;
      num_ = -num_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }
  void require_finite() const {
    if (inf_) throw std::domain_error("Gamma: operation on infinity");
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  bool inf_ = false;
};

inline Gamma min(const Gamma& a, const Gamma& b) { return a < b ? a : b; }
inline Gamma max(const Gamma& a, const Gamma& b) { return a < b ? b : a; }

/// Parse `3`, `-1/2`, `inf`.
inline Gamma parse_gamma(const std::string& s) {
  if (s == "inf" || s == "oo") return Gamma::infinity();
  const auto slash = s.find('/');
  std::size_t pos = 0;
  if (slash == std::string::npos) {
    const long long n = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad value-group literal: " + s);
    return Gamma(n);
  }
  const long long n = std::stoll(s.substr(0, slash), &pos);
  if (pos != slash) throw std::invalid_argument("bad value-group literal: " + s);
  const std::string ds = s.substr(slash + 1);
  const long long d = std::stoll(ds, &pos);
  if (pos != ds.size()) throw std::invalid_argument("bad value-group literal: " + s);
  return Gamma(n, d);
}

}  // namespace vfg
