#pragma once

#include <cctype>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "vfg/laurent.hpp"

namespace vfg {

/// Field context K = k((t^(1/e))) with a working precision.
///
/// The working precision is the relative precision used whenever an exact
/// non-monomial must be expanded into a series (inverses, negative powers).
class Field {
 public:
  Field() = default;
  Field(BaseField base, std::int64_t e, Gamma prec = Gamma(40)) : base_(base), e_(e), prec_(prec) {
    if (e < 1) fail(ErrorKind::BadParameter, "ramification index must be positive");
    if (!prec.is_finite() || prec <= Gamma(0)) fail(ErrorKind::BadParameter, "working precision must be positive");
  }
  explicit Field(Gamma prec) : Field(BaseField::rationals(), 1, prec) {}

  const BaseField& base() const { return base_; }
  std::int64_t ram() const { return e_; }
  const Gamma& prec() const { return prec_; }
  Field with_prec(const Gamma& p) const { return Field(base_, e_, p); }
  Field with_ram(std::int64_t e) const { return Field(base_, e, prec_); }

  Laurent zero() const { return Laurent::zero(base_, e_); }
  Laurent one() const { return from_int(1); }
  Laurent from_int(long n) const { return Laurent::from_int(n, base_, e_); }
  Laurent constant(const Coeff& c) const { return Laurent::constant(c, base_, e_); }
  Laurent monomial(const Coeff& c, const Gamma& g) const {
    const std::int64_t e2 = std::lcm(e_, g.den());
    return Laurent::monomial(c, g, base_, e2);
  }
  Laurent t(const Gamma& g = Gamma(1)) const { return monomial(Coeff(1), g); }
  Laurent big_o(const Gamma& g) const { return Laurent::big_o(g, base_, e_); }

  Laurent inv(const Laurent& x) const { return x.inverse(prec_); }
  Laurent div(const Laurent& a, const Laurent& b) const { return a * inv(b); }
  Laurent pow(const Laurent& x, std::int64_t n) const { return x.pow(n, prec_); }

  /// Parse an arithmetic expression over t: `3*t^-2 + 1/4*t + O(t^10)`, `1/(t^2+t^3)`.
  Laurent parse(std::string_view text) const;

  std::string str() const {
    return "K=" + base_.str() + "((t" + (e_ == 1 ? std::string() : "^(1/" + std::to_string(e_) + ")") +
           ")) prec=" + prec_.str();
  }

 private:
  BaseField base_;
  std::int64_t e_ = 1;
  Gamma prec_ = Gamma(40);
};

namespace detail {

/// Recursive-descent evaluator for Laurent expressions.
class LaurentParser {
 public:
  LaurentParser(const Field& K, std::string_view s, std::size_t base_offset = 0)
      : K_(K), s_(s), off_(base_offset) {}

  Laurent parse_all() {
    Laurent v = expr();
    skip();
    if (i_ != s_.size()) error("unexpected '" + std::string(1, s_[i_]) + "'");
    return v;
  }

  /// Parse one expression and stop at the first character that cannot continue it.
  Laurent parse_prefix() { return expr(); }
  /// Parse a single factor (`3`, `t^-2`, `(1+t)`), leaving the rest unread.
  Laurent parse_factor() { return power(); }
  std::size_t pos() const { return i_; }

 private:
  // columns are reported 1-based
  [[noreturn]] void error(const std::string& msg) const { throw SyntaxError(off_ + i_ + 1, msg); }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool eat(char c) {
    if (peek(c)) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) error(std::string("expected '") + c + "'");
  }

  Laurent expr() {
    skip();
    Laurent acc = K_.zero();
    bool first = true;
    for (;;) {
      bool neg = false;
      if (eat('-')) {
        neg = true;
      } else if (!first && !eat('+')) {
        break;
      } else if (first) {
        eat('+');
      }
      Laurent t = term();
      acc = neg ? acc - t : acc + t;
      first = false;
      skip();
      if (!(peek('+') || peek('-'))) break;
    }
    return acc;
  }

  Laurent term() {
    Laurent acc = power();
    for (;;) {
      if (eat('*')) {
        acc = acc * power();
      } else if (peek('/')) {
        ++i_;
        const std::size_t at = i_;
        Laurent d = power();
        if (d.is_exact_zero()) {
          i_ = at;
          throw Error(ErrorKind::DivisionByZero, "division by zero in literal");
        }
        acc = K_.div(acc, d);
      } else {
        break;
      }
    }
    return acc;
  }

  Laurent power() {
    skip();
    const bool is_t = i_ < s_.size() && s_[i_] == 't';
    Laurent base = primary();
    if (!eat('^')) return base;
    skip();
    std::int64_t num = 0, den = 1;
    bool paren = eat('(');
    bool neg = eat('-');
    num = integer();
    if (paren) {
      if (eat('/')) den = integer();
      expect(')');
    }
    if (neg) num = -num;
    if (is_t && base.is_monomial() && base.lead() == 1) {
      const Gamma g = Gamma(base.terms().front().first, base.ram()) * Gamma(num, den);
      if (!g.divides_grid(K_.ram()))
        fail(ErrorKind::BadParameter, "exponent " + g.str() + " needs ramification divisible by " + std::to_string(g.den()));
      return K_.t(g);
    }
    if (den != 1) error("fractional exponent only allowed on t");
    return K_.pow(base, num);
  }

  std::int64_t integer() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) error("expected integer");
    return std::stoll(std::string(s_.substr(start, i_ - start)));
  }

  Laurent primary() {
    skip();
    if (i_ >= s_.size()) error("unexpected end of input");
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return K_.constant(Coeff(mpz_class(std::string(s_.substr(start, i_ - start)))));
    }
    if (c == 't') {
      ++i_;
      return K_.t();
    }
    if (c == 'O') {
      ++i_;
      expect('(');
      Laurent m = expr();
      expect(')');
      if (!m.is_monomial() || !m.is_exact()) error("O(...) needs a monomial");
      return K_.big_o(m.valuation());
    }
    if (c == '(') {
      ++i_;
      Laurent v = expr();
      expect(')');
      return v;
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  const Field& K_;
  std::string_view s_;
  std::size_t off_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline Laurent Field::parse(std::string_view text) const { return detail::LaurentParser(*this, text).parse_all(); }

}  // namespace vfg
