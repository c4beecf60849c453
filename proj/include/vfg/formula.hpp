#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vfg/defset.hpp"
#include "vfg/field.hpp"

namespace vfg {

/// unit * prod (x - root)^mult; v(P(x)) = v(unit) + sum mult * v(x - root).
struct FactoredPoly {
  Laurent unit;
  std::vector<std::pair<Laurent, std::int64_t>> factors;

  Gamma v_at(const Laurent& x) const {
    Gamma v = unit.valuation();
    for (const auto& [a, m] : factors) {
      const Laurent d = x - a;
      if (d.is_exact_zero()) return Gamma::infinity();
      v = v + m * d.valuation();
    }
    return v;
  }

  std::string str() const {
    std::string s;
    const bool show_unit = !(unit.is_exact() && unit.is_monomial() && unit.terms().front() == Laurent::Term{0, Coeff(1)});
    if (show_unit || factors.empty()) s = unit.is_monomial() && unit.is_exact() ? unit.str() : "(" + unit.str() + ")";
    for (const auto& [a, m] : factors) {
      if (!s.empty()) s += "*";
      std::string f;
      if (a.is_exact_zero()) {
        f = "x";
      } else if (a.is_exact() && a.is_monomial()) {
        const std::string as = a.str();
        f = as.front() == '-' ? "(x + " + as.substr(1) + ")" : "(x - " + as + ")";
      } else {
        f = "(x - (" + a.str() + "))";
      }
      s += f;
      if (m != 1) s += "^" + std::to_string(m);
    }
    return s;
  }
};

/// Formula tree over one variable x.
struct Formula {
  enum class Kind { Atom, Eq, Not, And, Or };
  enum class Cmp { Ge, Gt, Eq };

  Kind kind = Kind::Atom;
  // Atom: v(P) cmp v(Q) + g
  Cmp cmp = Cmp::Ge;
  FactoredPoly P, Q;
  Gamma g;
  // Eq: x = point
  Laurent point;
  std::vector<std::shared_ptr<const Formula>> kids;

  std::string str() const {
    switch (kind) {
      case Kind::Atom: {
        const char* c = cmp == Cmp::Ge ? ">=" : (cmp == Cmp::Gt ? ">" : "=");
        return std::string("Atom(") + c + ", P=" + P.str() + ", Q=" + Q.str() + ", g=" + g.str() + ")";
      }
      case Kind::Eq: return "Eq(x, " + point.str() + ")";
      case Kind::Not: return "Not(" + kids[0]->str() + ")";
      case Kind::And: return "And(" + kids[0]->str() + ", " + kids[1]->str() + ")";
      case Kind::Or: return "Or(" + kids[0]->str() + ", " + kids[1]->str() + ")";
    }
    return "?";
  }
};

using FormulaPtr = std::shared_ptr<const Formula>;

inline FormulaPtr make_not(FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Not;
  f->kids = {std::move(a)};
  return f;
}
inline FormulaPtr make_bin(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

namespace detail {

inline bool cmp_holds(Formula::Cmp c, const Gamma& l, const Gamma& r) {
  switch (c) {
    case Formula::Cmp::Ge: return l >= r;
    case Formula::Cmp::Gt: return l > r;
    case Formula::Cmp::Eq: return l == r;
  }
  return false;
}

/// Grammar:
///   F    := D ('|' D)*          D := C ('&' C)*         C := '!' C | '(' F ')' | atom
///   atom := 'v(' POLY ')' CMP ( 'v(' POLY ')' [('+'|'-') GAMMA] | GAMMA ) | 'x' ('='|'!=') LIT
///   POLY := FACTOR ('*' FACTOR | '/' CONST)*  |  'x' ('+'|'-') LIT
///   FACTOR := ('x' | '(' 'x' [('+'|'-') LIT] ')' | CONST) ['^' INT]
///   CMP  := '>=' | '>' | '=' | '<=' | '<' | '!='
class FormulaParser {
 public:
  FormulaParser(const Field& K, std::string_view s) : K_(K), s_(s) {}

  FormulaPtr parse() {
    FormulaPtr f = disj();
    skip();
    if (i_ != s_.size()) error("unexpected '" + std::string(1, s_[i_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const { throw SyntaxError(i_ + 1, msg); }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool peek2(const char* two) {
    skip();
    return i_ + 1 < s_.size() && s_[i_] == two[0] && s_[i_ + 1] == two[1];
  }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) error(std::string("expected '") + c + "'");
  }

  FormulaPtr disj() {
    FormulaPtr a = conj();
    while (eat('|')) a = make_bin(Formula::Kind::Or, a, conj());
    return a;
  }
  FormulaPtr conj() {
    FormulaPtr a = unary();
    while (eat('&')) a = make_bin(Formula::Kind::And, a, unary());
    return a;
  }
  FormulaPtr unary() {
    if (peek('!') && !peek2("!=")) {
      ++i_;
      return make_not(unary());
    }
    if (eat('(')) {
      FormulaPtr f = disj();
      expect(')');
      return f;
    }
    return atom();
  }

  Laurent literal() {
    skip();
    LaurentParser lp(K_, s_.substr(i_), i_);
    Laurent v = lp.parse_prefix();
    i_ += lp.pos();
    return v;
  }
  Laurent constant_factor() {
    skip();
    LaurentParser lp(K_, s_.substr(i_), i_);
    Laurent v = lp.parse_factor();
    i_ += lp.pos();
    return v;
  }

  std::int64_t integer() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) error("expected integer");
    return std::stoll(std::string(s_.substr(start, i_ - start)));
  }

  Gamma gamma_lit() {
    skip();
    if (s_.substr(i_, 3) == "inf") {
      i_ += 3;
      return Gamma::infinity();
    }
    const bool neg = eat('-');
    const std::int64_t n = integer();
    std::int64_t d = 1;
    if (peek('/')) {
      ++i_;
      d = integer();
      if (d == 0) error("zero denominator");
    }
    return Gamma(neg ? -n : n, d);
  }

  /// Is the parenthesized group at i_ (which is '(') mentioning x?
  bool group_has_x() const {
    int depth = 0;
    for (std::size_t j = i_; j < s_.size(); ++j) {
      if (s_[j] == '(') ++depth;
      if (s_[j] == ')' && --depth == 0) return false;
      if (s_[j] == 'x') return true;
    }
    return false;
  }

  void add_root(FactoredPoly& p, const Laurent& root, std::int64_t m) {
    for (auto& [a, mm] : p.factors) {
      if ((a - root).is_exact_zero()) {
        mm += m;
        return;
      }
    }
    p.factors.emplace_back(root, m);
  }

  /// `x` or `x - LIT` / `x + LIT`, after the x has been consumed.
  Laurent linear_tail() {
    skip();
    if (peek('-')) {
      ++i_;
      return literal();
    }
    if (peek('+')) {
      ++i_;
      return -literal();
    }
    return K_.zero();
  }

  FactoredPoly poly() {
    FactoredPoly p{K_.one(), {}};
    bool first = true;
    for (;;) {
      skip();
      if (first && i_ >= s_.size()) error("unexpected end of input");
      std::int64_t exp_sign = 1;
      if (!first) {
        if (eat('*')) {
          exp_sign = 1;
        } else if (peek('/')) {
          ++i_;
          exp_sign = -1;
        } else {
          break;
        }
        skip();
      }
      if (i_ < s_.size() && s_[i_] == 'x') {
        ++i_;
        if (exp_sign < 0) error("cannot divide by x");
        Laurent root = K_.zero();
        if (first && !p.factors.size() && (peek('-') || peek('+'))) {
          root = linear_tail();
          add_root(p, root, 1);
          return p;
        }
        std::int64_t m = 1;
        if (eat('^')) m = integer();
        if (m < 1) error("multiplicity must be positive");
        add_root(p, root, m);
      } else if (peek('(') && group_has_x()) {
        if (exp_sign < 0) error("cannot divide by a factor in x");
        ++i_;
        skip();
        if (!(i_ < s_.size() && s_[i_] == 'x')) error("expected 'x'");
        ++i_;
        const Laurent root = linear_tail();
        expect(')');
        std::int64_t m = 1;
        if (eat('^')) m = integer();
        if (m < 1) error("multiplicity must be positive");
        add_root(p, root, m);
      } else {
        const Laurent c = constant_factor();
        if (c.is_exact_zero()) error("zero factor");
        p.unit = exp_sign > 0 ? p.unit * c : K_.div(p.unit, c);
      }
      first = false;
    }
    if (p.unit.is_zero_to_precision()) error("polynomial with undetermined unit");
    return p;
  }

  FactoredPoly vterm() {
    skip();
    if (!(i_ < s_.size() && s_[i_] == 'v')) error("expected 'v('");
    ++i_;
    expect('(');
    FactoredPoly p = poly();
    expect(')');
    return p;
  }

  FormulaPtr atom() {
    skip();
    if (i_ >= s_.size()) error("unexpected end of input");
    if (s_[i_] == 'x') {
      ++i_;
      bool negate = false;
      if (peek2("!=")) {
        i_ += 2;
        negate = true;
      } else {
        expect('=');
      }
      auto f = std::make_shared<Formula>();
      f->kind = Formula::Kind::Eq;
      f->point = literal();
      return negate ? make_not(f) : FormulaPtr(f);
    }
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Atom;
    f->P = vterm();
    skip();
    bool negate = false;
    if (peek2(">=")) {
      i_ += 2;
      f->cmp = Formula::Cmp::Ge;
    } else if (peek2("<=")) {
      i_ += 2;
      f->cmp = Formula::Cmp::Gt;
      negate = true;
    } else if (peek2("!=")) {
      i_ += 2;
      f->cmp = Formula::Cmp::Eq;
      negate = true;
    } else if (eat('>')) {
      f->cmp = Formula::Cmp::Gt;
    } else if (eat('<')) {
      f->cmp = Formula::Cmp::Ge;
      negate = true;
    } else if (eat('=')) {
      f->cmp = Formula::Cmp::Eq;
    } else {
      error("expected comparison");
    }
    skip();
    if (i_ < s_.size() && s_[i_] == 'v') {
      f->Q = vterm();
      f->g = Gamma(0);
      if (peek('+')) {
        ++i_;
        f->g = gamma_lit();
      } else if (peek('-')) {
        ++i_;
        const Gamma g = gamma_lit();
        if (g.is_infinite()) error("cannot subtract inf");
        f->g = -g;
      }
    } else {
      f->Q = FactoredPoly{K_.one(), {}};
      f->g = gamma_lit();
    }
    return negate ? make_not(f) : FormulaPtr(f);
  }

  const Field& K_;
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline FormulaPtr parse_formula(const Field& K, std::string_view text) { return detail::FormulaParser(K, text).parse(); }

/// Truth of f at the point x.
inline bool eval_formula(const Formula& f, const Laurent& x) {
  switch (f.kind) {
    case Formula::Kind::Atom: return detail::cmp_holds(f.cmp, f.P.v_at(x), f.Q.v_at(x) + f.g);
    case Formula::Kind::Eq: {
      const Laurent d = x - f.point;
      if (d.is_exact_zero()) return true;
      if (d.is_zero_to_precision()) fail(ErrorKind::PrecisionLoss, "x = " + f.point.str() + " undecidable at this precision");
      return false;
    }
    case Formula::Kind::Not: return !eval_formula(*f.kids[0], x);
    case Formula::Kind::And: return eval_formula(*f.kids[0], x) && eval_formula(*f.kids[1], x);
    case Formula::Kind::Or: return eval_formula(*f.kids[0], x) || eval_formula(*f.kids[1], x);
  }
  return false;
}

namespace detail {

inline void collect_roots(const Formula& f, std::vector<Laurent>& roots) {
  auto add = [&](const Laurent& a) {
    for (const Laurent& b : roots) {
      const Laurent d = a - b;
      if (d.is_exact_zero()) return;
      if (d.is_zero_to_precision()) fail(ErrorKind::PrecisionLoss, "roots " + a.str() + " and " + b.str() + " indistinguishable");
    }
    roots.push_back(a);
  };
  switch (f.kind) {
    case Formula::Kind::Atom:
      for (const auto& r : f.P.factors) add(r.first);
      for (const auto& r : f.Q.factors) add(r.first);
      break;
    case Formula::Kind::Eq: add(f.point); break;
    default:
      for (const auto& k : f.kids) collect_roots(*k, roots);
  }
}

/// sum c_i min(sigma, d_i) + k0 (cmp) C as a subset of the finite line.
struct PLAtom {
  std::vector<std::pair<std::int64_t, Gamma>> terms;  // (c_i, d_i), d_i may be inf
  Gamma constant;                                     // k0 - C moved left
  Formula::Cmp cmp;

  IntervalSet solve() const {
    std::vector<Gamma> bps;
    for (const auto& [c, d] : terms)
      if (d.is_finite()) bps.push_back(d);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    IntervalSet out;
    auto at = [&](const Gamma& s) {
      Gamma v = constant;
      for (const auto& [c, d] : terms) v = v + c * min(s, d);
      return v;
    };
    // linear piece on an open cell: slope counts terms with d above the cell
    auto piece = [&](bool lo_unb, const Gamma& lo, bool hi_unb, const Gamma& hi) {
      std::int64_t slope = 0;
      Gamma k = constant;
      for (const auto& [c, d] : terms) {
        const bool above = d.is_infinite() || (!hi_unb && d >= hi);
        if (above) {
          slope += c;
        } else {
          k = k + c * d;
        }
      }
      const IntervalSet cell = IntervalSet::interval(lo_unb, lo, false, hi_unb ? Gamma::infinity() : hi, false);
      IntervalSet sol;
      if (slope == 0) {
        sol = cmp_holds(cmp, k, Gamma(0)) ? IntervalSet::finite_line() : IntervalSet();
      } else {
        const Gamma root = (Gamma(0) - k) / slope;  // slope*s + k (cmp) 0
        switch (cmp) {
          case Formula::Cmp::Eq: sol = IntervalSet::point(root); break;
          case Formula::Cmp::Ge:
            sol = slope > 0 ? IntervalSet::interval(false, root, true, Gamma::infinity(), false)
                            : IntervalSet::interval(true, Gamma(0), false, root, true);
            break;
          case Formula::Cmp::Gt:
            sol = slope > 0 ? IntervalSet::interval(false, root, false, Gamma::infinity(), false)
                            : IntervalSet::interval(true, Gamma(0), false, root, false);
            break;
        }
      }
      return sol & cell;
    };
    if (bps.empty()) return piece(true, Gamma(0), true, Gamma(0));
    out = out | piece(true, Gamma(0), false, bps.front());
    for (std::size_t i = 0; i < bps.size(); ++i) {
      if (cmp_holds(cmp, at(bps[i]), Gamma(0))) out = out | IntervalSet::point(bps[i]);
      if (i + 1 < bps.size()) out = out | piece(false, bps[i], false, bps[i + 1]);
    }
    out = out | piece(false, bps.back(), true, Gamma(0));
    return out;
  }
};

/// Truth set in sigma = v(x - a) for x whose nearest root is a.
inline IntervalSet sigma_set(const Formula& f, const Laurent& a, const std::vector<Laurent>& roots,
                             const std::vector<Gamma>& dist) {
  auto d_of = [&](const Laurent& b) {
    for (std::size_t j = 0; j < roots.size(); ++j)
      if ((roots[j] - b).is_exact_zero() || equal_to_precision(roots[j], b)) return dist[j];
    fail(ErrorKind::BadParameter, "root not collected");
  };
  switch (f.kind) {
    case Formula::Kind::Atom: {
      PLAtom pl;
      pl.cmp = f.cmp;
      for (const auto& [b, m] : f.P.factors) pl.terms.emplace_back(m, d_of(b));
      for (const auto& [b, m] : f.Q.factors) pl.terms.emplace_back(-m, d_of(b));
      const Gamma rhs = f.Q.unit.valuation() + f.g;
      if (rhs.is_infinite()) {
        // v(P) >= inf or = inf only on roots; v(P) > inf never
        return IntervalSet();
      }
      pl.constant = f.P.unit.valuation() - rhs;
      return pl.solve() & IntervalSet::finite_line();
    }
    case Formula::Kind::Eq: return IntervalSet();
    case Formula::Kind::Not: return ~sigma_set(*f.kids[0], a, roots, dist) & IntervalSet::finite_line();
    case Formula::Kind::And: return sigma_set(*f.kids[0], a, roots, dist) & sigma_set(*f.kids[1], a, roots, dist);
    case Formula::Kind::Or: return sigma_set(*f.kids[0], a, roots, dist) | sigma_set(*f.kids[1], a, roots, dist);
  }
  return IntervalSet();
}

}  // namespace detail

/// Swiss-cheese realization. With rho(x) = max v(x - a_j) attained at a, every
/// v(x - b) equals min(rho, v(a - b)); so off the roots the formula is a
/// function of rho for each nearest root a, and the locus where a is nearest at
/// distance rho is {v(x - a) = rho} minus the balls B-(b, rho) with v(a - b) = rho.
inline DefSet realize_formula(const Formula& f, const Field& K) {
  std::vector<Laurent> roots{K.zero()};
  detail::collect_roots(f, roots);
  std::vector<SwissCheese> pieces;
  for (const Laurent& a : roots)
    if (eval_formula(f, a)) pieces.push_back(SwissCheese{Ball::point(a), {}});
  for (const Laurent& a : roots) {
    std::vector<Gamma> dist;
    for (const Laurent& b : roots) {
      const Laurent d = a - b;
      dist.push_back(d.is_exact_zero() ? Gamma::infinity() : d.valuation());
    }
    const IntervalSet lam = detail::sigma_set(f, a, roots, dist);
    for (const auto& iv : lam.intervals()) {
      SwissCheese sc;
      if (!iv.lo_unbounded) sc.outer = iv.lo_closed ? Ball::closed(a, iv.lo) : Ball::open(a, iv.lo);
      if (iv.hi.is_infinite()) {
        sc.holes.push_back(Ball::point(a));
      } else {
        sc.holes.push_back(iv.hi_closed ? Ball::open(a, iv.hi) : Ball::closed(a, iv.hi));
      }
      const IntervalSet J = IntervalSet::interval(iv.lo_unbounded, iv.lo, iv.lo_closed, iv.hi, iv.hi_closed);
      for (std::size_t j = 0; j < roots.size(); ++j)
        if (dist[j].is_finite() && J.contains(dist[j])) sc.holes.push_back(Ball::open(roots[j], dist[j]));
      pieces.push_back(std::move(sc));
    }
  }
  return normalize(DefSet(std::move(pieces)));
}

}  // namespace vfg
