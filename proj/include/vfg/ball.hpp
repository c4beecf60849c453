#pragma once

#include <string>

#include "vfg/laurent.hpp"

namespace vfg {

/// A ball of K for a dense value group: {v(x-c) >= r}, {v(x-c) > r}, the point
/// {c} (closed of radius infinity), or all of K.
class Ball {
 public:
  enum class Kind { All, Closed, Open };

  static Ball all() { return Ball(Kind::All, Laurent(), Gamma(0)); }
  static Ball closed(const Laurent& c, const Gamma& r) { return Ball(Kind::Closed, c, r); }
  static Ball open(const Laurent& c, const Gamma& r) {
    if (r.is_infinite()) throw Error(ErrorKind::BadParameter, "open ball of infinite radius is empty");
    return Ball(Kind::Open, c, r);
  }
  static Ball point(const Laurent& c) { return Ball(Kind::Closed, c, Gamma::infinity()); }

  Kind kind() const { return kind_; }
  bool is_all() const { return kind_ == Kind::All; }
  bool is_point() const { return kind_ == Kind::Closed && radius_.is_infinite(); }
  bool is_open() const { return kind_ == Kind::Open; }
  const Laurent& center() const { return center_; }
  const Gamma& radius() const { return radius_; }

  /// Does v(d) satisfy the radius condition of this ball? PrecisionLoss when d is too imprecise.
  bool radius_admits(const Laurent& d) const {
    if (kind_ == Kind::All) return true;
    if (!d.is_zero_to_precision()) {
      const Gamma v = d.valuation();
      return kind_ == Kind::Closed ? v >= radius_ : v > radius_;
    }
    if (d.is_exact()) return true;
    const Gamma p = d.precision();
    if (kind_ == Kind::Closed ? p >= radius_ : p > radius_) return true;
    fail(ErrorKind::PrecisionLoss, "distance to ball center undetermined at precision " + p.str());
  }

  bool contains(const Laurent& x) const {
    if (kind_ == Kind::All) return true;
    return radius_admits(x - center_);
  }

  enum class Relation { Equal, Contains, Inside, Disjoint };

  /// Size order: K is largest, then by radius, closed before open at equal radius.
  /// Returns <0 if this ball is strictly larger in that order.
  int size_order(const Ball& o) const {
    auto rank = [](const Ball& b) { return b.kind_ == Kind::All ? 0 : 1; };
    if (rank(*this) != rank(o)) return rank(*this) - rank(o);
    if (kind_ == Kind::All) return 0;
    if (radius_ != o.radius_) return radius_ < o.radius_ ? -1 : 1;
    if (kind_ == o.kind_) return 0;
    return kind_ == Kind::Closed ? -1 : 1;
  }

  /// Lattice relation of this ball to `o`: any two balls are nested, equal or disjoint.
  Relation compare(const Ball& o) const {
    const int s = size_order(o);
    if (s <= 0) {
      if (contains_center_of(o)) return s == 0 ? Relation::Equal : Relation::Contains;
      return Relation::Disjoint;
    }
    return o.contains_center_of(*this) ? Relation::Inside : Relation::Disjoint;
  }
  bool subset_of(const Ball& o) const {
    const Relation r = compare(o);
    return r == Relation::Equal || r == Relation::Inside;
  }

  friend bool operator==(const Ball& a, const Ball& b) { return a.compare(b) == Relation::Equal; }

  /// `K`, `{c}`, `B(c, r)` (closed), `B-(c, r)` (open).
  std::string str() const {
    switch (kind_) {
      case Kind::All: return "K";
      case Kind::Closed:
        if (radius_.is_infinite()) return "{" + center_.str() + "}";
        return "B(" + center_.str() + ", " + radius_.str() + ")";
      case Kind::Open: return "B-(" + center_.str() + ", " + radius_.str() + ")";
    }
    return "?";
  }

 private:
  Ball(Kind k, const Laurent& c, const Gamma& r) : kind_(k), center_(canonical_center(k, c, r)), radius_(r) {}

  bool contains_center_of(const Ball& o) const {
    if (kind_ == Kind::All) return true;
    if (o.kind_ == Kind::All) return false;
    return contains(o.center_);
  }

  /// The terms of c that matter: exponents < r (closed) or <= r (open).
  static Laurent canonical_center(Kind k, const Laurent& c, const Gamma& r) {
    if (k == Kind::All || r.is_infinite()) return c;
    const Gamma cut = k == Kind::Closed ? r : r + Gamma(1, c.ram() * 2);
    if (c.precision() < cut) return c;
    return c.exact_truncation(cut);
  }

  Kind kind_;
  Laurent center_;
  Gamma radius_;
};

}  // namespace vfg
