#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "vfg/gamma.hpp"

namespace vfg {

/// Finite union of intervals of Gamma_inf = Q u {inf}.
///
/// Stored as sorted finite breakpoints p_1 < ... < p_n and the membership of
/// the 2n+1 cells (-inf,p_1), {p_1}, (p_1,p_2), ..., {p_n}, (p_n,+inf), plus
/// membership of the point inf. Normalized: no breakpoint whose three cells agree.
class IntervalSet {
 public:
  IntervalSet() : cells_{false} {}

  static IntervalSet empty() { return IntervalSet(); }
  /// All finite values (the complement universe).
  static IntervalSet finite_line() {
    IntervalSet s;
    s.cells_[0] = true;
    return s;
  }
  static IntervalSet point(const Gamma& g) {
    IntervalSet s;
    if (g.is_infinite()) {
      s.inf_ = true;
      return s;
    }
    s.pts_ = {g};
    s.cells_ = {false, true, false};
    return s;
  }
  /// Interval between lo and hi; `lo_unbounded` means -inf. hi may be inf (included iff hi_closed).
  static IntervalSet interval(bool lo_unbounded, const Gamma& lo, bool lo_closed, const Gamma& hi, bool hi_closed) {
    IntervalSet s;
    s.inf_ = hi.is_infinite() && hi_closed;
    if (lo_unbounded && hi.is_infinite()) {
      s.cells_[0] = true;
      return s;
    }
    if (lo_unbounded) {
      s.pts_ = {hi};
      s.cells_ = {true, hi_closed, false};
      return s;
    }
    if (hi.is_infinite()) {
      s.pts_ = {lo};
      s.cells_ = {false, lo_closed, true};
      return s;
    }
    if (hi < lo || (hi == lo && !(lo_closed && hi_closed))) return s;
    if (hi == lo) return point(lo);
    s.pts_ = {lo, hi};
    s.cells_ = {false, lo_closed, true, hi_closed, false};
    return s;
  }

  bool contains(const Gamma& g) const {
    if (g.is_infinite()) return inf_;
    const auto it = std::lower_bound(pts_.begin(), pts_.end(), g);
    const std::size_t i = static_cast<std::size_t>(it - pts_.begin());
    if (it != pts_.end() && *it == g) return cells_[2 * i + 1];
    return cells_[2 * i];
  }
  bool is_empty() const { return !inf_ && std::none_of(cells_.begin(), cells_.end(), [](bool b) { return b; }); }
  bool contains_inf() const { return inf_; }

  friend IntervalSet operator|(const IntervalSet& a, const IntervalSet& b) { return combine(a, b, [](bool x, bool y) { return x || y; }); }
  friend IntervalSet operator&(const IntervalSet& a, const IntervalSet& b) { return combine(a, b, [](bool x, bool y) { return x && y; }); }
  /// Complement inside Gamma_inf.
  IntervalSet operator~() const {
    IntervalSet r = *this;
    for (std::size_t i = 0; i < r.cells_.size(); ++i) r.cells_[i] = !r.cells_[i];
    r.inf_ = !inf_;
    return r;
  }
  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

  struct Interval {
    bool lo_unbounded;
    Gamma lo;
    bool lo_closed;
    Gamma hi;  // may be infinity
    bool hi_closed;
  };

  /// Maximal intervals in increasing order.
  std::vector<Interval> intervals() const {
    std::vector<Interval> out;
    const std::size_t n = pts_.size();
    bool open = false;
    Interval cur{};
    auto cell_lo = [&](std::size_t c, Interval& iv) {
      if (c == 0) {
        iv.lo_unbounded = true;
      } else if (c % 2 == 1) {
        iv.lo_unbounded = false;
        iv.lo = pts_[c / 2];
        iv.lo_closed = true;
      } else {
        iv.lo_unbounded = false;
        iv.lo = pts_[c / 2 - 1];
        iv.lo_closed = false;
      }
    };
    auto cell_hi = [&](std::size_t c, Interval& iv) {
      if (c == 2 * n) {
        iv.hi = Gamma::infinity();
        iv.hi_closed = inf_;
      } else if (c % 2 == 1) {
        iv.hi = pts_[c / 2];
        iv.hi_closed = true;
      } else {
        iv.hi = pts_[c / 2];
        iv.hi_closed = false;
      }
    };
    for (std::size_t c = 0; c <= 2 * n; ++c) {
      if (cells_[c] && !open) {
        cell_lo(c, cur);
        open = true;
      }
      if (open && (c == 2 * n || !cells_[c + 1])) {
        cell_hi(c, cur);
        out.push_back(cur);
        open = false;
      }
    }
    if (inf_ && (out.empty() || !out.back().hi.is_infinite())) {
      out.push_back(Interval{false, Gamma::infinity(), true, Gamma::infinity(), true});
    }
    return out;
  }

  /// `[0, 3] u {5} u (7, inf]`, or `{}` when empty.
  std::string str() const {
    std::string out;
    for (const auto& iv : intervals()) {
      if (!out.empty()) out += " u ";
      if (!iv.lo_unbounded && iv.lo_closed && iv.hi_closed && iv.lo == iv.hi) {
        out += "{" + iv.lo.str() + "}";
        continue;
      }
      out += iv.lo_unbounded ? "(-inf" : (iv.lo_closed ? "[" : "(") + iv.lo.str();
      out += ", " + iv.hi.str() + (iv.hi_closed ? "]" : ")");
    }
    return out.empty() ? "{}" : out;
  }

 private:
  template <class Op>
  static IntervalSet combine(const IntervalSet& a, const IntervalSet& b, Op op) {
    IntervalSet r;
    std::vector<Gamma> pts;
    std::merge(a.pts_.begin(), a.pts_.end(), b.pts_.begin(), b.pts_.end(), std::back_inserter(pts));
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    r.pts_ = pts;
    r.cells_.assign(2 * pts.size() + 1, false);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      r.cells_[2 * i + 1] = op(a.contains(pts[i]), b.contains(pts[i]));
      r.cells_[2 * i] = op(a.cell_below(pts[i]), b.cell_below(pts[i]));
    }
    const bool top_a = a.cells_.back(), top_b = b.cells_.back();
    r.cells_.back() = op(top_a, top_b);
    r.inf_ = op(a.inf_, b.inf_);
    r.normalize();
    return r;
  }

  /// Membership just below g (g finite).
  bool cell_below(const Gamma& g) const {
    const auto it = std::lower_bound(pts_.begin(), pts_.end(), g);
    return cells_[2 * static_cast<std::size_t>(it - pts_.begin())];
  }

  void normalize() {
    std::vector<Gamma> pts;
    std::vector<bool> cells{cells_[0]};
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      const bool left = cells.back(), at = cells_[2 * i + 1], right = cells_[2 * i + 2];
      if (left == at && at == right) continue;
      pts.push_back(pts_[i]);
      cells.push_back(at);
      cells.push_back(right);
    }
    pts_ = std::move(pts);
    cells_ = std::move(cells);
  }

  std::vector<Gamma> pts_;
  std::vector<bool> cells_;
  bool inf_ = false;
};

}  // namespace vfg
