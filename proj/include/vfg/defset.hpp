#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vfg/ball.hpp"
#include "vfg/interval.hpp"
#include "vfg/valfield.hpp"

namespace vfg {

/// Total order on centers used for canonical output: valuation, leading
/// coefficient, then the full term list.
inline bool center_less(const Laurent& a, const Laurent& b) {
  const Gamma va = a.valuation_bound(), vb = b.valuation_bound();
  if (va != vb) return va < vb;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  const std::int64_t ea = a.ram(), eb = b.ram();
  for (std::size_t i = 0; i < std::min(ta.size(), tb.size()); ++i) {
    const Gamma ga(ta[i].first, ea), gb(tb[i].first, eb);
    if (ga != gb) return ga < gb;
    if (ta[i].second != tb[i].second) return ta[i].second < tb[i].second;
  }
  if (ta.size() != tb.size()) return ta.size() < tb.size();
  return a.precision() < b.precision();
}

/// Canonical ball order: larger balls first, then centers.
inline bool ball_less(const Ball& a, const Ball& b) {
  const int s = a.size_order(b);
  if (s != 0) return s < 0;
  if (a.is_all()) return false;
  return center_less(a.center(), b.center());
}

/// outer minus the union of holes.
struct SwissCheese {
  Ball outer = Ball::all();
  std::vector<Ball> holes;

  bool contains(const Laurent& x) const {
    if (!outer.contains(x)) return false;
    return std::none_of(holes.begin(), holes.end(), [&](const Ball& h) { return h.contains(x); });
  }

  /// `B(0, 0) \ (B-(0, 0); {1})`
  std::string str() const {
    std::string s = outer.str();
    if (holes.empty()) return s;
    s += " \\ (";
    for (std::size_t i = 0; i < holes.size(); ++i) s += (i ? "; " : "") + holes[i].str();
    return s + ")";
  }
};

/// Finite union of Swiss cheeses. Values returned by the set operations are
/// normalized: pieces pairwise disjoint, each hole a maximal ball of the complement
/// inside its piece, pieces and holes in canonical order.
class DefSet {
 public:
  DefSet() = default;
  explicit DefSet(std::vector<SwissCheese> pieces) : pieces_(std::move(pieces)) {}

  static DefSet empty() { return DefSet(); }
  static DefSet all() { return DefSet({SwissCheese{}}); }
  static DefSet ball(const Ball& b) { return DefSet({SwissCheese{b, {}}}); }
  static DefSet cheese(const Ball& outer, std::vector<Ball> holes) { return DefSet({SwissCheese{outer, std::move(holes)}}); }

  const std::vector<SwissCheese>& pieces() const { return pieces_; }
  bool is_empty() const { return pieces_.empty(); }

  bool contains(const Laurent& x) const {
    return std::any_of(pieces_.begin(), pieces_.end(), [&](const SwissCheese& p) { return p.contains(x); });
  }

  friend bool operator==(const DefSet& a, const DefSet& b) { return a.str() == b.str(); }

  std::string str() const {
    if (pieces_.empty()) return "empty";
    std::string s;
    for (std::size_t i = 0; i < pieces_.size(); ++i) s += (i ? " | " : "") + pieces_[i].str();
    return s;
  }

 private:
  std::vector<SwissCheese> pieces_;
};

namespace detail {

/// Laminar tree of balls. Node 0 is K. The region of a node (the node minus
/// its children) is nonempty in any algebraically closed valued field, so
/// regions are the atoms of the boolean algebra generated by the balls.
class BallTree {
 public:
  explicit BallTree(std::vector<Ball> balls) {
    nodes_.push_back(Node{Ball::all(), -1, {}});
    std::sort(balls.begin(), balls.end(), ball_less);
    for (const Ball& b : balls) insert(b);
  }

  std::size_t size() const { return nodes_.size(); }
  const Ball& ball(std::size_t i) const { return nodes_[i].ball; }
  int parent(std::size_t i) const { return nodes_[i].parent; }
  const std::vector<std::size_t>& children(std::size_t i) const { return nodes_[i].children; }

  /// Regions contained in the set: node i is marked iff region(i) is in s.
  std::vector<char> marks(const DefSet& s) const {
    std::vector<char> m(nodes_.size(), 0);
    for (const SwissCheese& p : s.pieces()) {
      const auto o = find(p.outer);
      std::vector<std::size_t> hs;
      for (const Ball& h : p.holes) hs.push_back(find(h));
      mark_subtree(o, hs, m);
    }
    return m;
  }

  /// Read a marking back into normal form.
  DefSet extract(const std::vector<char>& m) const {
    std::vector<SwissCheese> pieces;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!m[i]) continue;
      if (nodes_[i].parent >= 0 && m[static_cast<std::size_t>(nodes_[i].parent)]) continue;
      SwissCheese sc{nodes_[i].ball, {}};
      collect_holes(i, m, sc.holes);
      std::sort(sc.holes.begin(), sc.holes.end(), ball_less);
      pieces.push_back(std::move(sc));
    }
    std::sort(pieces.begin(), pieces.end(), [](const SwissCheese& a, const SwissCheese& b) { return ball_less(a.outer, b.outer); });
    return DefSet(std::move(pieces));
  }

 private:
  struct Node {
    Ball ball;
    int parent;
    std::vector<std::size_t> children;
  };

  void insert(const Ball& b) {
    std::size_t cur = 0;
    for (;;) {
      if (nodes_[cur].ball.compare(b) == Ball::Relation::Equal) return;
      bool moved = false;
      for (std::size_t c : nodes_[cur].children) {
        const auto rel = nodes_[c].ball.compare(b);
        if (rel == Ball::Relation::Equal) return;
        if (rel == Ball::Relation::Contains) {
          cur = c;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    nodes_.push_back(Node{b, static_cast<int>(cur), {}});
    nodes_[cur].children.push_back(nodes_.size() - 1);
  }

  std::size_t find(const Ball& b) const {
    std::size_t cur = 0;
    for (;;) {
      if (nodes_[cur].ball.compare(b) == Ball::Relation::Equal) return cur;
      bool moved = false;
      for (std::size_t c : nodes_[cur].children) {
        const auto rel = nodes_[c].ball.compare(b);
        if (rel == Ball::Relation::Equal || rel == Ball::Relation::Contains) {
          cur = c;
          moved = true;
          break;
        }
      }
      if (!moved) fail(ErrorKind::BadParameter, "ball " + b.str() + " missing from tree");
    }
  }

  void mark_subtree(std::size_t i, const std::vector<std::size_t>& holes, std::vector<char>& m) const {
    if (std::find(holes.begin(), holes.end(), i) != holes.end()) return;
    m[i] = 1;
    for (std::size_t c : nodes_[i].children) mark_subtree(c, holes, m);
  }

  void collect_holes(std::size_t i, const std::vector<char>& m, std::vector<Ball>& out) const {
    for (std::size_t c : nodes_[i].children) {
      if (m[c]) {
        collect_holes(c, m, out);
      } else {
        out.push_back(nodes_[c].ball);
      }
    }
  }

  std::vector<Node> nodes_;
};

inline void gather_balls(const DefSet& s, std::vector<Ball>& out) {
  for (const SwissCheese& p : s.pieces()) {
    out.push_back(p.outer);
    for (const Ball& h : p.holes) out.push_back(h);
  }
}

inline DefSet combine(const DefSet& a, const DefSet& b, const std::function<bool(bool, bool)>& op) {
  std::vector<Ball> balls;
  gather_balls(a, balls);
  gather_balls(b, balls);
  const BallTree tree(std::move(balls));
  const auto ma = tree.marks(a), mb = tree.marks(b);
  std::vector<char> m(tree.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = op(ma[i] != 0, mb[i] != 0) ? 1 : 0;
  return tree.extract(m);
}

}  // namespace detail

inline DefSet normalize(const DefSet& s) { return detail::combine(s, DefSet::empty(), [](bool x, bool) { return x; }); }
inline DefSet set_union(const DefSet& a, const DefSet& b) { return detail::combine(a, b, [](bool x, bool y) { return x || y; }); }
inline DefSet set_intersect(const DefSet& a, const DefSet& b) { return detail::combine(a, b, [](bool x, bool y) { return x && y; }); }
inline DefSet set_difference(const DefSet& a, const DefSet& b) { return detail::combine(a, b, [](bool x, bool y) { return x && !y; }); }
inline DefSet set_complement(const DefSet& a) { return detail::combine(a, DefSet::empty(), [](bool x, bool) { return !x; }); }
inline bool set_equal(const DefSet& a, const DefSet& b) {
  return detail::combine(a, b, [](bool x, bool y) { return x != y; }).is_empty();
}
inline bool set_subset(const DefSet& a, const DefSet& b) { return set_difference(a, b).is_empty(); }

/// v^-1(g): the sphere {v(x) = g}, or {0} for g = inf.
inline DefSet v_fiber(const Laurent& zero, const Gamma& g) {
  if (g.is_infinite()) return DefSet::ball(Ball::point(zero));
  return DefSet::cheese(Ball::closed(zero, g), {Ball::open(zero, g)});
}

/// res^-1(a) = a + M.
inline DefSet res_fiber(const Laurent& a) { return DefSet::ball(Ball::open(a, Gamma(0))); }

/// Image of a set under v, as a subset of Gamma_inf.
inline IntervalSet v_image(const DefSet& s) {
  const DefSet n = normalize(s);
  IntervalSet out;
  for (const SwissCheese& p : n.pieces()) {
    const Ball& o = p.outer;
    if (!o.is_all() && !o.center().is_zero_to_precision() && !o.radius_admits(o.center())) {
      // 0 not in the outer ball: v is constant on it
      out = out | IntervalSet::point(o.center().valuation());
      continue;
    }
    if (o.is_point()) {
      out = out | IntervalSet::point(Gamma::infinity());
      continue;
    }
    // outer is a ball around 0; only a hole around 0 cuts the valuation range
    Gamma hi = Gamma::infinity();
    bool hi_closed = true;
    for (const Ball& h : p.holes) {
      if (!h.radius_admits(h.center())) continue;
      if (h.is_point()) {
        hi_closed = false;
      } else {
        hi = h.radius();
        hi_closed = h.is_open();
      }
    }
    out = out | IntervalSet::interval(o.is_all(), o.is_all() ? Gamma(0) : o.radius(), !o.is_open(), hi, hi_closed);
  }
  return out;
}

/// Outcome of an aas analysis: fibers over values outside `exceptional` lie
/// wholly inside or wholly outside the set.
template <class T>
struct AasReport {
  bool saturated = false;
  std::vector<T> exceptional;
};

/// Exceptional values of v on s. Candidates are the valuations of hole and
/// outer centers that lie off 0; each is confirmed by an exact fiber test.
inline AasReport<Gamma> aas_v(const DefSet& s, const Laurent& zero) {
  const DefSet n = normalize(s);
  std::vector<Gamma> cand;
  auto off_zero = [&](const Ball& b) {
    if (b.is_all()) return;
    if (b.center().is_zero_to_precision() && b.center().is_exact()) return;
    if (b.radius_admits(b.center())) return;  // 0 in b
    cand.push_back(b.center().valuation());
  };
  for (const SwissCheese& p : n.pieces()) {
    off_zero(p.outer);
    for (const Ball& h : p.holes) off_zero(h);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  AasReport<Gamma> r;
  for (const Gamma& g : cand) {
    const DefSet f = v_fiber(zero, g);
    const DefSet i = set_intersect(n, f);
    if (!i.is_empty() && !set_equal(i, f)) r.exceptional.push_back(g);
  }
  r.saturated = r.exceptional.empty();
  return r;
}

/// Image of a subset of O under res: either a finite list of residues or the
/// whole residue field minus a finite list.
struct ResImage {
  bool cofinite = false;
  std::vector<Coeff> listed;  // members if !cofinite, omitted residues if cofinite
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < listed.size(); ++i) s += (i ? ", " : "") + listed[i].get_str();
    return cofinite ? (listed.empty() ? "k" : "k \\ {" + s + "}") : "{" + s + "}";
  }
};

namespace detail {
inline void check_in_O(const DefSet& n) {
  for (const SwissCheese& p : n.pieces()) {
    const Ball& o = p.outer;
    const bool in_o = !o.is_all() && o.radius() >= Gamma(0) && is_integral(o.center());
    if (!in_o) fail(ErrorKind::NotInDomain, "res is defined on O only; piece " + p.str() + " leaves O");
  }
}

inline std::vector<Coeff> res_candidates(const DefSet& n) {
  std::vector<Coeff> cand;
  for (const SwissCheese& p : n.pieces()) {
    cand.push_back(residue(p.outer.center()));
    for (const Ball& h : p.holes) cand.push_back(residue(h.center()));
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  return cand;
}
}  // namespace detail

/// The aas condition for res: O -> k. NotInDomain unless s lies in O.
inline AasReport<Coeff> aas_res(const DefSet& s, const Field& K) {
  const DefSet n = normalize(s);
  detail::check_in_O(n);
  AasReport<Coeff> r;
  for (const Coeff& a : detail::res_candidates(n)) {
    const DefSet f = res_fiber(K.constant(a));
    const DefSet i = set_intersect(n, f);
    if (!i.is_empty() && !set_equal(i, f)) r.exceptional.push_back(a);
  }
  r.saturated = r.exceptional.empty();
  return r;
}

inline ResImage res_image(const DefSet& s, const Field& K) {
  const DefSet n = normalize(s);
  detail::check_in_O(n);
  ResImage img;
  // a generic residue class meets s iff some piece has outer B(c, 0)
  img.cofinite = std::any_of(n.pieces().begin(), n.pieces().end(), [](const SwissCheese& p) {
    return !p.outer.is_open() && p.outer.radius() == Gamma(0);
  });
  for (const Coeff& a : detail::res_candidates(n)) {
    const bool meets = !set_intersect(n, res_fiber(K.constant(a))).is_empty();
    if (meets != img.cofinite) img.listed.push_back(a);
  }
  return img;
}

/// v^-1(v(s)) as a definable set.
inline DefSet v_saturation(const DefSet& s, const Laurent& zero) {
  DefSet out;
  for (const auto& iv : v_image(s).intervals()) {
    if (iv.lo.is_infinite() && !iv.lo_unbounded) {
      out = set_union(out, v_fiber(zero, Gamma::infinity()));
      continue;
    }
    const Ball outer = iv.lo_unbounded ? Ball::all() : (iv.lo_closed ? Ball::closed(zero, iv.lo) : Ball::open(zero, iv.lo));
    std::vector<Ball> holes;
    if (iv.hi.is_infinite()) {
      if (!iv.hi_closed) holes.push_back(Ball::point(zero));
    } else {
      holes.push_back(iv.hi_closed ? Ball::open(zero, iv.hi) : Ball::closed(zero, iv.hi));
    }
    out = set_union(out, DefSet::cheese(outer, holes));
  }
  return out;
}

/// res^-1(res(s)) for s in O (the image is one of finite or cofinite).
inline DefSet res_saturation(const DefSet& s, const Field& K) {
  const ResImage img = res_image(s, K);
  DefSet listed;
  for (const Coeff& a : img.listed) listed = set_union(listed, res_fiber(K.constant(a)));
  if (!img.cofinite) return listed;
  return set_difference(DefSet::ball(Ball::closed(K.zero(), Gamma(0))), listed);
}

}  // namespace vfg
