#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "vfg/defset.hpp"
#include "vfg/elliptic.hpp"
#include "vfg/tate.hpp"
#include "vfg/twisted.hpp"

namespace vfg {

using ojson = nlohmann::ordered_json;

/// A one-dimensional group to be placed in a classification list.
struct GroupDatum {
  enum class Kind { Additive, Multiplicative, UnitBall, PowerSubgroup, Elliptic, TateInput, Twisted };
  Kind kind = Kind::Additive;
  Gamma r;                      // UnitBall
  bool open = false;            // UnitBall
  std::int64_t n = 1;           // PowerSubgroup
  std::optional<Curve> curve;   // Elliptic
  Laurent q, d;                 // TateInput, Twisted
  std::string input;            // as given, for the report
};

enum class ListMode { Acvf, Pl0 };

struct ListEntry {
  ListMode list = ListMode::Acvf;
  int item = 0;
  std::string qualifier;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;
  int samples = 0;
  std::string detail;

  std::string status() const { return skipped ? "skipped" : pass ? "pass" : "fail"; }
};

struct ClassificationReport {
  Field field;
  std::string input;
  std::optional<ReductionType> reduction;
  std::optional<Gamma> v_disc;
  std::optional<MinimalModel> minimal;
  std::optional<Gamma> cyclic_order;
  bool order_at_most_4 = false;
  std::vector<std::pair<std::string, Gamma>> filtration_samples;  // (anchor, level)
  ListEntry entry;
  std::vector<CheckResult> verification;

  ojson to_json() const;
  std::string to_text() const;
};

inline std::string list_label(ListMode m, int item) {
  static const char* acvf[] = {"(K,+)", "(O,+)", "(M,+)", "(K^x,x)", "(O^x,x)", "O(b)/<b>", "(1+M,x)",
                               "(U_r,x)", "(U_r^-,x)", "E_0", "E_0^-", "E_r", "E_r^-", "O_E(b)/<b>"};
  static const char* pl0[] = {"(K,+)", "(O,+)", "((K^x)^n,x)", "((O^x)^n,x)", "O(b)^n/<b^n>", "(U_r,x)", "G(d)^n",
                              "G(d)^-", "G(d)_r", "nE(K)/<eta>", "nE_0(K)", "E_r", "(O_E(b))^n/<b^n>"};
  const int size = m == ListMode::Acvf ? 14 : 13;
  if (item < 1 || item > size) return "?";
  return m == ListMode::Acvf ? acvf[item - 1] : pl0[item - 1];
}

namespace detail {

inline Laurent sample_poly(std::mt19937_64& rng, const Field& K, int lo, int hi, bool unit_lead = false) {
  std::uniform_int_distribution<int> cd(-3, 3);
  std::vector<Laurent::Term> ts;
  for (int k = lo; k <= hi; ++k) {
    int c = cd(rng);
    if (k == lo && (c == 0 || (unit_lead && c == 1))) c = unit_lead ? 2 : 1;
    if (c) ts.emplace_back(static_cast<std::int64_t>(k) * K.ram(), Coeff(c));
  }
  return Laurent::from_terms(ts, K.base(), K.ram(), std::nullopt);
}

/// A smooth affine residue point with small coordinates, if one is found.
inline std::optional<ResiduePoint> find_residue_point(const ResidueCurve& R) {
  const BaseField& k = R.field();
  const auto& [a1, a2, a3, a4, a6] = R.coeffs();
  const long bound = k.is_rational() ? 12 : static_cast<long>(std::min<std::uint64_t>(k.characteristic(), 200));
  for (long i = 0; i < 2 * bound; ++i) {
    const Coeff x = k.from_int(i % 2 ? -(i / 2) - 1 : i / 2);
    // y^2 + (a1 x + a3) y - rhs = 0
    const Coeff b = k.reduce(a1 * x + a3), c = k.reduce(-(x * x * x + a2 * x * x + a4 * x + a6));
    const Coeff disc = k.reduce(b * b - 4 * c);
    const auto s = k.nth_root(disc, 2);
    if (!s) continue;
    const ResiduePoint p = ResiduePoint::affine(x, k.reduce((-b + *s) * k.inv(2)));
    if (R.on_curve(p) && R.is_smooth(p)) return p;
  }
  return std::nullopt;
}

template <class F>
CheckResult run_check(const std::string& name, int samples, F body) {
  CheckResult r{name, true, false, samples, ""};
  try {
    body(r);
  } catch (const Error& e) {
    r.pass = false;
    r.detail = e.what();
  }
  return r;
}

inline Laurent kernel_param(const Curve& C, const CurvePoint& P) {
  return P.inf ? C.field().zero() : -(P.x * C.field().inv(P.y));
}

inline std::vector<std::function<CheckResult()>> elliptic_checks(const Curve& M, std::uint64_t seed) {
  std::vector<std::function<CheckResult()>> out;
  const Field K = M.field();
  auto kernel_point = [K, M](std::mt19937_64& rng, int v) {
    return lift_point(M, ResiduePoint::infinity(), sample_poly(rng, K, v, v + 2));
  };
  out.push_back([=] {
    return run_check("group_law", 8, [&](CheckResult& r) {
      std::mt19937_64 rng(seed + 1);
      for (int i = 0; i < r.samples; ++i) {
        const CurvePoint a = kernel_point(rng, 1 + i % 2), b = kernel_point(rng, 1), c = kernel_point(rng, 2);
        const bool ok = same_point(M.add(M.add(a, b), c), M.add(a, M.add(b, c))) && same_point(M.add(a, b), M.add(b, a)) &&
                        M.add(a, M.neg(a)).inf && M.on_curve(M.add(a, b));
        r.pass = r.pass && ok;
      }
    });
  });
  out.push_back([=] {
    return run_check("reduction_homomorphism", 8, [&](CheckResult& r) {
      const ResidueCurve R = M.residue_curve();
      const auto base = find_residue_point(R);
      if (!base) {
        r.skipped = true;
        r.detail = "no small smooth residue point";
        return;
      }
      std::mt19937_64 rng(seed + 2);
      const auto [fy, fx] = R.gradient(*base);
      const Coeff free = fy != 0 ? base->x : base->y;
      for (int i = 0; i < r.samples; ++i) {
        const CurvePoint a = lift_point(M, *base, K.constant(free) + sample_poly(rng, K, 1, 3));
        const CurvePoint b = i % 2 ? kernel_point(rng, 1) : a;
        r.pass = r.pass && reduce_point(M, M.add(a, b)) == R.add(reduce_point(M, a), reduce_point(M, b));
      }
    });
  });
  out.push_back([=] {
    return run_check("formal_group_estimates", 20, [&](CheckResult& r) {
      std::mt19937_64 rng(seed + 3);
      for (int i = 0; i < r.samples; ++i) {
        const CurvePoint a = kernel_point(rng, 1 + i % 3), b = kernel_point(rng, 1 + (i / 3) % 3);
        const Laurent fa = kernel_param(M, a), fb = kernel_param(M, b), fab = kernel_param(M, M.add(a, b));
        r.pass = r.pass && (fab - fa - fb).valuation_bound() >= fa.valuation() + fb.valuation() &&
                 (kernel_param(M, M.neg(a)) + fa).valuation_bound() >= 2 * fa.valuation();
      }
    });
  });
  out.push_back([=] {
    return run_check("filtration_ultrametric", 20, [&](CheckResult& r) {
      std::mt19937_64 rng(seed + 4);
      for (int i = 0; i < r.samples; ++i) {
        const CurvePoint a = kernel_point(rng, 1 + i % 3), b = kernel_point(rng, 1 + (i / 3) % 3);
        const Gamma la = filtration(M, a).level, lb = filtration(M, b).level;
        r.pass = r.pass && filtration(M, M.add(a, b)).level >= min(la, lb) && filtration(M, M.neg(a)).level == la;
      }
    });
  });
  out.push_back([=] {
    return run_check("quotient_additivity", 10, [&](CheckResult& r) {
      std::mt19937_64 rng(seed + 5);
      for (int i = 0; i < r.samples; ++i) {
        const Gamma lv(1 + i % 2);
        const CurvePoint a = kernel_point(rng, 1 + i % 2), b = kernel_point(rng, 1 + i % 2);
        const Coeff sum = K.base().add(quotient_class(M, a, lv), quotient_class(M, b, lv));
        r.pass = r.pass && quotient_class(M, M.add(a, b), lv) == sum;
      }
    });
  });
  out.push_back([=] {
    return run_check("quotient_fibers", 10, [&](CheckResult& r) {
      // E_r is the full preimage of k under the class map at level r
      std::mt19937_64 rng(seed + 6);
      for (int i = 0; i < r.samples; ++i) {
        const int lv = 1 + i % 3;
        const Laurent anchor = sample_poly(rng, K, lv, lv + 2);
        const CurvePoint a = lift_point(M, ResiduePoint::infinity(), anchor);
        const Coeff c = quotient_class(M, a, Gamma(lv));
        r.pass = r.pass && c == anchor.lead() && in_E_r(M, a, Gamma(lv)) && !in_E_r(M, a, Gamma(lv), true);
      }
    });
  });
  return out;
}

inline std::vector<std::function<CheckResult()>> tate_checks(const TateCurve& T, std::uint64_t seed) {
  std::vector<std::function<CheckResult()>> out;
  const Field K = T.curve.field();
  out.push_back([=] {
    return run_check("tate_homomorphism", 6, [&](CheckResult& r) {
      std::mt19937_64 rng(seed + 11);
      for (int i = 0; i < r.samples; ++i) {
        const Laurent u1 = sample_poly(rng, K, i % 3, i % 3 + 2, true), u2 = sample_poly(rng, K, (i / 3) % 2, 3, true);
        r.pass = r.pass && same_point(tate_map(T, u1 * u2), T.curve.add(tate_map(T, u1), tate_map(T, u2)));
      }
    });
  });
  out.push_back([=] {
    return run_check("tate_kernel", 5, [&](CheckResult& r) {
      for (int m = -2; m <= 2; ++m) r.pass = r.pass && tate_map(T, K.pow(T.q, m)).inf;
    });
  });
  out.push_back([=] {
    const int l = T.ell.is_integer() ? static_cast<int>(T.ell.floor()) : 0;
    return run_check("component_classes", l, [&](CheckResult& r) {
      if (l < 1 || K.ram() != 1) {
        r.skipped = true;
        r.detail = "needs an integral v(q) and e = 1";
        return;
      }
      std::vector<Gamma> seen;
      for (int i = 0; i < l; ++i) {
        const Gamma c = fold_mod(component_w(T.curve, tate_map(T, K.t(Gamma(i)))), T.ell);
        r.pass = r.pass && std::find(seen.begin(), seen.end(), c) == seen.end();
        seen.push_back(c);
      }
    });
  });
  return out;
}

inline std::vector<std::function<CheckResult()>> twisted_checks(const QuadExt& L, std::uint64_t seed) {
  std::vector<std::function<CheckResult()>> out;
  const Field K = L.field();
  out.push_back([=] {
    return run_check("norm_multiplicativity", 20, [&](CheckResult& r) {
      std::mt19937_64 rng(seed + 21);
      for (int i = 0; i < r.samples; ++i) {
        const TwistedElement x = gd_from_parameter(L, sample_poly(rng, K, 0, 2));
        const TwistedElement y = gd_from_parameter(L, sample_poly(rng, K, 0, 2));
        const TwistedElement z = gd_mul(L, x, y);
        r.pass = r.pass && equal_to_precision(gd_norm(L, z.a, z.b), K.one()) && gd_valuation(L, z.a, z.b) == Gamma(0);
      }
    });
  });
  out.push_back([=] {
    return run_check("valuation_formula", 20, [&](CheckResult& r) {
      std::mt19937_64 rng(seed + 22);
      for (int i = 0; i < r.samples; ++i) {
        const int va = static_cast<int>(rng() % 5) - 2, vb = static_cast<int>(rng() % 5) - 2;
        const Laurent a = sample_poly(rng, K, va, va + 2), b = sample_poly(rng, K, vb, vb + 2);
        const auto h = gd_half_norm_valuation(L, a, b);
        r.pass = r.pass && h && *h == gd_valuation(L, a, b);
      }
    });
  });
  out.push_back([=] {
    return run_check("kernel_relation", 20, [&](CheckResult& r) {
      std::mt19937_64 rng(seed + 23);
      const int lo = L.ramified() ? 0 : 1;
      for (int i = 0; i < r.samples; ++i) {
        const Laurent b = sample_poly(rng, K, lo + i % 3, lo + 3);
        const TwistedElement x = gd_solve_from_b(L, b);
        r.pass = r.pass && gd_level(L, x, Gamma(1, 2)).level == b.valuation() + L.shift();
      }
    });
  });
  out.push_back([=] {
    return run_check("f_near_additivity", 20, [&](CheckResult& r) {
      std::mt19937_64 rng(seed + 24);
      const int lo = L.ramified() ? 0 : 1;
      for (int i = 0; i < r.samples; ++i) {
        const TwistedElement x = gd_solve_from_b(L, sample_poly(rng, K, lo + i % 2, lo + 3));
        const TwistedElement y = gd_solve_from_b(L, sample_poly(rng, K, lo + (i / 2) % 2, lo + 3));
        const TwistedElement z = gd_mul(L, x, y);
        r.pass = r.pass && (z.b - x.b - y.b).valuation_bound() > x.b.valuation() + y.b.valuation();
      }
    });
  });
  return out;
}

inline std::vector<std::function<CheckResult()>> power_checks(const Field& K, std::int64_t n, std::uint64_t seed) {
  std::vector<std::function<CheckResult()>> out;
  out.push_back([=] {
    return run_check("nth_power_membership", 20, [&](CheckResult& r) {
      std::mt19937_64 rng(seed + 31);
      for (int i = 0; i < r.samples; ++i) {
        const Laurent x = sample_poly(rng, K, -2 + i % 5, 2 + i % 5);
        const Laurent y = K.pow(x, n);
        const NthPowerResult p = nth_power(K, y, n);
        bool ok = p.is_power && p.root && equal_to_precision(K.pow(*p.root, n), y);
        if (n > 1) ok = ok && !nth_power(K, y * K.t(), n).is_power;
        r.pass = r.pass && ok;
      }
    });
  });
  return out;
}

inline std::vector<std::function<CheckResult()>> ball_checks(const Field& K, const Gamma& rad, bool open, bool additive,
                                                              std::uint64_t seed) {
  std::vector<std::function<CheckResult()>> out;
  out.push_back([=] {
    return run_check(additive ? "ball_subgroup" : "unit_ball_subgroup", 20, [&](CheckResult& r) {
      std::mt19937_64 rng(seed + 41);
      const Laurent c = additive ? K.zero() : K.one();
      const Ball B = open ? Ball::open(c, rad) : Ball::closed(c, rad);
      const int lo = std::max<std::int64_t>(0, rad.ceil()) + (open && rad.is_integer() ? 1 : 0);
      for (int i = 0; i < r.samples; ++i) {
        const Laurent a = c + sample_poly(rng, K, lo, lo + 3), b = c + sample_poly(rng, K, lo + i % 2, lo + 3);
        const Laurent prod = additive ? a - b : a * K.inv(b);
        r.pass = r.pass && B.contains(a) && B.contains(b) && B.contains(prod);
      }
    });
  });
  out.push_back([=] {
    return run_check("v_aas", 1, [&](CheckResult& r) {
      const Laurent z = K.zero();
      const Laurent c = additive ? z : K.one();
      const DefSet s = DefSet::ball(open ? Ball::open(c, rad) : Ball::closed(c, rad));
      const auto rep = aas_v(s, z);
      r.detail = rep.saturated ? "saturated" : std::to_string(rep.exceptional.size()) + " exceptional";
      r.pass = rep.exceptional.size() <= 1;
    });
  });
  return out;
}

/// Runs the checks on `threads` workers; results keep the input order.
inline std::vector<CheckResult> run_all(const std::vector<std::function<CheckResult()>>& checks, int threads) {
  std::vector<CheckResult> out(checks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < checks.size();) out[i] = checks[i]();
  };
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(checks.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

inline void classify_elliptic(ClassificationReport& rep, const Curve& M, ListMode mode) {
  const ReductionType rt = reduction_type_of_model(M);
  rep.reduction = rt;
  using RK = ReductionType::Kind;
  if (rt.kind == RK::SplitMult) rep.cyclic_order = rep.v_disc;
  if (rt.kind == RK::Additive || rt.kind == RK::NonsplitMult) rep.order_at_most_4 = true;
  for (int r = 1; r <= 3; ++r) {
    const Laurent anchor = M.field().t(Gamma(r));
    rep.filtration_samples.emplace_back(anchor.str(), filtration(M, lift_point(M, ResiduePoint::infinity(), anchor)).level);
  }
  if (mode == ListMode::Acvf) {
    rep.entry.item = rt.multiplicative() ? 14 : 10;
    if (rt.kind == RK::Additive) rep.entry.qualifier = "finite index subgroup E_0; filtration E_0^- > E_r sampled";
    if (rt.kind == RK::NonsplitMult) rep.entry.qualifier = "splits over a quadratic extension of k";
  } else {
    switch (rt.kind) {
      case RK::Good: rep.entry.item = 10; break;
      case RK::SplitMult: rep.entry.item = 13; break;
      default: rep.entry.item = 11; rep.entry.qualifier = "E(K)/E_0(K) of order at most 4"; break;
    }
  }
}

}  // namespace detail

struct ClassifyOptions {
  ListMode mode = ListMode::Acvf;
  int threads = 1;
  std::uint64_t seed = 20240601;
};

inline ClassificationReport classify_report(const Field& K, const GroupDatum& g, const ClassifyOptions& opt = {}) {
  ClassificationReport rep{K, g.input, {}, {}, {}, {}, false, {}, {opt.mode, 0, ""}, {}};
  const bool acvf = opt.mode == ListMode::Acvf;
  std::vector<std::function<CheckResult()>> checks;
  using GK = GroupDatum::Kind;
  switch (g.kind) {
    case GK::Additive:
      rep.entry.item = 1;
      checks = detail::ball_checks(K, Gamma(0), false, true, opt.seed);
      break;
    case GK::Multiplicative:
      rep.entry.item = acvf ? 4 : 3;
      if (!acvf) rep.entry.qualifier = "n = 1";
      checks = detail::power_checks(K, 2, opt.seed);
      break;
    case GK::UnitBall:
      if (g.r < Gamma(0)) fail(ErrorKind::BadParameter, "unit ball radius must be >= 0");
      if (acvf) {
        rep.entry.item = g.r == Gamma(0) ? (g.open ? 7 : 5) : (g.open ? 9 : 8);
      } else {
        rep.entry.item = g.r == Gamma(0) && !g.open ? 4 : 6;
        if (rep.entry.item == 4) rep.entry.qualifier = "n = 1";
        else if (g.open || !g.r.is_integer()) rep.entry.qualifier = "U_r for the next integral radius";
      }
      checks = detail::ball_checks(K, g.r, g.open, false, opt.seed);
      break;
    case GK::PowerSubgroup:
      if (g.n < 1) fail(ErrorKind::BadParameter, "power n must be positive");
      rep.entry.item = acvf ? 4 : 3;
      rep.entry.qualifier = acvf ? "(K^x)^n = K^x in an algebraically closed field" : "n = " + std::to_string(g.n);
      checks = detail::power_checks(K, g.n, opt.seed);
      break;
    case GK::Elliptic: {
      const MinimalModel M = minimal_model(*g.curve);
      rep.minimal = M;
      rep.v_disc = M.v_disc;
      detail::classify_elliptic(rep, M.curve, opt.mode);
      checks = detail::elliptic_checks(M.curve, opt.seed);
      break;
    }
    case GK::TateInput: {
      const TateCurve T = tate_curve(K, g.q);
      const MinimalModel M = minimal_model(T.curve);
      rep.minimal = M;
      rep.v_disc = T.curve.disc().valuation();
      detail::classify_elliptic(rep, T.curve, opt.mode);
      checks = detail::elliptic_checks(T.curve, opt.seed);
      for (auto& c : detail::tate_checks(T, opt.seed)) checks.push_back(std::move(c));
      break;
    }
    case GK::Twisted: {
      const QuadExt L(K, g.d);
      if (acvf) {
        rep.entry.item = 4;
        rep.entry.qualifier = "d is a square over the algebraic closure: G(d) = K^x";
      } else {
        rep.entry.item = L.ramified() ? 8 : 7;
        if (!L.ramified()) rep.entry.qualifier = "n = 1";
      }
      checks = detail::twisted_checks(L, opt.seed);
      break;
    }
  }
  rep.verification = detail::run_all(checks, opt.threads);
  return rep;
}

inline ojson ClassificationReport::to_json() const {
  ojson j;
  j["schema"] = 1;
  const auto p = field.base().characteristic();
  j["field_mode"] = {{"base", p == 0 ? "q" : "fp"},
                     {"p", p == 0 ? ojson(nullptr) : ojson(std::to_string(p))},
                     {"e", std::to_string(field.ram())},
                     {"prec", field.prec().str()}};
  j["input"] = input;
  j["reduction_type"] = reduction ? ojson(reduction->name()) : ojson(nullptr);
  if (reduction && reduction->kind == ReductionType::Kind::NonsplitMult) j["splitting_class"] = reduction->d.get_str();
  j["v_disc"] = v_disc ? ojson(v_disc->str()) : ojson(nullptr);
  if (minimal)
    j["minimal_model"] = {{"A", minimal->curve.a4().str()}, {"B", minimal->curve.a6().str()}, {"u", minimal->T.u.str()},
                          {"certificate", minimal->certificate}};
  else
    j["minimal_model"] = nullptr;
  if (cyclic_order)
    j["component_group"] = {{"cyclic_order", cyclic_order->str()}};
  else if (order_at_most_4)
    j["component_group"] = {{"order_at_most", "4"}};
  else
    j["component_group"] = nullptr;
  ojson fs = ojson::array();
  for (const auto& [a, l] : filtration_samples) fs.push_back({{"anchor", a}, {"level", l.str()}});
  j["filtration_samples"] = fs;
  j["list_entry"] = {{"proposition", entry.list == ListMode::Acvf ? "acvf" : "pl0"},
                     {"item", entry.item},
                     {"label", list_label(entry.list, entry.item)}};
  if (!entry.qualifier.empty()) j["list_entry"]["qualifier"] = entry.qualifier;
  ojson ver = ojson::array();
  for (const auto& c : verification) {
    ojson o = {{"name", c.name}, {"status", c.status()}, {"samples", std::to_string(c.samples)}};
    if (!c.detail.empty()) o["detail"] = c.detail;
    ver.push_back(o);
  }
  j["verification"] = ver;
  return j;
}

inline std::string ClassificationReport::to_text() const {
  std::string s;
  auto line = [&](const std::string& k, const std::string& v) { s += k + ": " + v + "\n"; };
  line("field", field.str());
  line("input", input);
  if (reduction) line("reduction", reduction->str());
  if (v_disc) line("v_disc", v_disc->str());
  if (minimal)
    line("minimal_model", minimal->curve.str() + " via u = " + minimal->T.u.str() +
                              (minimal->certificate.empty() ? "" : " (" + minimal->certificate + ")"));
  if (cyclic_order) line("component_group", "cyclic of order " + cyclic_order->str());
  if (order_at_most_4) line("component_group", "order at most 4");
  for (const auto& [a, l] : filtration_samples) line("filtration", "anchor " + a + " -> level " + l.str());
  line("list_entry", std::string(entry.list == ListMode::Acvf ? "acvf" : "pl0") + " item " + std::to_string(entry.item) +
                         " " + list_label(entry.list, entry.item) + (entry.qualifier.empty() ? "" : " [" + entry.qualifier + "]"));
  for (const auto& c : verification)
    line("check " + c.name, c.status() + " (" + std::to_string(c.samples) + " samples)" + (c.detail.empty() ? "" : " " + c.detail));
  return s;
}

}  // namespace vfg
