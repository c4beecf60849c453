#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vfg/classify.hpp"
#include "vfg/formula.hpp"

namespace vfg {

namespace cli {

struct Output {
  ojson json;
  std::string text;
};

/// Splits "a, b, c" at commas outside parentheses and brackets.
inline std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

/// The text between `open` and `close`, when s has the form prefix open ... close.
inline std::optional<std::string> bracketed(const std::string& s, const std::string& prefix, char open, char close) {
  const std::string t = trim(s);
  if (t.size() < prefix.size() + 2 || t.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  if (t[prefix.size()] != open || t.back() != close) return std::nullopt;
  return t.substr(prefix.size() + 1, t.size() - prefix.size() - 2);
}

inline Curve parse_curve(const Field& K, const std::string& s) {
  if (auto body = bracketed(s, "short", '[', ']')) {
    const auto parts = split_top(*body);
    if (parts.size() != 2) fail(ErrorKind::SyntaxError, "short[A,B] needs two coefficients: " + s);
    return Curve::short_form(K, K.parse(parts[0]), K.parse(parts[1]));
  }
  if (auto body = bracketed(s, "", '[', ']')) {
    const auto p = split_top(*body);
    if (p.size() != 5) fail(ErrorKind::SyntaxError, "[a1,a2,a3,a4,a6] needs five coefficients: " + s);
    return Curve(K, K.parse(p[0]), K.parse(p[1]), K.parse(p[2]), K.parse(p[3]), K.parse(p[4]));
  }
  fail(ErrorKind::SyntaxError, "curve must be [a1,a2,a3,a4,a6] or short[A,B]: " + s);
}

inline std::pair<std::string, std::string> parse_pair(const std::string& s) {
  const auto body = bracketed(s, "", '(', ')');
  if (!body) fail(ErrorKind::SyntaxError, "expected (X,Y): " + s);
  const auto parts = split_top(*body);
  if (parts.size() != 2) fail(ErrorKind::SyntaxError, "expected two coordinates: " + s);
  return {parts[0], parts[1]};
}

inline CurvePoint parse_point(const Field& K, const std::string& s) {
  if (trim(s) == "inf") return CurvePoint::infinity();
  const auto [x, y] = parse_pair(s);
  return CurvePoint::affine(K.parse(x), K.parse(y));
}

inline Coeff parse_coeff(const BaseField& k, const std::string& s) {
  const std::string t = trim(s);
  const bool ok = !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-'; });
  Coeff c;
  if (!ok || c.set_str(t, 10) != 0) fail(ErrorKind::SyntaxError, "expected a rational residue: " + s);
  if (c.get_den() == 0) fail(ErrorKind::DivisionByZero, "zero denominator in " + s);
  c.canonicalize();
  return k.reduce(c);
}

inline ResiduePoint parse_residue_point(const BaseField& k, const std::string& s) {
  if (trim(s) == "inf") return ResiduePoint::infinity();
  const auto [x, y] = parse_pair(s);
  return ResiduePoint::affine(parse_coeff(k, x), parse_coeff(k, y));
}

inline std::int64_t parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::SyntaxError, std::string(what) + " must be an integer: " + s);
}

inline Output value(const std::string& key, const std::string& v) { return Output{ojson{{key, v}}, v + "\n"}; }

inline Output keyed(const std::vector<std::pair<std::string, std::string>>& kv) {
  Output o{ojson::object(), ""};
  for (const auto& [k, v] : kv) {
    o.json[k] = v;
    o.text += k + ": " + v + "\n";
  }
  return o;
}

inline std::string yesno(bool b) { return b ? "yes" : "no"; }

inline Output point_out(const CurvePoint& P) { return value("point", P.str()); }

inline TwistedElement parse_twisted(const QuadExt& L, const std::string& s) {
  const auto [a, b] = parse_pair(s);
  return gd_element(L, L.field().parse(a), L.field().parse(b));
}

struct Globals {
  std::string prec = "40", base = "q", list = "acvf", map = "v", at, anchor, target, order = "8", ram = "1";
  std::string threads = "1", seed = "20240601";
  bool json = false, open = false;
};

inline Field make_field(const Globals& g) {
  BaseField k = BaseField::rationals();
  if (g.base.rfind("fp:", 0) == 0) {
    const std::int64_t p = parse_int(g.base.substr(3), "--base fp:P");
    if (p < 2) fail(ErrorKind::BadParameter, "--base fp:P needs a prime P");
    k = BaseField::prime(static_cast<std::uint64_t>(p));
  } else if (g.base != "q") {
    fail(ErrorKind::SyntaxError, "--base must be q or fp:P, got " + g.base);
  }
  const std::int64_t e = parse_int(g.ram, "--ram");
  if (e < 1) fail(ErrorKind::BadParameter, "--ram must be positive");
  return Field(k, e, parse_gamma(g.prec));
}

inline std::string require_order(const Globals& g, std::int64_t& M) {
  M = parse_int(g.order, "--order");
  if (M < 1 || M > 64) fail(ErrorKind::BadParameter, "--order must lie in 1..64");
  return g.order;
}

using Handler = std::function<Output(const Globals&, const std::vector<std::string>&)>;

struct Command {
  std::string path;  // "vf eval"
  std::vector<std::string> args;
  std::string help;
  Handler run;
};

inline std::vector<Command> commands() {
  std::vector<Command> c;
  auto K = [](const Globals& g) { return make_field(g); };

  // ---- vf
  c.push_back({"vf eval", {"EXPR"}, "evaluate a Laurent expression", [=](const Globals& g, const auto& a) {
                 return value("value", K(g).parse(a[0]).str());
               }});
  c.push_back({"vf val", {"EXPR"}, "valuation", [=](const Globals& g, const auto& a) {
                 return value("valuation", K(g).parse(a[0]).valuation().str());
               }});
  c.push_back({"vf res", {"EXPR"}, "residue of an integral element", [=](const Globals& g, const auto& a) {
                 return value("residue", residue(K(g).parse(a[0])).get_str());
               }});
  c.push_back({"vf rv", {"EXPR"}, "leading term class (v, lead)", [=](const Globals& g, const auto& a) {
                 const RV r = rv(K(g).parse(a[0]));
                 Output o = keyed({{"gamma", r.gamma.str()}, {"lead", r.lead.get_str()}});
                 o.text = r.str() + "\n";
                 return o;
               }});
  c.push_back({"vf root", {"EXPR", "N"}, "decide membership in the n-th powers", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 const NthPowerResult r = nth_power(F, F.parse(a[0]), parse_int(a[1], "N"));
                 Output o{ojson{{"is_power", r.is_power}, {"root", r.root ? ojson(r.root->str()) : ojson(nullptr)}}, ""};
                 o.text = r.is_power ? "yes: " + (r.root ? r.root->str() : std::string("?")) + "\n" : "no\n";
                 return o;
               }});
  c.push_back({"vf hensel", {"COEFFS", "X0"}, "root of c0 + c1 x + ... near X0, COEFFS as [c0,c1,...]",
               [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 const auto body = bracketed(a[0], "", '[', ']');
                 if (!body) fail(ErrorKind::SyntaxError, "COEFFS must be [c0,c1,...]");
                 Poly f;
                 for (const auto& s : split_top(*body)) f.push_back(F.parse(s));
                 return value("root", hensel_root(f, F.parse(a[1]), F.prec()).str());
               }});
  c.push_back({"vf oO", {"X", "A"}, "membership of X in o(A) and O(A)", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 const OOMembership m = oO_membership(F.parse(a[0]), F.parse(a[1]));
                 Output o{ojson{{"in_o", m.in_o}, {"in_O", m.in_O}}, ""};
                 o.text = "o: " + yesno(m.in_o) + "\nO: " + yesno(m.in_O) + "\n";
                 return o;
               }});

  // ---- set
  c.push_back({"set normalize", {"EXPR"}, "Swiss cheese normal form of a formula", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 return value("set", normalize(realize_formula(*parse_formula(F, a[0]), F)).str());
               }});
  c.push_back({"set eval", {"EXPR"}, "evaluate a formula at --at LIT", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 if (g.at.empty()) fail(ErrorKind::SyntaxError, "set eval needs --at LIT");
                 const FormulaPtr f = parse_formula(F, a[0]);
                 const Laurent x = F.parse(g.at);
                 const bool direct = eval_formula(*f, x), realized = realize_formula(*f, F).contains(x);
                 Output o{ojson{{"direct", direct}, {"realized", realized}}, ""};
                 o.text = std::string(direct ? "true" : "false") + (direct == realized ? "" : " (realized set disagrees)") + "\n";
                 return o;
               }});
  c.push_back({"set aas", {"EXPR"}, "aas analysis for --map v|res", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 const DefSet s = realize_formula(*parse_formula(F, a[0]), F);
                 std::vector<std::string> ex;
                 bool sat = false;
                 std::string image;
                 if (g.map == "v") {
                   const auto r = aas_v(s, F.zero());
                   sat = r.saturated;
                   for (const auto& x : r.exceptional) ex.push_back(x.str());
                   image = v_image(s).str();
                 } else if (g.map == "res") {
                   const auto r = aas_res(s, F);
                   sat = r.saturated;
                   for (const auto& x : r.exceptional) ex.push_back(x.get_str());
                   image = res_image(s, F).str();
                 } else {
                   fail(ErrorKind::SyntaxError, "--map must be v or res");
                 }
                 std::string list;
                 for (const auto& x : ex) list += (list.empty() ? "" : ", ") + x;
                 Output o{ojson{{"map", g.map}, {"saturated", sat}, {"exceptional", ex}, {"image", image}}, ""};
                 o.text = "image: " + image + "\n" + (sat ? std::string("saturated") : "exceptional: " + list) + "\n";
                 return o;
               }});

  // ---- ec
  c.push_back({"ec invariants", {"CURVE"}, "b- and c-invariants, discriminant, j", [=](const Globals& g, const auto& a) {
                 const Curve C = parse_curve(K(g), a[0]);
                 return keyed({{"b2", C.b2().str()}, {"b4", C.b4().str()}, {"b6", C.b6().str()}, {"b8", C.b8().str()},
                               {"c4", C.c4().str()}, {"c6", C.c6().str()}, {"disc", C.disc().str()},
                               {"v_disc", C.disc().valuation().str()}, {"j", C.j().str()}});
               }});
  c.push_back({"ec minimal", {"CURVE"}, "minimal model", [=](const Globals& g, const auto& a) {
                 const MinimalModel M = minimal_model(parse_curve(K(g), a[0]));
                 return keyed({{"model", M.curve.str()}, {"transform", M.T.str()}, {"v_disc", M.v_disc.str()},
                               {"certificate", M.certificate}});
               }});
  c.push_back({"ec classify", {"CURVE"}, "reduction type", [=](const Globals& g, const auto& a) {
                 const MinimalModel M = minimal_model(parse_curve(K(g), a[0]));
                 const ReductionType r = reduction_type_of_model(M.curve);
                 Output o = keyed({{"reduction", r.str()}, {"v_disc", M.v_disc.str()}});
                 o.json["reduction"] = r.name();
                 return o;
               }});
  c.push_back({"ec add", {"CURVE", "P", "Q"}, "group law", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 const Curve C = parse_curve(F, a[0]);
                 return point_out(C.add(parse_point(F, a[1]), parse_point(F, a[2])));
               }});
  c.push_back({"ec reduce", {"CURVE", "P"}, "reduction to the residue curve", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 const Curve C = parse_curve(F, a[0]);
                 const CurvePoint P = parse_point(F, a[1]);
                 C.require_on_curve(P);
                 return value("residue_point", reduce_point(C, P).str());
               }});
  c.push_back({"ec lift", {"CURVE", "RESPT"}, "Hensel lift with --anchor LIT", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 if (g.anchor.empty()) fail(ErrorKind::SyntaxError, "ec lift needs --anchor LIT");
                 const Curve C = parse_curve(F, a[0]);
                 return point_out(lift_point(C, parse_residue_point(F.base(), a[1]), F.parse(g.anchor)));
               }});
  c.push_back({"ec divide", {"CURVE", "P", "N"}, "n-division with --target RESPT", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 if (g.target.empty()) fail(ErrorKind::SyntaxError, "ec divide needs --target RESPT");
                 const Curve C = parse_curve(F, a[0]);
                 const CurvePoint Q = parse_point(F, a[1]);
                 C.require_on_curve(Q);
                 return point_out(divide_point(C, Q, parse_int(a[2], "N"), parse_residue_point(F.base(), g.target)));
               }});
  c.push_back({"ec w", {"CURVE", "P"}, "component invariant w", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 const Curve C = parse_curve(F, a[0]);
                 const CurvePoint P = parse_point(F, a[1]);
                 C.require_on_curve(P);
                 const Gamma w = component_w(C, P), l = C.disc().valuation();
                 return keyed({{"w", w.str()}, {"class", fold_mod(w, l).str()}, {"ell", l.str()}});
               }});

  // ---- tate
  c.push_back({"tate coeffs", {}, "a4(q), a6(q) to --order M", [=](const Globals& g, const auto&) {
                 std::int64_t M = 0;
                 require_order(g, M);
                 const auto [a4, a6] = coeff_series(M);
                 return keyed({{"a4", a4.str()}, {"a6", a6.str()}});
               }});
  c.push_back({"tate curve", {"Q"}, "the Tate curve E_q", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 const TateCurve T = tate_curve(F, F.parse(a[0]));
                 return keyed({{"curve", T.curve.str()}, {"ell", T.ell.str()}, {"disc", T.curve.disc().str()}});
               }});
  c.push_back({"tate map", {"Q", "U"}, "image of U in E_q(K)", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 return point_out(tate_map(tate_curve(F, F.parse(a[0])), F.parse(a[1])));
               }});
  c.push_back({"tate verify", {}, "formal identity and discriminant product to --order M", [=](const Globals& g, const auto&) {
                 std::int64_t M = 0;
                 require_order(g, M);
                 const FormalReport f = verify_formal(M);
                 const DeltaCheck d = delta_product_check(M);
                 Output o{ojson{{"order", g.order},
                                {"formal", f.pass ? "pass" : "fail"},
                                {"first_nonzero", f.pass ? ojson(nullptr) : ojson(std::to_string(f.first_nonzero))},
                                {"residual", f.pass ? ojson(nullptr) : ojson(f.residual)},
                                {"delta_product", d.pass ? "pass" : "fail"},
                                {"delta", d.from_coeffs.str()}},
                          ""};
                 o.text = "formal: " + std::string(f.pass ? "pass" : "fail at q^" + std::to_string(f.first_nonzero) + ": " + f.residual) +
                          "\ndelta_product: " + (d.pass ? "pass" : "fail") + "\ndelta: " + d.from_coeffs.str() + "\n";
                 return o;
               }});
  c.push_back({"tate region", {"Q", "P"}, "region of a point of E_q", [=](const Globals& g, const auto& a) {
                 const Field F = K(g);
                 const TateCurve T = tate_curve(F, F.parse(a[0]));
                 const CurvePoint P = parse_point(F, a[1]);
                 T.curve.require_on_curve(P);
                 return value("region", region_classify(T, P).str());
               }});

  // ---- gd
  auto ext = [=](const Globals& g, const std::string& d) {
    const Field F = K(g);
    return QuadExt(F, F.parse(d));
  };
  c.push_back({"gd mul", {"D", "P", "Q"}, "product in G(d)", [=](const Globals& g, const auto& a) {
                 const QuadExt L = ext(g, a[0]);
                 return value("element", gd_mul(L, parse_twisted(L, a[1]), parse_twisted(L, a[2])).str());
               }});
  c.push_back({"gd val", {"D", "A", "B"}, "valuation of A + B sqrt D", [=](const Globals& g, const auto& a) {
                 const QuadExt L = ext(g, a[0]);
                 const Field& F = L.field();
                 return value("valuation", gd_valuation(L, F.parse(a[1]), F.parse(a[2])).str());
               }});
  c.push_back({"gd boundary", {"D", "P"}, "residue map or kernel coordinate", [=](const Globals& g, const auto& a) {
                 const QuadExt L = ext(g, a[0]);
                 const BoundaryDatum b = gd_boundary_map(L, parse_twisted(L, a[1]));
                 if (!b.ramified) return keyed({{"residue", "(" + b.abar.get_str() + ", " + b.bbar.get_str() + ")"}});
                 return keyed({{"f", b.f.str()}, {"level", b.level.str()}});
               }});
  c.push_back({"gd solve", {"D", "B"}, "kernel element with coordinate B", [=](const Globals& g, const auto& a) {
                 const QuadExt L = ext(g, a[0]);
                 return value("element", gd_solve_from_b(L, L.field().parse(a[1])).str());
               }});
  c.push_back({"gd level", {"D", "P", "R"}, "filtration level and quotient class at R", [=](const Globals& g, const auto& a) {
                 const QuadExt L = ext(g, a[0]);
                 const LevelData l = gd_level(L, parse_twisted(L, a[1]), parse_gamma(a[2]));
                 return keyed({{"level", l.level.str()}, {"in_r", yesno(l.in_r)}, {"in_r_open", yesno(l.in_r_open)},
                               {"quotient", l.quotient.get_str()}});
               }});
  return c;
}

inline GroupDatum parse_datum(const Field& K, const Globals& g, const std::vector<std::string>& a) {
  if (a.empty()) fail(ErrorKind::SyntaxError, "classify needs a datum: additive | mult | unitball R | power N | ec CURVE | tate Q | twisted D");
  GroupDatum d;
  using GK = GroupDatum::Kind;
  const std::string& kind = a[0];
  auto need = [&](std::size_t n) {
    if (a.size() != n + 1) fail(ErrorKind::SyntaxError, "classify " + kind + " takes " + std::to_string(n) + " argument(s)");
  };
  d.input = kind;
  for (std::size_t i = 1; i < a.size(); ++i) d.input += " " + a[i];
  if (kind == "additive") {
    need(0);
    d.kind = GK::Additive;
  } else if (kind == "mult") {
    need(0);
    d.kind = GK::Multiplicative;
  } else if (kind == "unitball") {
    need(1);
    d.kind = GK::UnitBall;
    d.r = parse_gamma(a[1]);
    d.open = g.open;
    if (g.open) d.input += " open";
  } else if (kind == "power") {
    need(1);
    d.kind = GK::PowerSubgroup;
    d.n = parse_int(a[1], "N");
  } else if (kind == "ec") {
    need(1);
    d.kind = GK::Elliptic;
    d.curve = parse_curve(K, a[1]);
  } else if (kind == "tate") {
    need(1);
    d.kind = GK::TateInput;
    d.q = K.parse(a[1]);
  } else if (kind == "twisted") {
    need(1);
    d.kind = GK::Twisted;
    d.d = K.parse(a[1]);
  } else {
    fail(ErrorKind::SyntaxError, "unknown datum kind " + kind);
  }
  return d;
}

inline Output run_classify(const Globals& g, const std::vector<std::string>& a) {
  const Field K = make_field(g);
  ClassifyOptions opt;
  if (g.list == "pl0") opt.mode = ListMode::Pl0;
  else if (g.list != "acvf") fail(ErrorKind::SyntaxError, "--list must be acvf or pl0");
  opt.threads = static_cast<int>(parse_int(g.threads, "--threads"));
  if (opt.threads < 1) fail(ErrorKind::BadParameter, "--threads must be positive");
  opt.seed = static_cast<std::uint64_t>(parse_int(g.seed, "--seed"));
  const ClassificationReport r = classify_report(K, parse_datum(K, g, a), opt);
  return Output{r.to_json(), r.to_text()};
}

const std::set<std::string> kValueOptions = {"--prec", "--base", "--ram", "--list", "--map", "--at", "--anchor",
                                              "--target", "--order", "--threads", "--seed"};
const std::set<std::string> kFlags = {"--json", "--open", "--help", "-h"};
const std::set<std::string> kGroups = {"vf", "set", "ec", "tate", "gd"};

/// Moves options ahead of positionals and fuses option values, so literals
/// such as "-1" or "-t + t^2" reach the subcommand as positionals.
inline std::vector<std::string> canonical_args(const std::vector<std::string>& in) {
  std::vector<std::string> opts, pos;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const std::string& a = in[i];
    const std::string name = a.substr(0, a.find('='));
    if (kValueOptions.count(name)) {
      if (a.find('=') != std::string::npos) opts.push_back(a);
      else if (i + 1 < in.size()) opts.push_back(a + "=" + in[++i]);
      else opts.push_back(a);  // CLI11 reports the missing value
    } else if (kFlags.count(a) || (a.rfind("--", 0) == 0 && a.size() > 2)) {
      opts.push_back(a);
    } else {
      pos.push_back(a);
    }
  }
  std::size_t path = 0;
  if (!pos.empty()) path = kGroups.count(pos[0]) ? std::min<std::size_t>(2, pos.size()) : 1;
  std::vector<std::string> out(opts);
  out.insert(out.end(), pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(path));
  if (path < pos.size()) {
    out.push_back("--");
    out.insert(out.end(), pos.begin() + static_cast<std::ptrdiff_t>(path), pos.end());
  }
  return out;
}

}  // namespace cli

/// Exit codes: 0 success, 2 usage, 3 domain error, 4 precision loss.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"Exact arithmetic for one-dimensional groups over k((t))", "vfgtool"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  Globals g;
  app.add_option("--prec", g.prec, "absolute precision N (default 40)");
  app.add_option("--base", g.base, "residue field: q or fp:P (default q)");
  app.add_option("--ram", g.ram, "ramification e: exponents in (1/e)Z (default 1)");
  app.add_flag("--json", g.json, "JSON output");
  app.add_option("--list", g.list, "classification list: acvf or pl0");
  app.add_option("--threads", g.threads, "worker threads for sampled checks");
  app.add_option("--seed", g.seed, "seed for sampled checks");
  app.add_option("--map", g.map, "set aas: v or res");
  app.add_option("--at", g.at, "set eval: point");
  app.add_option("--anchor", g.anchor, "ec lift: anchor coordinate");
  app.add_option("--target", g.target, "ec divide: residue target");
  app.add_option("--order", g.order, "tate coeffs/verify: series order M");
  app.add_flag("--open", g.open, "classify unitball: open ball");

  std::vector<std::string> pos;   // classify datum
  std::array<std::string, 3> slots;  // positionals of the other commands
  std::size_t nslots = 0;
  const Handler* chosen = nullptr;
  const std::vector<Command> cmds = commands();
  std::map<std::string, CLI::App*> groups;
  for (const auto& name : kGroups) groups[name] = app.add_subcommand(name)->require_subcommand(1);
  groups["vf"]->description("valued field arithmetic");
  groups["set"]->description("definable subsets of K");
  groups["ec"]->description("elliptic curves");
  groups["tate"]->description("Tate uniformization");
  groups["gd"]->description("twisted groups G(d)");
  for (const auto& c : cmds) {
    const auto sp = c.path.find(' ');
    CLI::App* sub = groups[c.path.substr(0, sp)]->add_subcommand(c.path.substr(sp + 1), c.help);
    for (std::size_t i = 0; i < c.args.size(); ++i) sub->add_option(c.args[i], slots[i])->required();
    sub->callback([&chosen, &nslots, &c] {
      chosen = &c.run;
      nslots = c.args.size();
    });
  }
  const Handler classify_run = run_classify;
  CLI::App* cl = app.add_subcommand("classify", "place a group datum in a classification list");
  cl->add_option("DATUM", pos, "additive | mult | unitball R [--open] | power N | ec CURVE | tate Q | twisted D")->required();
  cl->callback([&] { chosen = &classify_run; });

  std::vector<std::string> argv = canonical_args(args);
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  if (!chosen) {
    err << "usage error: no command\n";
    return 2;
  }
  try {
    if (chosen != &classify_run) pos.assign(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(nslots));
    const Output o = (*chosen)(g, pos);
    if (g.json) out << o.json.dump(2) << "\n";
    else out << o.text;
    return 0;
  } catch (const Error& e) {
    err << e.what() << "\n";
    if (e.kind() == ErrorKind::PrecisionLoss) {
      std::int64_t n = 40;
      try {
        n = std::max<std::int64_t>(1, parse_gamma(g.prec).ceil());
      } catch (const Error&) {
      }
      err << "retry with a higher precision, e.g. --prec " << 2 * n << "\n";
      return 4;
    }
    return e.kind() == ErrorKind::SyntaxError ? 2 : 3;
  }
}

}  // namespace vfg
