#include <gtest/gtest.h>

#include <random>

#include "vfg/tate.hpp"

using namespace vfg;

namespace {

const Field Q40(BaseField::rationals(), 1, Gamma(40));

Laurent P(const std::string& s, const Field& K = Q40) { return K.parse(s); }

Laurent random_poly(std::mt19937_64& rng, int lo, int hi, int lead_avoid = 0) {
  std::uniform_int_distribution<int> cd(-4, 4);
  std::vector<Laurent::Term> ts;
  for (int k = lo; k <= hi; ++k) {
    int c = cd(rng);
    if (k == lo)
      while (c == 0 || c == lead_avoid) c = cd(rng);
    if (c) ts.emplace_back(k, Coeff(c));
  }
  return Laurent::from_terms(ts, BaseField::rationals(), 1, std::nullopt);
}

Laurent param(const Curve& C, const CurvePoint& p) { return p.inf ? C.field().zero() : -(p.x * C.field().inv(p.y)); }

// w folded into [0, l/2]
Gamma fold_abs(const Gamma& g, const Gamma& l) {
  Gamma r = fold_mod(g, l);
  return r < Gamma(0) ? -r : r;
}

}  // namespace

TEST(Tate, CoefficientSeries) {
  const auto [a4, a6] = coeff_series(4);
  EXPECT_EQ(a4.str(), "-5*t - 45*t^2 - 140*t^3 + O(t^4)");
  EXPECT_EQ(a6.str(), "-t - 23*t^2 - 154*t^3 + O(t^4)");
  const auto [z4, z6] = coeff_series(1);
  EXPECT_TRUE(z4.as_laurent().is_zero_to_precision());
  EXPECT_TRUE(z6.as_laurent().is_zero_to_precision());
}

TEST(Tate, DiscriminantMatchesProduct) {
  const DeltaCheck d = delta_product_check(8);
  EXPECT_TRUE(d.pass) << d.from_coeffs.str() << " vs " << d.product.str();
  // q prod (1 - q^n)^24 = q - 24 q^2 + 252 q^3 - 1472 q^4 + ...
  EXPECT_EQ(delta_product(5).str(), "t - 24*t^2 + 252*t^3 - 1472*t^4 + O(t^5)");
  EXPECT_EQ(delta_product_check(3).from_coeffs.str(), "t - 24*t^2 + O(t^3)");
}

TEST(Tate, FormalIdentity) {
  const FormalReport r = verify_formal(8);
  EXPECT_TRUE(r.pass) << r.first_nonzero << ": " << r.residual;
  const FormalReport bad = verify_formal(6, 1);
  EXPECT_FALSE(bad.pass);
  EXPECT_EQ(bad.first_nonzero, 1);
}

TEST(Tate, LeadingLayerIsTheNodalCubic) {
  // u^4/(1-u)^6 + u^3/(1-u)^5 = u^3/(1-u)^6 exactly
  const FormalReport r = verify_formal(2);
  EXPECT_TRUE(r.pass);
}

TEST(Tate, CurveConstruction) {
  const TateCurve T = tate_curve(Q40, P("t^5"));
  EXPECT_EQ(T.ell, Gamma(5));
  EXPECT_EQ(T.curve.disc().valuation(), Gamma(5));
  EXPECT_EQ(T.curve.a4().truncate(Gamma(15)).str(), "-5*t^5 - 45*t^10 + O(t^15)");
  EXPECT_EQ(tate_curve(Q40, P("t")).curve.disc().valuation(), Gamma(1));
  try {
    tate_curve(Q40, P("1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadParameter);
  }
  EXPECT_EQ(reduction_type(T.curve).str(), "SplitMult");
  EXPECT_EQ(minimal_model(T.curve).v_disc, Gamma(5));
}

TEST(Tate, DomainReduction) {
  const TateCurve T = tate_curve(Q40, P("t^5"));
  EXPECT_EQ(domain_reduce(T, P("t^7")).str(), "t^2");
  EXPECT_EQ(domain_reduce(T, P("t^-1")).str(), "t^4");
  EXPECT_EQ(domain_reduce(T, P("3 + t")).str(), "3 + t");
}

TEST(Tate, KernelIsGeneratedByQ) {
  const TateCurve T = tate_curve(Q40, P("t^5"));
  EXPECT_TRUE(tate_map(T, P("1")).inf);
  for (int m = -2; m <= 2; ++m) EXPECT_TRUE(tate_map(T, Q40.pow(T.q, m)).inf) << m;
  const CurvePoint a = tate_map(T, P("2 + t")), b = tate_map(T, P("(2 + t)*t^10"));
  EXPECT_TRUE(same_point(a, b));
}

TEST(Tate, ImagesLieOnTheCurve) {
  const TateCurve T = tate_curve(Q40, P("t^5"));
  for (const char* u : {"2", "t", "t^2", "t^-2", "1 + t", "-1 + t^3", "t^3"})
    EXPECT_TRUE(T.curve.on_curve(tate_map(T, P(u)))) << u;
}

TEST(Tate, Homomorphism) {
  const TateCurve T = tate_curve(Q40, P("t^5"));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 12; ++i) {
    const int v1 = i % 3, v2 = (i / 3) % 3;
    const Laurent u1 = random_poly(rng, v1, v1 + 3, 1), u2 = random_poly(rng, v2, v2 + 3, 1);
    const CurvePoint lhs = tate_map(T, u1 * u2);
    const CurvePoint rhs = T.curve.add(tate_map(T, u1), tate_map(T, u2));
    EXPECT_TRUE(same_point(lhs, rhs)) << u1.str() << " * " << u2.str();
  }
}

TEST(Tate, Regions) {
  const TateCurve T = tate_curve(Q40, P("t^5"));
  const CurvePoint p2 = tate_map(T, P("3*t^2 + t^3"));
  EXPECT_EQ(p2.x.valuation(), Gamma(2));
  EXPECT_GT(p2.y.valuation(), Gamma(2));
  EXPECT_EQ(region_classify(T, p2).str(), "U(2)");
  EXPECT_EQ(region_classify(T, tate_map(T, P("t"))).str(), "U(1)");
  EXPECT_EQ(region_classify(T, tate_map(T, P("t^-1"))).str(), "V(1)");
  EXPECT_EQ(region_classify(T, tate_map(T, P("t^4"))).str(), "V(1)");
  EXPECT_EQ(region_classify(T, tate_map(T, P("2"))).str(), "E0");
  const TateCurve T4 = tate_curve(Q40, P("t^4"));
  EXPECT_EQ(region_classify(T4, tate_map(T4, P("t^2 - t^3"))).str(), "W");
}

TEST(Tate, UnitsMapIntoE0AndOneUnitsIntoTheKernelOfReduction) {
  const TateCurve T = tate_curve(Q40, P("t^5"));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const Laurent u = random_poly(rng, 0, 3, 1);
    EXPECT_TRUE(in_E0(T.curve, tate_map(T, u)));
    const Laurent h = random_poly(rng, 1 + i % 3, 4 + i % 3);
    const CurvePoint p = tate_map(T, Q40.one() + h);
    EXPECT_TRUE(reduce_point(T.curve, p).inf);
    EXPECT_EQ(param(T.curve, p).valuation(), h.valuation());
  }
}

TEST(Tate, ComponentClasses) {
  for (int l : {3, 5}) {
    const TateCurve T = tate_curve(Q40, Q40.t(Gamma(l)));
    std::vector<Gamma> classes;
    for (int i = 0; i < l; ++i) {
      const Gamma w = component_w(T.curve, tate_map(T, Q40.t(Gamma(i))));
      const Gamma c = fold_mod(w, Gamma(l));
      EXPECT_EQ(fold_abs(w, Gamma(l)), fold_abs(Gamma(i), Gamma(l)));
      for (const auto& o : classes) EXPECT_NE(o, c);
      classes.push_back(c);
    }
  }
}

TEST(Tate, ComponentMapIsAdditiveModL) {
  const TateCurve T = tate_curve(Q40, P("t^5"));
  std::mt19937_64 rng(9);
  const Gamma l(5);
  for (int i = 0; i < 10; ++i) {
    const int v1 = static_cast<int>(rng() % 5), v2 = static_cast<int>(rng() % 5);
    const CurvePoint a = tate_map(T, random_poly(rng, v1, v1 + 2)), b = tate_map(T, random_poly(rng, v2, v2 + 2));
    const Gamma lhs = component_w(T.curve, T.curve.add(a, b));
    const Gamma rhs = component_w(T.curve, a) + component_w(T.curve, b);
    EXPECT_EQ(fold_mod(lhs, l), fold_mod(rhs, l));
  }
}

TEST(Tate, FormalGroupEstimatesOnTateCurve) {
  const TateCurve T = tate_curve(Q40, P("t^5"));
  std::mt19937_64 rng(10);
  for (int i = 0; i < 10; ++i) {
    const CurvePoint a = tate_map(T, Q40.one() + random_poly(rng, 1 + i % 2, 4));
    const CurvePoint b = tate_map(T, Q40.one() + random_poly(rng, 1, 3));
    const Laurent fa = param(T.curve, a), fb = param(T.curve, b);
    const Laurent fab = param(T.curve, T.curve.add(a, b));
    EXPECT_GE((fab - fa - fb).valuation_bound(), fa.valuation() + fb.valuation());
    EXPECT_GE((param(T.curve, T.curve.neg(a)) + fa).valuation_bound(), 2 * fa.valuation());
  }
}
