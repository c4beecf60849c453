#include <gtest/gtest.h>

#include <random>

#include "vfg/elliptic.hpp"

using namespace vfg;

namespace {

const Field Q40(BaseField::rationals(), 1, Gamma(40));

Laurent P(const std::string& s, const Field& K = Q40) { return K.parse(s); }

Curve short_curve(const std::string& A, const std::string& B, const Field& K = Q40) {
  return Curve::short_form(K, P(A, K), P(B, K));
}

CurvePoint pt(const std::string& x, const std::string& y, const Field& K = Q40) {
  return CurvePoint::affine(P(x, K), P(y, K));
}

// exact polynomial sum_{k=lo}^{hi} c_k t^k with c_lo != 0
Laurent random_poly(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> cd(-4, 4);
  std::vector<Laurent::Term> ts;
  for (int k = lo; k <= hi; ++k) {
    int c = cd(rng);
    if (k == lo && c == 0) c = 1;
    if (c) ts.emplace_back(k, Coeff(c));
  }
  return Laurent::from_terms(ts, BaseField::rationals(), 1, std::nullopt);
}

Gamma vbound(const Laurent& x) { return x.valuation_bound(); }
Laurent param(const Curve& C, const CurvePoint& P) {
  return P.inf ? C.field().zero() : -(P.x * C.field().inv(P.y));
}

struct Sampler {
  explicit Sampler(std::uint64_t seed) : rng(seed) {}
  std::mt19937_64 rng;
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  // point of E0^- with -x/y of valuation in [1, 3]
  CurvePoint kernel_point(const Curve& C) {
    const int v = pick(1, 3);
    return lift_point(C, ResiduePoint::infinity(), random_poly(rng, v, v + 3));
  }
  // point of E0 over (0, 1) on y^2 = x^3 + x + 1
  CurvePoint near_01(const Curve& C) {
    return lift_point(C, ResiduePoint::affine(0, 1), random_poly(rng, 1, 4));
  }
};

}  // namespace

TEST(Elliptic, InvariantsOfShortCurve) {
  const Curve C = short_curve("1", "1");
  EXPECT_EQ(C.disc().str(), "-496");
  EXPECT_EQ(C.c4().str(), "-48");
  // -16(4A^3 + 27B^2) and c4^3 / Delta
  EXPECT_EQ(C.disc(), P("-16*(4 + 27)"));
  EXPECT_EQ(C.j().str(), "6912/31");
}

TEST(Elliptic, SingularCubicIsRejected) {
  try {
    Curve(Q40, Q40.one(), Q40.zero(), Q40.zero(), Q40.zero(), Q40.zero());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotElliptic);
  }
  try {
    short_curve("O(t^3)", "1 + O(t^3)");  // -16(4A^3 + 27B^2) is a unit regardless
    short_curve("-3 + O(t^2)", "2 + O(t^2)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PrecisionLoss);
  }
}

TEST(Elliptic, TateShapeDiscriminantPolynomial) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    const Laurent a4 = random_poly(rng, 0, 3), a6 = random_poly(rng, 1, 3);
    const Laurent a42 = a4 * a4;
    const Laurent expect = -a6 + a42 + P("72") * a4 * a6 - P("64") * a42 * a4 - P("432") * a6 * a6;
    const Curve C(Q40, Q40.one(), Q40.zero(), Q40.zero(), a4, a6);
    EXPECT_EQ(C.disc(), expect);
  }
}

TEST(Elliptic, DoublingOnShortCurve) {
  const Curve C = short_curve("1", "1");
  const CurvePoint G = pt("0", "1");
  const CurvePoint D = C.add(G, G);
  EXPECT_EQ(D.str(), "(1/4, -9/8)");
  EXPECT_TRUE(same_point(C.mul(G, 2), D));
  EXPECT_TRUE(C.add(G, C.neg(G)).inf);
  EXPECT_TRUE(same_point(C.add(G, CurvePoint::infinity()), G));
  EXPECT_TRUE(C.mul(G, 0).inf);
}

TEST(Elliptic, GroupAxiomsOnExactPoints) {
  const Curve C = short_curve("1", "1");
  const CurvePoint G = pt("0", "1");
  std::vector<CurvePoint> pts;
  for (int k = -3; k <= 3; ++k) pts.push_back(C.mul(G, k));
  for (const auto& p : pts) EXPECT_TRUE(C.on_curve(p));
  for (const auto& a : pts)
    for (const auto& b : pts) {
      EXPECT_TRUE(same_point(C.add(a, b), C.add(b, a)));
      for (const auto& c : pts) EXPECT_TRUE(same_point(C.add(C.add(a, b), c), C.add(a, C.add(b, c))));
    }
  // multiples agree with repeated addition
  CurvePoint acc;
  for (int k = 1; k <= 5; ++k) {
    acc = C.add(acc, G);
    EXPECT_TRUE(same_point(acc, C.mul(G, k)));
  }
}

TEST(Elliptic, GroupAxiomsOnSampledPoints) {
  const Curve C = short_curve("1", "1");
  Sampler s(5);
  for (int i = 0; i < 10; ++i) {
    const CurvePoint a = s.near_01(C), b = s.kernel_point(C), c = s.near_01(C);
    ASSERT_TRUE(C.on_curve(a) && C.on_curve(b) && C.on_curve(c));
    EXPECT_TRUE(same_point(C.add(a, b), C.add(b, a)));
    EXPECT_TRUE(same_point(C.add(C.add(a, b), c), C.add(a, C.add(b, c))));
    EXPECT_TRUE(C.on_curve(C.add(a, c)));
    EXPECT_TRUE(C.add(b, C.neg(b)).inf);
  }
}

TEST(Elliptic, ResidueGroupOverPrimeFieldIsAbelian) {
  // y^2 = x^3 + x + 1 over F_7, every point enumerated
  const BaseField k = BaseField::prime(7);
  const ResidueCurve R(k, {0, 0, 0, 1, 1});
  std::vector<ResiduePoint> pts{ResiduePoint::infinity()};
  for (int x = 0; x < 7; ++x)
    for (int y = 0; y < 7; ++y)
      if (R.residual(x, y) == 0) pts.push_back(ResiduePoint::affine(x, y));
  const auto n = static_cast<std::int64_t>(pts.size());
  EXPECT_EQ(n, 5);
  for (const auto& a : pts) {
    EXPECT_TRUE(R.mul(a, n).inf);
    for (const auto& b : pts) {
      const ResiduePoint s = R.add(a, b);
      EXPECT_TRUE(R.on_curve(s));
      EXPECT_EQ(s, R.add(b, a));
      for (const auto& c : pts) EXPECT_EQ(R.add(s, c), R.add(a, R.add(b, c)));
    }
  }
}

TEST(Elliptic, TransformTable) {
  const Curve C = short_curve("1 + t", "t^2");
  const Curve I = C.transform(Transform::identity(Q40));
  EXPECT_EQ(I.str(), C.str());
  const Curve S = C.transform(Transform{P("t"), Q40.zero(), Q40.zero(), Q40.zero()});
  EXPECT_EQ(S.a4().str(), "t^-4 + t^-3");
  EXPECT_EQ(S.a6().str(), "t^-4");
  // completing the square on y^2 + xy = x^3 + a4 x + a6
  const Curve T(Q40, Q40.one(), Q40.zero(), Q40.zero(), P("t"), P("t^2"));
  const Curve U = T.transform(Transform{Q40.one(), Q40.zero(), P("-1/2"), Q40.zero()});
  EXPECT_EQ(U.str(), "[0, 1/4, 0, t, t^2]");
}

TEST(Elliptic, TransformPreservesDiscriminantAndGroupLaw) {
  std::mt19937_64 rng(3);
  const Curve C = short_curve("1", "1");
  const CurvePoint a = pt("0", "1"), b = C.mul(a, 2);
  for (int i = 0; i < 12; ++i) {
    const int m = static_cast<int>(rng() % 3);
    const Transform T{Q40.t(Gamma(m)).scale(Coeff(1 + static_cast<long>(rng() % 3))), random_poly(rng, 0, 2),
                      random_poly(rng, 0, 1), random_poly(rng, 0, 2)};
    const Curve D = C.transform(T);
    const Laurent u2 = T.u * T.u, u4 = u2 * u2, u12 = u4 * u4 * u4;
    EXPECT_EQ(u12 * D.disc(), C.disc());
    const CurvePoint ta = transform_point(Q40, T, a), tb = transform_point(Q40, T, b);
    EXPECT_TRUE(D.on_curve(ta));
    EXPECT_TRUE(same_point(transform_point(Q40, T, C.add(a, b)), D.add(ta, tb)));
    EXPECT_TRUE(same_point(untransform_point(T, ta), a));
    // composite transform equals applying in sequence
    const Transform T2{Q40.one(), random_poly(rng, 0, 1), Q40.zero(), random_poly(rng, 0, 1)};
    EXPECT_EQ(D.transform(T2).str(), C.transform(T.then(T2)).str());
  }
}

TEST(Elliptic, MinimalModelExamples) {
  const auto m1 = minimal_model(short_curve("t^4", "t^6"));
  EXPECT_EQ(m1.curve.str(), "short[1, 1]");
  EXPECT_EQ(m1.T.u.str(), "t");
  const auto m2 = minimal_model(short_curve("t^3", "t^7"));
  EXPECT_EQ(m2.curve.str(), "short[t^3, t^7]");
  EXPECT_EQ(m2.T.u.str(), "1");
  EXPECT_FALSE(m2.certificate.empty());
  const Field K6(BaseField::rationals(), 6, Gamma(40));
  const auto m3 = minimal_model(short_curve("0", "t", K6));
  EXPECT_EQ(m3.T.u.str(), "t^(1/6)");
  EXPECT_EQ(m3.curve.str(), "short[0, 1]");
  EXPECT_EQ(reduction_type_of_model(m3.curve).kind, ReductionType::Kind::Good);
}

TEST(Elliptic, MinimalModelBeatsEveryRescaling) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    const int a = static_cast<int>(rng() % 14), b = static_cast<int>(rng() % 20);
    const Curve C = Curve::short_form(Q40, random_poly(rng, a, a + 2), random_poly(rng, b, b + 2));
    const auto M = minimal_model(C);
    const Laurent u2 = M.T.u * M.T.u, u4 = u2 * u2;
    EXPECT_EQ(u4 * u4 * u4 * M.curve.disc(), C.disc());
    EXPECT_TRUE(M.curve.a4().valuation() < Gamma(4) || M.curve.a6().valuation() < Gamma(6));
    // brute force: the integral rescalings u = t^m of the input
    Gamma best = Gamma::infinity();
    for (int m = 0; m <= 10; ++m) {
      const Curve S = C.transform(Transform{Q40.t(Gamma(m)), Q40.zero(), Q40.zero(), Q40.zero()});
      if (S.is_integral_model()) best = min(best, S.disc().valuation());
    }
    EXPECT_EQ(M.v_disc, best);
  }
}

TEST(Elliptic, ReductionFixtures) {
  EXPECT_EQ(reduction_type(short_curve("1", "1")).str(), "Good");
  EXPECT_EQ(reduction_type(short_curve("0", "t^2")).str(), "Additive");
  const Curve N(Q40, Q40.zero(), P("-1"), Q40.zero(), Q40.zero(), P("t"));
  EXPECT_EQ(reduction_type(N).str(), "NonsplitMult(-1)");
  const Curve S(Q40, Q40.zero(), P("1"), Q40.zero(), Q40.zero(), P("t"));
  EXPECT_EQ(reduction_type(S).str(), "SplitMult");
  const Field K6(BaseField::rationals(), 6, Gamma(40));
  EXPECT_EQ(reduction_type(short_curve("0", "t", K6)).str(), "Good");
  EXPECT_EQ(reduction_type(short_curve("0", "t")).str(), "Additive");
  try {
    reduction_type(short_curve("1", "1", Field(BaseField::prime(3), 1, Gamma(20))));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CharNotSupported);
  }
}

TEST(Elliptic, ReducePoint) {
  const Curve C = short_curve("1", "1");
  EXPECT_TRUE(reduce_point(C, CurvePoint::infinity()).inf);
  EXPECT_EQ(reduce_point(C, pt("0", "1")).str(), "(0, 1)");
  EXPECT_TRUE(reduce_point(C, lift_point(C, ResiduePoint::infinity(), P("t"))).inf);
  EXPECT_EQ(reduce_point(C, pt("1/4", "-9/8")).str(), "(1/4, -9/8)");
}

TEST(Elliptic, ReductionIsHomomorphismOnE0) {
  const Curve C = short_curve("1", "1");
  const ResidueCurve R = C.residue_curve();
  Sampler s(8);
  for (int i = 0; i < 15; ++i) {
    const CurvePoint a = s.near_01(C), b = i % 2 ? s.kernel_point(C) : C.mul(s.near_01(C), 2);
    EXPECT_EQ(reduce_point(C, C.add(a, b)), R.add(reduce_point(C, a), reduce_point(C, b)));
  }
}

TEST(Elliptic, LiftPoint) {
  const Curve C = short_curve("1", "1");
  const CurvePoint a = lift_point(C, ResiduePoint::affine(0, 1), Q40.zero());
  EXPECT_EQ(a.str(), "(0, 1)");
  const CurvePoint b = lift_point(C, ResiduePoint::infinity(), P("t"));
  EXPECT_TRUE(C.on_curve(b));
  EXPECT_TRUE(equal_to_precision(param(C, b), P("t")));
  EXPECT_EQ(b.x.valuation(), Gamma(-2));
  const Curve N(Q40, Q40.zero(), P("-1"), Q40.zero(), Q40.zero(), P("t"));
  try {
    lift_point(N, ResiduePoint::affine(0, 0), P("t"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSmooth);
  }
  try {
    lift_point(C, ResiduePoint::affine(0, 1), P("1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadParameter);
  }
}

TEST(Elliptic, LiftAtTwoTorsionUsesYAnchor) {
  // y^2 = x^3 - x has residue 2-torsion points where F_y = 0
  const Curve C = short_curve("-1", "0");
  const CurvePoint p = lift_point(C, ResiduePoint::affine(1, 0), P("t"));
  EXPECT_TRUE(C.on_curve(p));
  EXPECT_EQ(p.y.str(), "t");
  EXPECT_EQ(residue(p.x), Coeff(1));
}

TEST(Elliptic, FiltrationLevels) {
  const Curve C = short_curve("1", "1");
  const auto fi = filtration(C, CurvePoint::infinity());
  EXPECT_TRUE(fi.level.is_infinite());
  EXPECT_TRUE(fi.param->is_exact_zero());
  EXPECT_EQ(filtration(C, pt("0", "1")).level, Gamma(0));
  const CurvePoint b = lift_point(C, ResiduePoint::infinity(), P("t^2 + t^3"));
  EXPECT_EQ(b.x.valuation(), Gamma(-4));
  EXPECT_EQ(b.y.valuation(), Gamma(-6));
  EXPECT_EQ(filtration(C, b).level, Gamma(2));
  EXPECT_TRUE(in_E_r(C, b, Gamma(2)));
  EXPECT_FALSE(in_E_r(C, b, Gamma(2), true));
  EXPECT_EQ(quotient_class(C, b, Gamma(2)), Coeff(1));
  EXPECT_EQ(quotient_class(C, b, Gamma(1)), Coeff(0));
}

TEST(Elliptic, FormalGroupEstimates) {
  const Curve C = short_curve("1", "1");
  Sampler s(21);
  for (int i = 0; i < 30; ++i) {
    const CurvePoint a = s.kernel_point(C), b = s.kernel_point(C);
    const Laurent fa = param(C, a), fb = param(C, b);
    const CurvePoint ab = C.add(a, b);
    const Laurent fab = param(C, ab);
    EXPECT_GE(vbound(fab - fa - fb), fa.valuation() + fb.valuation());
    EXPECT_GE(vbound(param(C, C.neg(a)) + fa), 2 * fa.valuation());
    // level is an ultrametric group valuation
    const auto la = filtration(C, a).level, lb = filtration(C, b).level;
    EXPECT_GE(filtration(C, ab).level, min(la, lb));
    EXPECT_EQ(filtration(C, C.neg(a)).level, la);
    // quotient map at the common level is additive
    const Gamma r = min(la, lb);
    EXPECT_EQ(quotient_class(C, ab, r), quotient_class(C, a, r) + quotient_class(C, b, r));
  }
}

TEST(Elliptic, DivideExample) {
  const Curve C = short_curve("1", "1");
  const CurvePoint D = divide_point(C, pt("1/4", "-9/8"), 2, ResiduePoint::affine(0, 1));
  EXPECT_TRUE(same_point(D, pt("0", "1")));
  EXPECT_TRUE(divide_point(C, CurvePoint::infinity(), 3, ResiduePoint::infinity()).inf);
  try {
    divide_point(C, pt("0", "1"), 2, ResiduePoint::affine(0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotDivisible);
  }
}

TEST(Elliptic, DivideRoundTrip) {
  const Curve C = short_curve("1", "1");
  const ResidueCurve R = C.residue_curve();
  Sampler s(33);
  for (int i = 0; i < 8; ++i) {
    const std::int64_t n = 2 + i % 2;
    const CurvePoint P0 = i % 3 ? s.near_01(C) : s.kernel_point(C);
    const CurvePoint Q = C.mul(P0, n);
    const CurvePoint D = divide_point(C, Q, n, reduce_point(C, P0));
    EXPECT_TRUE(same_point(C.mul(D, n), Q)) << i;
    EXPECT_EQ(reduce_point(C, D), reduce_point(C, P0));
    // residue divisibility decides: (0,1) generates the residue group here
    const ResiduePoint wrong = R.mul(reduce_point(C, P0), n + 1);
    if (!(R.mul(wrong, n) == reduce_point(C, Q))) {
      EXPECT_THROW(divide_point(C, Q, n, wrong), Error);
    }
  }
}

TEST(Elliptic, ComponentMapNeedsTateShape) {
  const Curve C = short_curve("1", "1");
  try {
    component_w(C, pt("0", "1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WrongShape);
  }
}
