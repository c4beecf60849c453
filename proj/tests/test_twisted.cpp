#include <gtest/gtest.h>

#include <random>

#include "vfg/twisted.hpp"

using namespace vfg;

namespace {

const Field Q40(BaseField::rationals(), 1, Gamma(40));

Laurent P(const std::string& s) { return Q40.parse(s); }

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

Coeff half_binom(int k) {
  Coeff c = 1;
  for (int i = 0; i < k; ++i) c = c * (Coeff(1, 2) - i) / (i + 1);
  return c;
}

}  // namespace

TEST(Twisted, Normalization) {
  EXPECT_FALSE(QuadExt(Q40, P("-1")).ramified());
  const QuadExt L(Q40, P("t^3 + t^4"));
  EXPECT_TRUE(L.ramified());
  EXPECT_EQ(L.d().str(), "t + t^2");
  EXPECT_EQ(QuadExt(Q40, P("2*t^-2")).d().str(), "2");
  EXPECT_EQ(QuadExt(Q40, P("t^-1")).d().str(), "t");
  try {
    QuadExt(Q40, P("4*t^2"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadParameter);
  }
  try {
    QuadExt(Field(BaseField::prime(2), 1, Gamma(10)), Laurent::monomial(1, Gamma(1), BaseField::prime(2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CharNotSupported);
  }
}

TEST(Twisted, Arithmetic) {
  const QuadExt L(Q40, P("-1"));
  EXPECT_EQ(gd_identity(L).str(), "(1, 0)");
  const TwistedElement x = gd_element(L, P("3/5"), P("4/5"));
  EXPECT_EQ(gd_mul(L, x, x).str(), "(-7/25, 24/25)");
  EXPECT_EQ(gd_mul(L, x, gd_inv(L, x)).str(), "(1, 0)");
  try {
    gd_element(L, P("1"), P("1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NormViolation);
  }
}

TEST(Twisted, NormIsMultiplicative) {
  std::mt19937_64 rng(1);
  for (const char* d : {"-1 + t", "t + 3*t^2"}) {
    const QuadExt L(Q40, P(d));
    for (int i = 0; i < 25; ++i) {
      const TwistedElement x = gd_from_parameter(L, random_poly(rng, 0, 3));
      const TwistedElement y = gd_from_parameter(L, random_poly(rng, -1 + static_cast<int>(rng() % 3), 3));
      const TwistedElement z = gd_mul(L, x, y);
      EXPECT_TRUE(equal_to_precision(gd_norm(L, z.a, z.b), Q40.one()));
      EXPECT_EQ(gd_valuation(L, z.a, z.b), Gamma(0));
    }
  }
}

TEST(Twisted, ValuationExamples) {
  const QuadExt U(Q40, P("-1"));
  EXPECT_EQ(gd_valuation(U, P("1"), P("t")), Gamma(0));
  const QuadExt R(Q40, P("t"));
  EXPECT_EQ(gd_valuation(R, P("t"), P("1")), Gamma(1, 2));
  EXPECT_EQ(gd_valuation(R, P("t^2"), P("t")), Gamma(3, 2));
}

TEST(Twisted, ValuationAgreesWithHalfNorm) {
  std::mt19937_64 rng(2);
  for (const char* d : {"2 + t", "-1", "t - t^2", "3*t"}) {
    const QuadExt L(Q40, P(d));
    for (int i = 0; i < 100; ++i) {
      const int va = static_cast<int>(rng() % 6) - 2, vb = static_cast<int>(rng() % 6) - 2;
      const Laurent a = random_poly(rng, va, va + 3), b = random_poly(rng, vb, vb + 3);
      const auto h = gd_half_norm_valuation(L, a, b);
      ASSERT_TRUE(h.has_value());
      EXPECT_EQ(gd_valuation(L, a, b), *h) << d << " " << a.str() << " " << b.str();
    }
  }
}

TEST(Twisted, SolveFromB) {
  const QuadExt R(Q40, P("t"));
  EXPECT_EQ(gd_solve_from_b(R, Q40.zero()).str(), "(1, 0)");
  const TwistedElement x = gd_solve_from_b(R, P("1"));
  for (int k = 0; k < 6; ++k) EXPECT_EQ(x.a.coeff_at(Gamma(k)), half_binom(k));
  EXPECT_EQ(x.a.truncate(Gamma(3)).str(), "1 + 1/2*t - 1/8*t^2 + O(t^3)");
  const QuadExt U(Q40, P("-1"));
  const TwistedElement y = gd_solve_from_b(U, P("t"));
  EXPECT_EQ(y.a.truncate(Gamma(4)).str(), "1 - 1/2*t^2 + O(t^4)");
  EXPECT_THROW(gd_solve_from_b(U, P("1")), Error);
}

TEST(Twisted, BoundaryMap) {
  const QuadExt U(Q40, P("-1 + t"));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const TwistedElement x = gd_from_parameter(U, random_poly(rng, 0, 2));
    const TwistedElement y = gd_from_parameter(U, random_poly(rng, 0, 2));
    const BoundaryDatum bx = gd_boundary_map(U, x), by = gd_boundary_map(U, y), bxy = gd_boundary_map(U, gd_mul(U, x, y));
    EXPECT_EQ(bx.abar * bx.abar + bx.bbar * bx.bbar, 1);
    // residue map is a homomorphism onto G(-1)(Q)
    EXPECT_EQ(bxy.abar, bx.abar * by.abar - bx.bbar * by.bbar);
    EXPECT_EQ(bxy.bbar, bx.abar * by.bbar + by.abar * bx.bbar);
  }
  const QuadExt R(Q40, P("t"));
  try {
    gd_boundary_map(R, gd_element(R, P("-1"), Q40.zero()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInKernel);
  }
  const BoundaryDatum b = gd_boundary_map(R, gd_solve_from_b(R, P("1")));
  EXPECT_EQ(b.f.str(), "1");
  EXPECT_EQ(b.level, Gamma(1, 2));
}

TEST(Twisted, KernelRelations) {
  std::mt19937_64 rng(6);
  for (const char* d : {"-1 + t", "t + t^2"}) {
    const QuadExt L(Q40, P(d));
    for (int i = 0; i < 50; ++i) {
      const int vb = static_cast<int>(rng() % 4) + (L.ramified() ? 0 : 1);
      const Laurent b = random_poly(rng, vb, vb + 3);
      const TwistedElement x = gd_solve_from_b(L, b);
      const Gamma lv = gd_level(L, x, Gamma(1, 2)).level;
      EXPECT_EQ(lv, b.valuation() + L.shift());
      // independent oracle: half the valuation of N(x - 1)
      EXPECT_EQ(lv, *gd_half_norm_valuation(L, x.a - Q40.one(), x.b));
    }
  }
}

TEST(Twisted, FMapNearAdditivity) {
  std::mt19937_64 rng(7);
  for (const char* d : {"-1 + t", "t + t^2"}) {
    const QuadExt L(Q40, P(d));
    for (int i = 0; i < 30; ++i) {
      const int lo = L.ramified() ? 0 : 1;
      const TwistedElement x = gd_solve_from_b(L, random_poly(rng, lo + static_cast<int>(rng() % 3), 5));
      const TwistedElement y = gd_solve_from_b(L, random_poly(rng, lo + static_cast<int>(rng() % 3), 5));
      const TwistedElement z = gd_mul(L, x, y);
      const Laurent r = z.b - x.b - y.b;
      EXPECT_GT(r.valuation_bound(), x.b.valuation() + y.b.valuation());
      EXPECT_EQ(gd_inv(L, x).b, -x.b);
    }
  }
}

TEST(Twisted, LevelExamplesAndQuotients) {
  const QuadExt U(Q40, P("-1"));
  const LevelData l2 = gd_level(U, gd_solve_from_b(U, P("t^2")), Gamma(2));
  EXPECT_EQ(l2.level, Gamma(2));
  EXPECT_TRUE(l2.in_r);
  EXPECT_FALSE(l2.in_r_open);
  EXPECT_EQ(l2.quotient, 1);
  EXPECT_TRUE(gd_level(U, gd_identity(U), Gamma(7)).in_r_open);
  const QuadExt R(Q40, P("t"));
  const LevelData h = gd_level(R, gd_solve_from_b(R, P("1")), Gamma(1, 2));
  EXPECT_TRUE(h.in_r);
  EXPECT_FALSE(h.in_r_open);

  std::mt19937_64 rng(8);
  for (const char* d : {"-1 + t", "t + t^2"}) {
    const QuadExt L(Q40, P(d));
    for (const Gamma r : {Gamma(1) + L.shift(), Gamma(2) + L.shift()}) {
      const int vb = (r - L.shift()).floor();
      for (int i = 0; i < 10; ++i) {
        const TwistedElement x = gd_solve_from_b(L, random_poly(rng, vb, vb + 3));
        const TwistedElement y = gd_solve_from_b(L, random_poly(rng, vb + static_cast<int>(rng() % 2), vb + 3));
        const Coeff cx = gd_level(L, x, r).quotient, cy = gd_level(L, y, r).quotient;
        EXPECT_EQ(gd_level(L, gd_mul(L, x, y), r).quotient, cx + cy);
      }
    }
  }
}
