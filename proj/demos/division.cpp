// Halving and thirding points of y^2 = x^3 + x + 1 near (0, 1).
#include <iostream>

#include "vfg/elliptic.hpp"

using namespace vfg;

int main() {
  const Field K(BaseField::rationals(), 1, Gamma(8));
  const Curve C = Curve::short_form(K, K.one(), K.one());
  const ResidueCurve R = C.residue_curve();
  const ResiduePoint g = ResiduePoint::affine(0, 1);
  const CurvePoint P = lift_point(C, g, K.parse("t + 2*t^3"));
  std::cout << "P     = " << P.str() << "\n";
  for (int n : {2, 3}) {
    const CurvePoint Q = C.mul(P, n);
    const CurvePoint D = divide_point(C, Q, n, g);
    std::cout << n << "P    = " << Q.str() << "\n"
              << "Q/" << n << "   = " << D.str() << (same_point(D, P) ? "  (recovers P)" : "") << "\n";
    try {
      divide_point(C, Q, n, R.mul(g, 2));
    } catch (const Error& e) {
      std::cout << "target 2(0,1): " << e.what() << "\n";
    }
  }
}
