// Points t(t^i) on the curve E_q with q = t^l, their region and component class.
#include <iostream>

#include "vfg/tate.hpp"

using namespace vfg;

int main(int argc, char** argv) {
  const int l = argc > 1 ? std::atoi(argv[1]) : 5;
  const Field K(BaseField::rationals(), 1, Gamma(20));
  const TateCurve T = tate_curve(K, K.t(Gamma(l)));
  std::cout << "E_q for q = t^" << l << ": " << T.curve.str() << "\n";
  for (int i = 0; i < l; ++i) {
    const CurvePoint P = tate_map(T, K.t(Gamma(i)) * K.parse("2 + t"));
    const Gamma w = component_w(T.curve, P);
    std::cout << "u = (2 + t)*t^" << i << "  region " << region_classify(T, P).str() << "  w = " << w.str()
              << "  class " << fold_mod(w, T.ell).str() << " mod " << l << "\n";
  }
}
