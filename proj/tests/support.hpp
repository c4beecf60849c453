#pragma once

#include <random>
#include <string>
#include <vector>

#include "vfg/formula.hpp"

namespace vfgtest {

using namespace vfg;

/// Random formulas over a small pool of roots, which makes root clustering
/// (shared leading terms at several depths) common.
struct FormulaGen {
  explicit FormulaGen(std::uint64_t seed) : rng(seed) {}

  std::mt19937_64 rng;
  std::vector<std::string> roots{"0", "1", "t", "1 + t", "t^2", "2", "-1", "t + t^2", "1 + t^3", "t^-1"};

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  std::string poly() {
    std::string s;
    const int nf = 1 + pick(3);
    if (pick(3) == 0) s = std::string(pick(2) ? "t" : "3") + "*";
    for (int i = 0; i < nf; ++i) {
      if (i) s += "*";
      s += "(x - (" + roots[static_cast<std::size_t>(pick(static_cast<int>(roots.size())))] + "))";
      if (pick(3) == 0) s += "^" + std::to_string(2 + pick(2));
    }
    return s;
  }
  std::string gamma() {
    const int n = pick(9) - 3;
    if (pick(4) == 0) return std::to_string(n) + "/2";
    return std::to_string(n);
  }
  std::string atom() {
    const char* cmps[] = {">=", ">", "=", "<", "<=", "!="};
    const int k = pick(5);
    if (k == 0) return "x = " + roots[static_cast<std::size_t>(pick(static_cast<int>(roots.size())))];
    std::string s = "v(" + poly() + ") " + cmps[pick(6)] + " ";
    if (k <= 2) return s + gamma();
    s += "v(" + poly() + ")";
    if (pick(2)) s += " + " + gamma();
    return s;
  }
  std::string formula(int depth = 0) {
    const int k = depth > 2 ? 0 : pick(4);
    switch (k) {
      case 1: return "!(" + formula(depth + 1) + ")";
      case 2: return "(" + formula(depth + 1) + ") & (" + formula(depth + 1) + ")";
      case 3: return "(" + formula(depth + 1) + ") | (" + formula(depth + 1) + ")";
      default: return atom();
    }
  }

  /// Points near the root pool at assorted depths, plus the roots themselves.
  Laurent point(const Field& K) {
    const Laurent a = K.parse(roots[static_cast<std::size_t>(pick(static_cast<int>(roots.size())))]);
    const int k = pick(8);
    if (k == 0) return a;
    const int depth = pick(7) - 2;
    const long c = pick(5) - 2;
    Laurent x = a + K.constant(Coeff(c == 0 ? 1 : c)) * K.t(Gamma(depth));
    if (pick(2)) x = x + K.t(Gamma(depth + 1 + pick(3)));
    return x;
  }
};

}  // namespace vfgtest
