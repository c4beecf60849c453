// Where assorted group data land in the two classification lists.
#include <iostream>

#include "vfg/cli.hpp"

using namespace vfg;

int main() {
  const Field K(BaseField::rationals(), 1, Gamma(12));
  const std::vector<std::vector<std::string>> data = {
      {"additive"}, {"mult"}, {"unitball", "0"}, {"unitball", "2"}, {"power", "3"},
      {"ec", "short[1,1]"}, {"ec", "short[0,t^2]"}, {"ec", "[0,-1,0,0,t]"}, {"tate", "t^4"},
      {"twisted", "-1"}, {"twisted", "t"}};
  for (const auto& d : data) {
    std::string in;
    for (const auto& s : d) in += (in.empty() ? "" : " ") + s;
    std::cout << in;
    for (const ListMode m : {ListMode::Acvf, ListMode::Pl0}) {
      ClassifyOptions o;
      o.mode = m;
      cli::Globals g;
      const ClassificationReport r = classify_report(K, cli::parse_datum(K, g, d), o);
      std::cout << "  |  " << (m == ListMode::Acvf ? "acvf " : "pl0 ") << r.entry.item << " " << list_label(m, r.entry.item);
    }
    std::cout << "\n";
  }
}
