#include <gtest/gtest.h>

#include "vfg/classify.hpp"

using namespace vfg;

namespace {

const Field Q20(BaseField::rationals(), 1, Gamma(20));

GroupDatum curve_datum(const Field& K, const std::string& a4, const std::string& a6) {
  GroupDatum g;
  g.kind = GroupDatum::Kind::Elliptic;
  g.curve = Curve::short_form(K, K.parse(a4), K.parse(a6));
  g.input = "ec short[" + a4 + "," + a6 + "]";
  return g;
}

GroupDatum general_datum(const Field& K, const std::array<const char*, 5>& a) {
  GroupDatum g;
  g.kind = GroupDatum::Kind::Elliptic;
  g.curve = Curve(K, K.parse(a[0]), K.parse(a[1]), K.parse(a[2]), K.parse(a[3]), K.parse(a[4]));
  return g;
}

GroupDatum simple(GroupDatum::Kind k) {
  GroupDatum g;
  g.kind = k;
  return g;
}

GroupDatum tate_datum(const Field& K, const std::string& q) {
  GroupDatum g;
  g.kind = GroupDatum::Kind::TateInput;
  g.q = K.parse(q);
  return g;
}

GroupDatum twisted_datum(const Field& K, const std::string& d) {
  GroupDatum g;
  g.kind = GroupDatum::Kind::Twisted;
  g.d = K.parse(d);
  return g;
}

GroupDatum unit_ball(const Gamma& r, bool open) {
  GroupDatum g = simple(GroupDatum::Kind::UnitBall);
  g.r = r;
  g.open = open;
  return g;
}

GroupDatum power(std::int64_t n) {
  GroupDatum g = simple(GroupDatum::Kind::PowerSubgroup);
  g.n = n;
  return g;
}

void expect_all_pass(const ClassificationReport& r) {
  for (const auto& c : r.verification) EXPECT_NE(c.status(), "fail") << c.name << ": " << c.detail;
}

ClassifyOptions pl0() {
  ClassifyOptions o;
  o.mode = ListMode::Pl0;
  return o;
}

}  // namespace

TEST(Classify, GoodReductionCurve) {
  const ClassificationReport r = classify_report(Q20, curve_datum(Q20, "1", "1"));
  EXPECT_EQ(r.reduction->name(), "good");
  EXPECT_EQ(r.v_disc->str(), "0");
  EXPECT_EQ(r.entry.item, 10);
  EXPECT_EQ(list_label(r.entry.list, r.entry.item), "E_0");
  EXPECT_FALSE(r.cyclic_order.has_value());
  EXPECT_FALSE(r.order_at_most_4);
  ASSERT_EQ(r.filtration_samples.size(), 3u);
  EXPECT_EQ(r.filtration_samples[1].second, Gamma(2));
  EXPECT_EQ(r.verification.size(), 6u);
  expect_all_pass(r);
  const ojson j = r.to_json();
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["component_group"], nullptr);
  EXPECT_EQ(j["minimal_model"]["u"], "1");
  EXPECT_EQ(j["list_entry"]["proposition"], "acvf");
}

TEST(Classify, TateInputIsSplitWithCyclicComponents) {
  const ClassificationReport r = classify_report(Q20, tate_datum(Q20, "t^5"));
  EXPECT_EQ(r.reduction->name(), "split_multiplicative");
  EXPECT_EQ(r.v_disc->str(), "5");
  ASSERT_TRUE(r.cyclic_order.has_value());
  EXPECT_EQ(r.to_json()["component_group"]["cyclic_order"], "5");
  EXPECT_EQ(r.entry.item, 14);
  expect_all_pass(r);
  const auto it = std::find_if(r.verification.begin(), r.verification.end(), [](const CheckResult& c) { return c.name == "component_classes"; });
  ASSERT_NE(it, r.verification.end());
  EXPECT_EQ(it->status(), "pass");
  EXPECT_EQ(it->samples, 5);
  EXPECT_EQ(classify_report(Q20, tate_datum(Q20, "t^5"), pl0()).entry.item, 13);
}

TEST(Classify, NonsplitAndAdditiveCarryTheOrderBound) {
  const ClassificationReport ns = classify_report(Q20, general_datum(Q20, {"0", "-1", "0", "0", "t"}));
  EXPECT_EQ(ns.reduction->name(), "nonsplit_multiplicative");
  EXPECT_EQ(ns.to_json()["component_group"]["order_at_most"], "4");
  EXPECT_EQ(ns.to_json()["splitting_class"], "-1");
  expect_all_pass(ns);
  EXPECT_EQ(classify_report(Q20, general_datum(Q20, {"0", "-1", "0", "0", "t"}), pl0()).entry.item, 11);

  const ClassificationReport add = classify_report(Q20, curve_datum(Q20, "0", "t^2"));
  EXPECT_EQ(add.reduction->name(), "additive");
  EXPECT_TRUE(add.order_at_most_4);
  EXPECT_EQ(add.entry.item, 10);
  EXPECT_FALSE(add.entry.qualifier.empty());
  expect_all_pass(add);
}

TEST(Classify, GroupsWithoutCurves) {
  using GK = GroupDatum::Kind;
  EXPECT_EQ(classify_report(Q20, simple(GK::Additive)).entry.item, 1);
  EXPECT_EQ(classify_report(Q20, simple(GK::Multiplicative)).entry.item, 4);
  EXPECT_EQ(classify_report(Q20, simple(GK::Multiplicative), pl0()).entry.item, 3);
  EXPECT_EQ(classify_report(Q20, unit_ball(Gamma(0), false)).entry.item, 5);
  EXPECT_EQ(classify_report(Q20, unit_ball(Gamma(0), true)).entry.item, 7);
  EXPECT_EQ(classify_report(Q20, unit_ball(Gamma(2), false)).entry.item, 8);
  EXPECT_EQ(classify_report(Q20, unit_ball(Gamma(2), true)).entry.item, 9);
  EXPECT_EQ(classify_report(Q20, unit_ball(Gamma(0), false), pl0()).entry.item, 4);
  EXPECT_EQ(classify_report(Q20, unit_ball(Gamma(2), false), pl0()).entry.item, 6);
  EXPECT_EQ(classify_report(Q20, twisted_datum(Q20, "-1"), pl0()).entry.item, 7);
  EXPECT_EQ(classify_report(Q20, twisted_datum(Q20, "t"), pl0()).entry.item, 8);
  EXPECT_EQ(classify_report(Q20, twisted_datum(Q20, "t")).entry.item, 4);
  EXPECT_THROW(classify_report(Q20, twisted_datum(Q20, "4")), Error);
  EXPECT_THROW(classify_report(Q20, unit_ball(Gamma(-1), false)), Error);
}

TEST(Classify, EveryCheckPassesOnNonCurveData) {
  using GK = GroupDatum::Kind;
  for (const GroupDatum& g : {simple(GK::Additive), simple(GK::Multiplicative), unit_ball(Gamma(1), false),
                              unit_ball(Gamma(1), true), power(3), twisted_datum(Q20, "-1 + t"), twisted_datum(Q20, "t")})
    expect_all_pass(classify_report(Q20, g));
}

TEST(Classify, PowerSubgroupsFollowTheFieldMode) {
  // no power subgroups of K^x appear in the acvf list: they coincide with K^x
  const ClassificationReport a = classify_report(Q20, power(3));
  EXPECT_EQ(a.entry.item, 4);
  EXPECT_FALSE(a.entry.qualifier.empty());
  const ClassificationReport p = classify_report(Q20, power(3), pl0());
  EXPECT_EQ(p.entry.item, 3);
  EXPECT_EQ(p.entry.qualifier, "n = 3");
}

TEST(Classify, EntriesStayInsideTheirLists) {
  using GK = GroupDatum::Kind;
  const std::vector<GroupDatum> data = {simple(GK::Additive), simple(GK::Multiplicative), unit_ball(Gamma(0), true),
                                        unit_ball(Gamma(3), false), power(2), curve_datum(Q20, "1", "1"),
                                        curve_datum(Q20, "0", "t^2"), twisted_datum(Q20, "t")};
  for (const ListMode m : {ListMode::Acvf, ListMode::Pl0}) {
    ClassifyOptions o;
    o.mode = m;
    for (const auto& g : data) {
      const ClassificationReport r = classify_report(Q20, g, o);
      EXPECT_NE(list_label(m, r.entry.item), "?");
      if (r.reduction) {
        // curves land in the elliptic block of either list
        EXPECT_GE(r.entry.item, 10);
        EXPECT_EQ(r.reduction->multiplicative() && r.reduction->kind == ReductionType::Kind::SplitMult, r.cyclic_order.has_value());
      }
    }
  }
}

TEST(Classify, ReportsAreIdenticalAcrossThreadCounts) {
  ClassifyOptions one, four;
  four.threads = 4;
  for (const GroupDatum& g : {curve_datum(Q20, "1", "1"), tate_datum(Q20, "t^3"), twisted_datum(Q20, "t")}) {
    const std::string a = classify_report(Q20, g, one).to_json().dump(2);
    EXPECT_EQ(a, classify_report(Q20, g, four).to_json().dump(2));
    EXPECT_EQ(a, classify_report(Q20, g, one).to_json().dump(2));
  }
}

TEST(Classify, PuiseuxModeRecordsTheFieldMode) {
  const Field K6(BaseField::rationals(), 6, Gamma(10));
  const ClassificationReport r = classify_report(K6, curve_datum(K6, "0", "t"));
  EXPECT_EQ(r.reduction->name(), "good");
  EXPECT_EQ(r.to_json()["field_mode"]["e"], "6");
  EXPECT_EQ(r.to_json()["minimal_model"]["u"], "t^(1/6)");
}
