#include "common.hpp"
#include "dgkit/io.hpp"

using namespace dgkit;
using namespace dgtest;

namespace {

const std::string fx = DGKIT_FIXTURES;

Json reparse(const Json& j) { return Json::parse(io::dump(j)); }

template <class F>
void expect_twisted_round_trip(const TwistedComplex<F>& x) {
  auto back = twc_from_json(reparse(twc_to_json(x, "F")), x.base);
  EXPECT_TRUE(back == x);
  EXPECT_EQ(back.lo, x.lo);
  EXPECT_EQ(back.hi, x.hi);
  EXPECT_EQ(back.extendible, x.extendible);
  EXPECT_EQ(io::dump(twc_to_json(back, "F")), io::dump(twc_to_json(x, "F")));
}

}  // namespace

TEST(Io, ShippedCategoriesMatchBuilders) {
  const auto& k = qq();
  for (auto name : {"F1", "F2", "F4", "F2p", "F4-broken"}) {
    auto j = io::read_json_file(fx + "/" + name + ".dgc");
    EXPECT_EQ(j.begin().key(), "format");
    EXPECT_EQ(dgc_field(j), FieldSpec::rational());
    EXPECT_TRUE(dgc_from_json(j, k) == fixture_by_name(k, name)) << name;
  }
}

TEST(Io, ShippedMutationsMatchBuilders) {
  const auto& k = qq();
  auto ms = mutations(k);
  EXPECT_EQ(ms.size(), 10u);
  for (auto& m : ms) {
    auto q = dgc_from_json(io::read_json_file(fx + "/mutations/" + m.name + ".dgc"), k);
    EXPECT_TRUE(q == m.category) << m.name;
    auto r = validate_dg_category(q);
    EXPECT_FALSE(r.ok) << m.name;
    EXPECT_EQ(r.axiom, m.axiom) << m.name;
  }
}

TEST(Io, ShippedModulesAndComplexes) {
  const auto& k = qq();
  auto f2 = load_category<RationalField>("F2.dgc", fx + "/F2-simple.dgm", k);
  EXPECT_TRUE(*f2 == fixture_f2(k));
  EXPECT_TRUE(dgm_from_json(io::read_json_file(fx + "/F2-simple.dgm"), f2) == simple_module(f2, 0));
  EXPECT_TRUE(dgm_from_json(io::read_json_file(fx + "/F2-yoneda.dgm"), f2) == yoneda(f2, 0));
  auto eps = twc_from_json(io::read_json_file(fx + "/F2-eps3.twc"), f2);
  EXPECT_TRUE(eps == eps_complex(f2, 3));
  EXPECT_EQ(eps.lo, -6);
  auto empty = twc_from_json(io::read_json_file(fx + "/empty.twc"), f2);
  EXPECT_TRUE(empty.empty());
  auto f4 = load_category<RationalField>("F4", "", k);
  EXPECT_TRUE(dgm_from_json(io::read_json_file(fx + "/F4-simple.dgm"), f4) == simple_module(f4, 0));
  EXPECT_TRUE(dgm_from_json(io::read_json_file(fx + "/F4-yoneda.dgm"), f4) == yoneda(f4, 0));
  auto pair = twc_from_json(io::read_json_file(fx + "/F4-pair.twc"), f4);
  auto u = twm_from_json(io::read_json_file(fx + "/F4-u.twm"), pair, pair);
  EXPECT_EQ(u.degree, 0);
  EXPECT_FALSE(is_one_sided(u));
  EXPECT_TRUE(tw_differential(u, pair, pair).is_zero());
}

TEST(Io, CategoryRoundTripOverPrimeField) {
  const auto& k = f101();
  for (auto name : {"F1", "F2", "F4", "F2p", "F4-broken"}) {
    auto q = fixture_by_name(k, name);
    auto j = reparse(dgc_to_json(q));
    EXPECT_EQ(dgc_field(j), FieldSpec::prime(101));
    EXPECT_TRUE(dgc_from_json(j, k) == q) << name;
  }
  for (auto& m : mutations(k)) EXPECT_TRUE(dgc_from_json(reparse(dgc_to_json(m.category)), k) == m.category) << m.name;
}

TEST(Io, RandomRoundTrips) {
  const auto& k = f101();
  Rng rng(41);
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    for (int s = 0; s < 10; ++s) {
      auto x = random_twisted(q, rng, TwShape{-3, 1, 2});
      x.extendible = s % 2;
      expect_twisted_round_trip(x);
      auto y = random_twisted(q, rng, TwShape{-2, 0, 2});
      auto f = random_closed_morphism(x, y, rng);
      EXPECT_TRUE(twm_from_json(reparse(twm_to_json(f, x, y)), x, y) == f);
      auto m = random_hfp_module(q, rng, TwShape{-2, 0, 2});
      auto back = dgm_from_json(reparse(dgm_to_json(m, name)), q);
      EXPECT_TRUE(back == m) << name;
      EXPECT_TRUE(validate_module(back).ok);
    }
  }
}

TEST(Io, RationalCoefficients) {
  const auto& k = qq();
  auto q = fixture(k, "F2");
  auto x = two_term(q, -2, 0, {{1, 1}});
  auto b = x.q_at(-2, 0);
  b.cells[0][1] = k.parse("-3/4");
  x.set_q(-2, 0, b);
  auto j = twc_to_json(x, "F2");
  EXPECT_EQ(j["q"]["-2->0"][0][0][0][1], "-3/4");
  expect_twisted_round_trip(x);
  // a rational fixture read mod p
  auto jm = Json::parse(R"({"format": 1, "objects": ["*"], "homs": {"*->*": {"basis": [{"name": "id", "deg": 0}]}},
                            "comp": {"id,id": [["id", "1/2"]]}, "ids": {"*": [["id", 2]]}})");
  auto qm = dgc_from_json(jm, f101());
  EXPECT_EQ(qm.compose(0, 0, 0, qm.identity(0), qm.identity(0)), ints(f101(), {2}));
}

TEST(Io, FormatErrors) {
  const auto& k = qq();
  auto good = dgc_to_json(fixture_f2(k));
  auto bad = good;
  bad["format"] = 2;
  EXPECT_THROW(dgc_from_json(bad, k), FormatError);
  bad = good;
  bad.erase("format");
  EXPECT_THROW(dgc_from_json(bad, k), FormatError);
  bad = good;
  bad["comp"]["eps,nope"] = Json::array();
  EXPECT_THROW(dgc_from_json(bad, k), FormatError);
  bad = good;
  bad["ids"]["*"] = Json::array({Json::array({"id", "1/0"})});
  EXPECT_THROW(dgc_from_json(bad, k), FormatError);
  bad = good;
  bad["ids"] = Json::object();
  EXPECT_THROW(dgc_from_json(bad, k), FormatError);

  auto q = fixture(k, "F2");
  auto m = dgm_to_json(yoneda(q, 0), "F2");
  auto bm = m;
  bm["action"]["eps"]["0"] = Json::array({Json::array({"1", "0"})});
  EXPECT_THROW(dgm_from_json(bm, q), FormatError);
  bm = m;
  bm["values"]["*"]["dims"]["x"] = 1;
  EXPECT_THROW(dgm_from_json(bm, q), FormatError);

  auto t = twc_to_json(eps_complex(q, 1), "F2");
  t["entries"]["0"] = Json::array({"nowhere"});
  EXPECT_THROW(twc_from_json(t, q), FormatError);
  EXPECT_THROW(io::read_json_file(fx + "/does-not-exist.dgc"), FormatError);
}

TEST(Io, RelativeCategoryPaths) {
  EXPECT_EQ(resolve_path("F2.dgc", "/a/b/m.dgm"), "/a/b/F2.dgc");
  EXPECT_EQ(resolve_path("/abs/F2.dgc", "/a/b/m.dgm"), "/abs/F2.dgc");
  EXPECT_EQ(resolve_path("F2.dgc", ""), "F2.dgc");
  EXPECT_EQ(referenced_field("F2.dgc", fx + "/F2-simple.dgm"), FieldSpec::rational());
  EXPECT_TRUE(is_builtin_fixture("F4"));
  EXPECT_FALSE(is_builtin_fixture("F4.dgc"));
}
