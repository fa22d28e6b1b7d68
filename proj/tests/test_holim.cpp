#include "common.hpp"
#include "dgkit/resolution.hpp"

using namespace dgkit;
using namespace dgtest;

namespace {

template <class F>
ModuleSequence<F> constant_sequence(const DgModule<F>& m, std::size_t len) {
  ModuleSequence<F> s;
  for (std::size_t n = 0; n < len; ++n) s.terms.push_back(m);
  for (std::size_t n = 0; n + 1 < len; ++n) s.maps.push_back(identity_module_map(m));
  s.stabilized_from = 0;
  return s;
}

}  // namespace

TEST(Holim, ConstantSequenceCollapses) {
  const auto& k = f101();
  Rng rng(1);
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    auto m = random_hfp_module(q, rng, TwShape{-2, 0, 2});
    auto s = constant_sequence(m, 4);
    auto h = hocolim_modules(s);
    EXPECT_TRUE(validate_module(h.cone.cone).ok);
    EXPECT_TRUE(check_hocolim_inclusions(h).ok);
    for (int i = m.lo() - 2; i <= m.hi() + 2; ++i) {
      EXPECT_EQ(module_cohomology_dims(h.cone.cone, i), module_cohomology_dims(m, i)) << name << " H^" << i;
      EXPECT_TRUE(module_map_verdict(h.j[0], m, h.cone.cone, i).iso);
    }
    std::vector<int> t(4, m.lo() - 1);
    HocolimTarget<PrimeField> tgt{&m, std::vector<ModuleMap<PrimeField>>(4, identity_module_map(m))};
    auto r = verify_hocolim_cohomology(s, t, m.lo() - 1, m.hi() + 1, &tgt);
    EXPECT_TRUE(r.ok) << name;
  }
}

TEST(Holim, InclusionsAreNullHomotopicNotZero) {
  const auto& k = qq();
  auto f1 = fixture(k, "F1");
  auto m = simple_module(f1, 0);
  auto h = hocolim_modules(constant_sequence(m, 2));
  auto comp = compose_module_maps(k, h.cone.j, h.one_minus_mu, h.sum_src, h.sum_tgt, h.cone.cone);
  EXPECT_FALSE(comp.is_zero());
  EXPECT_TRUE(check_hocolim_inclusions(h).ok);
}

TEST(Holim, SequenceValidation) {
  const auto& k = qq();
  auto f2 = fixture(k, "F2");
  auto y = yoneda(f2, 0);
  auto s = constant_sequence(y, 2);
  s.maps[0] = scale_module_map(k, k.from_int(2), s.maps[0]);
  EXPECT_FALSE(validate_sequence(s).ok);  // not the identity past stabilization
  s.stabilized_from = 1;
  EXPECT_TRUE(validate_sequence(s).ok);
  s.maps[0].degree = 1;
  EXPECT_FALSE(validate_sequence(s).ok);
}

TEST(Holim, HypothesisViolationReported) {
  const auto& k = qq();
  auto f1 = fixture(k, "F1");
  auto m = simple_module(f1, 0);
  ModuleSequence<RationalField> s;
  s.terms = {m, m};
  s.maps = {zero_module_map<RationalField>(1, 0)};
  s.stabilized_from = 1;
  auto r = verify_hocolim_cohomology(s, {-1, -1}, -1, 1);
  EXPECT_FALSE(r.ok);
  ASSERT_FALSE(r.failures.empty());
  EXPECT_NE(r.failures[0].find("hypothesis"), std::string::npos);
}

TEST(Holim, SplitConeExamples) {
  const auto& k = qq();
  auto f2 = fixture(k, "F2");
  // canonical split B = A + C with d(sigma) = 0: delta vanishes, phi psi = 1
  auto a = yoneda(f2, 0);
  auto c = simple_module(f2, 0);
  auto b = direct_sum_modules<RationalField>({&a, &c}, f2);
  SplitSample<RationalField> s;
  s.a = a;
  s.b = b;
  s.c = c;
  for (std::size_t o = 0; o < 1; ++o) {
    GradedMap<RationalField> fo, go, so, ro;
    for (auto& [n, dim] : b.values[o].dims) {
      std::size_t da = a.values[o].dim(n), dc = c.values[o].dim(n);
      Matrix<RationalField> fi(dim, da), gi(dc, dim), si(dim, dc), ri(da, dim);
      for (std::size_t r = 0; r < da; ++r) {
        fi.set(k, r, r, 1);
        ri.set(k, r, r, 1);
      }
      for (std::size_t r = 0; r < dc; ++r) {
        gi.set(k, r, da + r, 1);
        si.set(k, da + r, r, 1);
      }
      fo.set(n, fi);
      go.set(n, gi);
      so.set(n, si);
      ro.set(n, ri);
    }
    s.f.comp.push_back(fo);
    s.g.comp.push_back(go);
    s.sigma.comp.push_back(so);
    s.rho.comp.push_back(ro);
  }
  auto sc = split_cone_compare(s.f, s.g, s.sigma, s.rho, a, b, c);
  EXPECT_TRUE(check_split_compare(sc, c).ok);
  EXPECT_EQ(sc.psi, compose_module_maps(k, sc.cone.j, s.sigma, c, b, sc.cone.cone));
  // swapping the splittings breaks the hypotheses
  EXPECT_THROW(split_cone_compare(s.f, s.g, s.sigma, s.f, a, b, c), Error);
}

TEST(Holim, SplitConeRandom) {
  const auto& k = f101();
  Rng rng(17);
  std::size_t twisted = 0;
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    for (int t = 0; t < 5; ++t) {
      auto s = random_split_sample(q, rng, TwShape{-2, 0, 2});
      if (!s.h.is_zero()) ++twisted;
      ASSERT_TRUE(validate_module(s.b).ok) << name;
      auto sc = split_cone_compare(s.f, s.g, s.sigma, s.rho, s.a, s.b, s.c);
      auto r = check_split_compare(sc, s.c);
      EXPECT_TRUE(r.ok) << name << ": " << r.message;
    }
  }
  EXPECT_GT(twisted, 0u);  // some samples are genuinely non-split as complexes
}

TEST(Holim, TruncationColimitExamples) {
  const auto& k = qq();
  auto f2 = fixture(k, "F2");
  auto r = verify_truncation_colimit(eps_complex(f2, 3));
  EXPECT_TRUE(r.ok) << (r.failures.empty() ? "" : r.failures[0]);
  EXPECT_TRUE(verify_truncation_stabilization(eps_complex(f2, 3)).ok);
  TwistedComplex<RationalField> empty;
  empty.base = f2;
  EXPECT_TRUE(verify_truncation_colimit(empty).ok);
}

TEST(Holim, TruncationColimitRandom) {
  const auto& k = f101();
  Rng rng(23);
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    for (int t = 0; t < 4; ++t) {
      auto x = random_twisted(q, rng, TwShape{-3, 0, 2});
      auto r = verify_truncation_colimit(x);
      EXPECT_TRUE(r.ok) << name << ": " << (r.failures.empty() ? "" : r.failures[0]);
      EXPECT_TRUE(verify_truncation_stabilization(x).ok) << name;
      auto ts = truncation_sequence(x);
      auto tot = totalize(x);
      HocolimTarget<PrimeField> tgt{&tot, ts.to_total};
      auto hr = verify_hocolim_cohomology(ts.seq, ts.thresholds, tot.lo() - 1, tot.hi() + 1, &tgt);
      EXPECT_TRUE(hr.ok) << name << ": " << (hr.failures.empty() ? "" : hr.failures[0]);
    }
  }
}

TEST(Holim, ResolutionSequenceHocolim) {
  const auto& k = qq();
  auto f2 = fixture(k, "F2");
  auto m = simple_module(f2, 0);
  auto tr = resolve(m, 5);
  auto rs = resolution_sequence(tr);
  HocolimTarget<RationalField> tgt{&m, rs.alphas};
  auto r = verify_hocolim_cohomology(rs.seq, rs.thresholds, tr.lo(), 1, &tgt);
  EXPECT_TRUE(r.ok) << (r.failures.empty() ? "" : r.failures[0]);
}
