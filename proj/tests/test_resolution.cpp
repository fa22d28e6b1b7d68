#include <fstream>
#include <sstream>

#include "common.hpp"
#include "dgkit/resolution.hpp"

using namespace dgkit;
using namespace dgtest;

namespace {

template <class F>
bool all_verdicts(const ResolutionTrace<F>& tr) {
  return tr.ok();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Resolution, CoverStepExamples) {
  const auto& k = f101();
  auto f2 = fixture(k, "F2");
  auto h0 = std::make_shared<const H0Category<PrimeField>>(h0_category(*f2));
  auto s = simple_module(f2, 0);
  EXPECT_TRUE(projective_cover_step(s, 1, h0).objects.empty());
  auto c0 = projective_cover_step(s, 0, h0);
  EXPECT_EQ(c0.objects, (Objects{0}));
  EXPECT_TRUE(c0.epi);
  auto y = yoneda(f2, 0);
  auto yy = direct_sum_modules<PrimeField>({&y, &y}, f2);
  auto c1 = projective_cover_step(yy, 0, h0);
  EXPECT_EQ(c1.objects, (Objects{0, 0}));
  EXPECT_TRUE(c1.epi);
  EXPECT_EQ(c1.map, identity_module_map(yy));
}

TEST(Resolution, YonedaTerminatesImmediately) {
  const auto& k = qq();
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    auto y = yoneda(q, 0);
    auto tr = resolve(y, 3);
    EXPECT_EQ(tr.top, 0);
    EXPECT_EQ(tr.seed, (Objects{0}));
    ASSERT_FALSE(tr.steps.empty());
    EXPECT_EQ(tr.steps[0].alpha, identity_module_map(y)) << name;
    for (auto& st : tr.steps) EXPECT_TRUE(st.objects.empty()) << name;
    EXPECT_TRUE(all_verdicts(tr)) << name;
    EXPECT_EQ(tr.x, single_entry(q, 0, {0}));
  }
}

TEST(Resolution, SimpleOverPointIsOneStep) {
  const auto& k = qq();
  auto f1 = fixture(k, "F1");
  auto tr = resolve(simple_module(f1, 0), 4);
  EXPECT_EQ(tr.seed, (Objects{0}));
  for (auto& st : tr.steps) EXPECT_TRUE(st.objects.empty());
  EXPECT_TRUE(tr.ok());
  EXPECT_EQ(tr.x.entries.size(), 1u);
}

TEST(Resolution, EpsilonResolutionOfSimple) {
  const auto& k = qq();
  auto f2 = fixture(k, "F2");
  auto tr = resolve(simple_module(f2, 0), 6);
  ASSERT_EQ(tr.steps.size(), 6u);
  EXPECT_TRUE(tr.ok());
  // generators appear at the odd steps only
  for (auto& st : tr.steps) EXPECT_EQ(st.objects.size(), st.n % 2 == 0 ? 0u : 1u) << st.n;
  EXPECT_EQ(tr.x, eps_complex(f2, 3));
  EXPECT_EQ(tr.x.lo, -6);
  EXPECT_TRUE(tr.x.extendible);
  // X_{-2k} are the truncations of the final complex
  for (auto& st : tr.steps) EXPECT_EQ(st.x, sigma_geq(tr.x, st.n));
}

TEST(Resolution, EpsilonGoldenTrace) {
  const auto& k = qq();
  auto f2 = fixture(k, "F2");
  auto tr = resolve(simple_module(f2, 0), 6);
  auto golden = read_file(std::string(DGKIT_FIXTURES) + "/F2-simple-W6.trace");
  EXPECT_EQ(trace_text(tr), golden);
}

TEST(Resolution, StepSoundnessRandom) {
  const auto& k = f101();
  Rng rng(7);
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    for (int s = 0; s < 4; ++s) {
      auto m = random_hfp_module(q, rng, TwShape{-2, 0, 2});
      auto tr = resolve(m, 4);
      EXPECT_TRUE(tr.ok()) << name << " sample " << s;
      for (auto& st : tr.steps) {
        EXPECT_TRUE(st.soundness);
        EXPECT_TRUE(validate_twisted(st.x).ok);
        if (!st.x.empty()) {
          EXPECT_LE(st.x.top(), tr.top);
          EXPECT_GE(st.x.entries.begin()->first, st.n);
        }
      }
    }
  }
}

TEST(Resolution, NonpositiveHypothesisEnforced) {
  const auto& k = f101();
  auto broken = fixture(k, "F4-broken");
  EXPECT_THROW(resolve(yoneda(broken, 0), 2), HypothesisFailure);
}

TEST(Resolution, ReconstructRoundTrip) {
  const auto& k = f101();
  Rng rng(11);
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    for (int s = 0; s < 3; ++s) {
      auto y = random_twisted(q, rng, TwShape{-2, 0, 2});
      auto m = totalize(y);
      auto r = reconstruct(m, 4);
      EXPECT_TRUE(r.ok()) << name << " sample " << s;
      EXPECT_TRUE(r.assembled_matches);
      int lo = r.trace.lo() + 1, hi = m.hi() + 1;
      EXPECT_EQ(window_dims(totalize(r.x), lo, hi), window_dims(m, lo, hi)) << name;
      // reconstruction of the reconstruction
      auto r2 = reconstruct(totalize(r.x), 4);
      EXPECT_EQ(window_dims(totalize(r2.x), lo + 1, hi), window_dims(m, lo + 1, hi)) << name;
    }
  }
}

TEST(Resolution, ReconstructExamples) {
  const auto& k = qq();
  auto f2 = fixture(k, "F2");
  auto ry = reconstruct(yoneda(f2, 0), 3);
  EXPECT_EQ(ry.x, single_entry(f2, 0, {0}));
  EXPECT_TRUE(ry.ok());
  auto rs = reconstruct(simple_module(f2, 0), 4);
  EXPECT_EQ(rs.x, eps_complex(f2, 2));
  EXPECT_TRUE(rs.ok());
  auto rz = reconstruct(zero_module(f2), 2);
  EXPECT_TRUE(rz.x.empty());
  EXPECT_TRUE(rz.ok());
}

TEST(Resolution, QuasiFullyFaithfulExamples) {
  const auto& k = qq();
  auto f2 = fixture(k, "F2");
  auto x = single_entry(f2, 0, {0});
  auto r = compare_homs(x, x, -3, 1);
  EXPECT_TRUE(r.ok());
  std::vector<std::size_t> tw;
  for (auto& row : r.rows) tw.push_back(row.tw);
  EXPECT_EQ(tw, (std::vector<std::size_t>{0, 0, 1, 1, 0}));  // H of end(*) = k + k eps
  // cone of the identity is contractible
  auto id = tw_identity(x);
  auto c = tw_cone(id, x, x).cone;
  auto rc = compare_homs(c, x, -3, 1);
  EXPECT_TRUE(rc.ok());
  for (auto& row : rc.rows) EXPECT_EQ(row.tw, 0u);
}

TEST(Resolution, QuasiFullyFaithfulRandom) {
  const auto& k = f101();
  Rng rng(5);
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    std::vector<std::pair<TwistedComplex<PrimeField>, TwistedComplex<PrimeField>>> pairs;
    for (int s = 0; s < 3; ++s) pairs.emplace_back(random_twisted(q, rng, TwShape{-2, 0, 2}), random_twisted(q, rng, TwShape{-2, 0, 2}));
    auto r = verify_quasi_ff(q, pairs, -4, 4);
    EXPECT_TRUE(r.ok()) << name << ": " << (r.mismatches.empty() ? "" : r.mismatches[0]);
  }
}

TEST(Resolution, ComparisonSmall) {
  const auto& k = f101();
  Rng rng(3);
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    std::vector<DgModule<PrimeField>> ms;
    for (int s = 0; s < 2; ++s) ms.push_back(random_hfp_module(q, rng, TwShape{-1, 0, 1}));
    auto r = verify_comparison(q, ms, 3);
    EXPECT_TRUE(r.ok) << name << ": " << (r.failures.empty() ? "" : r.failures[0]);
  }
}

// ---------------------------------------------------------------------------

TEST(TStructure, AisleExamples) {
  const auto& k = qq();
  auto f2 = fixture(k, "F2");
  auto y = yoneda(f2, 0);
  EXPECT_EQ(aisle_check(y, 0, Side::leq).verdict, Verdict::yes);
  EXPECT_EQ(aisle_check(y, 0, Side::geq).verdict, Verdict::no);
  EXPECT_EQ(*aisle_check(y, 0, Side::geq).witness, -1);
  auto z = zero_module(f2);
  for (int n = -3; n <= 3; ++n) {
    EXPECT_EQ(aisle_check(z, n, Side::leq).verdict, Verdict::yes);
    EXPECT_EQ(aisle_check(z, n, Side::geq).verdict, Verdict::yes);
  }
  // a window that misses the bottom of the support cannot confirm geq
  EXPECT_EQ(aisle_check(y, -1, Side::geq, std::pair<int, int>{0, 0}).verdict, Verdict::inconclusive);
  EXPECT_EQ(aisle_check(y, -1, Side::leq, std::pair<int, int>{-1, -1}).verdict, Verdict::inconclusive);
  EXPECT_EQ(aisle_check(y, -1, Side::leq, std::pair<int, int>{-1, 0}).verdict, Verdict::no);
}

TEST(TStructure, TotOfTopIndexIsInAisle) {
  const auto& k = f101();
  Rng rng(21);
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    for (int s = 0; s < 10; ++s) {
      auto x = random_twisted(q, rng, TwShape{-3, 1, 2});
      EXPECT_EQ(aisle_check(totalize(x), 1, Side::leq).verdict, Verdict::yes);
    }
  }
}

TEST(TStructure, ConcentrationAndShift) {
  const auto& k = f101();
  Rng rng(4);
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    for (int s = 0; s < 5; ++s) {
      auto m = random_hfp_module(q, rng, TwShape{-2, 0, 2});
      for (int n = -3; n <= 2; ++n) {
        bool both = aisle_check(m, n, Side::leq).verdict == Verdict::yes && aisle_check(m, n, Side::geq).verdict == Verdict::yes;
        bool conc = !m.empty() ? [&] {
          for (int i = m.lo(); i <= m.hi(); ++i)
            if (i != n && module_h_nonzero(m, i)) return false;
          return true;
        }()
                               : true;
        EXPECT_EQ(both, conc);
        // M[1] is in the leq(n-1) aisle exactly when M is in leq(n)
        EXPECT_EQ(aisle_check(shift_module(m, 1), n - 1, Side::leq).verdict, aisle_check(m, n, Side::leq).verdict);
        EXPECT_EQ(aisle_check(shift_module(m, 1), n - 1, Side::geq).verdict, aisle_check(m, n, Side::geq).verdict);
      }
    }
  }
}

TEST(TStructure, DerivedProjectiveExamples) {
  const auto& k = qq();
  auto f2 = fixture(k, "F2");
  auto y = yoneda(f2, 0);
  auto eps = totalize(eps_complex(f2, 3));
  auto acyc = module_cone(identity_module_map(y), y, y).cone;
  auto r = derived_projective_check(f2, 0, {y, acyc, eps});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.rows[0].lhs, 1u);
  EXPECT_EQ(r.rows[1].lhs, 0u);
  EXPECT_EQ(r.rows[1].rhs, 0u);
  EXPECT_EQ(r.rows[2].lhs, 1u);
  EXPECT_EQ(r.rows[2].rhs, 1u);
}

TEST(TStructure, DerivedProjectiveStableUnderConeEquivalence) {
  const auto& k = f101();
  Rng rng(8);
  auto f4 = fixture(k, "F4");
  for (int s = 0; s < 5; ++s) {
    auto m = random_hfp_module(f4, rng, TwShape{-2, 0, 2});
    auto t = totalize(random_twisted(f4, rng, TwShape{-1, 0, 1}));
    auto acyc = module_cone(identity_module_map(t), t, t).cone;
    auto m2 = direct_sum_modules<PrimeField>({&m, &acyc}, f4);
    auto r = derived_projective_check(f4, 0, {m, m2});
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.rows[0].lhs, r.rows[1].lhs);
  }
}

TEST(TStructure, HeartExamples) {
  const auto& k = f101();
  auto f1 = fixture(k, "F1");
  auto r1 = heart_compare(f1, std::vector<DgModule<PrimeField>>{yoneda(f1, 0), simple_module(f1, 0)});
  EXPECT_TRUE(r1.ok());
  auto f2 = fixture(k, "F2");
  EXPECT_FALSE(concentrated_in(yoneda(f2, 0), 0));
  auto s = simple_module(f2, 0);
  auto r2 = heart_compare(f2, std::vector<DgModule<PrimeField>>{s, direct_sum_modules<PrimeField>({&s, &s}, f2)});
  EXPECT_TRUE(r2.ok()) << (r2.failures.empty() ? "" : r2.failures[0]);
  ASSERT_EQ(r2.rows.size(), 4u);
  EXPECT_EQ(r2.rows[3].rhs, 4u);
}

TEST(TStructure, HeartRandom) {
  const auto& k = f101();
  Rng rng(12);
  auto f4 = fixture(k, "F4");
  std::vector<DgModule<PrimeField>> ms;
  for (int s = 0; s < 3; ++s) ms.push_back(random_heart_module(f4, rng));
  auto r = heart_compare(f4, ms);
  EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures[0]);
}

TEST(TStructure, KaroubianCheck) {
  const auto& k = f101();
  for (auto name : {"F1", "F2", "F4"}) {
    auto h = h0_category(*fixture(k, name));
    EXPECT_TRUE(karoubian_check(h).certified) << name;
  }
  // k x k as the endomorphism algebra of one object: e = (1, 0) does not split
  DgCategory<PrimeField> q(k);
  q.add_object("*");
  q.finalize_objects();
  q.set_basis(0, 0, {{"e1", 0}, {"e2", 0}});
  q.set_comp(0, 0, 0, 0, 0, {1, 0});
  q.set_comp(0, 0, 0, 1, 1, {0, 1});
  q.set_identity(0, {1, 1});
  ASSERT_TRUE(validate_dg_category(q).ok);
  auto kr = karoubian_check(h0_category(q));
  EXPECT_FALSE(kr.certified);
  ASSERT_EQ(kr.warnings.size(), 1u);
}
