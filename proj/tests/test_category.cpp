#include "common.hpp"

using namespace dgkit;
using namespace dgtest;

namespace {

template <class F>
void expect_fixtures_valid(const F& k) {
  for (auto name : {"F1", "F2", "F4", "F2p", "F4-broken"}) {
    auto r = validate_dg_category(fixture_by_name(k, name));
    EXPECT_TRUE(r.ok) << name << ": " << r.axiom << " " << r.witness;
  }
}

// one object, basis {id (0), x (0), y (-1)}, dy = x, all products of x, y vanish
template <class F>
DgCategory<F> with_degree0_boundary(const F& k) {
  DgCategory<F> q(k);
  q.add_object("*");
  q.finalize_objects();
  q.set_basis(0, 0, {{"id", 0}, {"x", 0}, {"y", -1}});
  q.set_d(0, 0, 2, ints(k, {0, 1, 0}));
  for (std::size_t i = 0; i < 3; ++i) {
    auto e = unit_vector(k, 3, i);
    q.set_comp(0, 0, 0, 0, i, e);
    q.set_comp(0, 0, 0, i, 0, e);
  }
  q.set_identity(0, ints(k, {1, 0, 0}));
  return q;
}

// two isomorphic objects X, Y with inverse isomorphisms f, g
template <class F>
DgCategory<F> two_isomorphic(const F& k) {
  DgCategory<F> q(k);
  q.add_object("X");
  q.add_object("Y");
  q.finalize_objects();
  q.set_basis(0, 0, {{"idX", 0}});
  q.set_basis(1, 1, {{"idY", 0}});
  q.set_basis(0, 1, {{"f", 0}});
  q.set_basis(1, 0, {{"g", 0}});
  auto one = ints(k, {1});
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      q.set_comp(a, b, b, 0, 0, one);  // id_b * h
      q.set_comp(a, a, b, 0, 0, one);  // h * id_a
    }
  q.set_comp(0, 1, 0, 0, 0, one);  // g f = idX
  q.set_comp(1, 0, 1, 0, 0, one);  // f g = idY
  q.set_identity(0, one);
  q.set_identity(1, one);
  return q;
}

}  // namespace

TEST(Category, FixturesValidate) {
  expect_fixtures_valid(qq());
  expect_fixtures_valid(f101());
}

TEST(Category, MutationsDetected) {
  for (auto& m : mutations(qq())) {
    auto r = validate_dg_category(m.category);
    EXPECT_FALSE(r.ok) << m.name;
    EXPECT_EQ(r.axiom, m.axiom) << m.name << ": " << r.witness;
  }
  for (auto& m : mutations(f101())) EXPECT_FALSE(validate_dg_category(m.category).ok) << m.name;
}

// d(eps) = 1 keeps every axiom: d(eps * eps) = 0 = d(eps) eps - eps d(eps).
TEST(Category, ExteriorWithUnitBoundaryIsValid) {
  auto q = fixture_f2(qq());
  q.set_d(0, 0, 1, ints(qq(), {1, 0}));
  EXPECT_TRUE(validate_dg_category(q).ok);
  auto h = h0_category(q);
  EXPECT_EQ(h.dim(0, 0), 0u);
}

TEST(Category, TwoObjectCategory) {
  auto q = two_isomorphic(qq());
  EXPECT_TRUE(validate_dg_category(q).ok);
  q.set_comp(0, 1, 0, 0, 0, ints(qq(), {2}));
  auto r = validate_dg_category(q);
  EXPECT_EQ(r.axiom, "associativity");
}

TEST(Category, NonpositiveCohomology) {
  for (auto name : {"F1", "F2", "F4", "F2p"}) EXPECT_FALSE(check_nonpositive_cohomology(fixture_by_name(qq(), name))) << name;
  auto w = check_nonpositive_cohomology(fixture_f4_broken(qq()));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->degree, 1);
  EXPECT_EQ(w->dim, 1u);
}

TEST(Category, H0Examples) {
  for (auto name : {"F1", "F2", "F4", "F2p"}) {
    auto h = h0_category(fixture_by_name(qq(), name));
    EXPECT_EQ(h.N(), 1u);
    EXPECT_EQ(h.dim(0, 0), 1u) << name;
    EXPECT_TRUE(validate_h0(h).ok);
  }
  auto two = h0_category(two_isomorphic(qq()));
  EXPECT_EQ(two.dim(0, 1), 1u);
  EXPECT_TRUE(validate_h0(two).ok);
}

TEST(Category, H0RejectsInvalid) {
  auto m = mutations(qq());
  EXPECT_THROW(h0_category(m[0].category), Error);
}

// Products of representatives perturbed by coboundaries have the same class.
TEST(Category, H0RepresentativeIndependence) {
  const auto& k = f101();
  auto q = with_degree0_boundary(k);
  ASSERT_TRUE(validate_dg_category(q).ok);
  auto h = h0_category(q);
  ASSERT_EQ(h.dim(0, 0), 1u);
  Rng rng(7);
  auto rep = q.from_degree(0, 0, 0, h.hom(0, 0).reps[0]);
  auto hc = q.hom_complex(0, 0);
  for (int t = 0; t < 20; ++t) {
    auto g = vec_add(k, rep, q.from_degree(0, 0, 0, apply(k, hc.diff(-1), random_vector(k, rng, hc.dim(-1)))));
    auto f = vec_add(k, rep, q.from_degree(0, 0, 0, apply(k, hc.diff(-1), random_vector(k, rng, hc.dim(-1)))));
    EXPECT_EQ(h0_class(q, h.hom(0, 0), 0, 0, q.compose(0, 0, 0, g, f)), h.comp[0][0][0]);
  }
}

TEST(Category, OppositeIsInvolution) {
  for (auto name : {"F1", "F2", "F4", "F2p"}) {
    auto q = fixture_by_name(qq(), name);
    auto o = opposite(q);
    EXPECT_TRUE(validate_dg_category(o).ok) << name;
    EXPECT_TRUE(opposite(o) == q) << name;
  }
  EXPECT_TRUE(opposite(fixture_f2(qq())) == fixture_f2(qq()));
  EXPECT_TRUE(opposite(fixture_f1(qq())) == fixture_f1(qq()));
  auto two = two_isomorphic(qq());
  EXPECT_TRUE(opposite(opposite(two)) == two);
}

// Odd-odd products pick up a sign in the opposite.
TEST(Category, OppositeSign) {
  const auto& k = qq();
  DgCategory<RationalField> q(k);
  q.add_object("*");
  q.finalize_objects();
  q.set_basis(0, 0, {{"id", 0}, {"s", -1}, {"t", -1}, {"st", -2}});
  for (std::size_t i = 0; i < 4; ++i) {
    q.set_comp(0, 0, 0, 0, i, unit_vector(k, 4, i));
    q.set_comp(0, 0, 0, i, 0, unit_vector(k, 4, i));
  }
  q.set_comp(0, 0, 0, 1, 2, unit_vector(k, 4, 3));  // s t = st
  q.set_identity(0, unit_vector(k, 4, 0));
  ASSERT_TRUE(validate_dg_category(q).ok);
  auto o = opposite(q);
  // t o_op s = (-1)^{1} s t
  EXPECT_EQ(o.compose(0, 0, 0, unit_vector(k, 4, 1), unit_vector(k, 4, 2)), vec_scale(k, k.from_int(0), unit_vector(k, 4, 3)));
  EXPECT_EQ(o.compose(0, 0, 0, unit_vector(k, 4, 2), unit_vector(k, 4, 1)), vec_scale(k, k.from_int(-1), unit_vector(k, 4, 3)));
}

TEST(Category, Functors) {
  const auto& k = qq();
  auto f1 = fixture(k, "F1");
  auto f2 = fixture(k, "F2");
  auto f2p = fixture(k, "F2p");
  EXPECT_TRUE(validate_dg_functor(identity_functor(f2)).ok);
  auto kill = functor_f2_to_f1(f2, f1);
  EXPECT_TRUE(validate_dg_functor(kill).ok);
  EXPECT_TRUE(validate_dg_functor(functor_f2_to_f2p(f2, f2p)).ok);
  auto bad = identity_functor(f2);
  bad.on_homs[0].set(k, 0, 1, k.one());
  auto r = validate_dg_functor(bad);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.axiom, "degree");
  auto comp = compose_functors(kill, identity_functor(f2));
  EXPECT_TRUE(validate_dg_functor(comp).ok);
  EXPECT_EQ(comp.on_homs[0], kill.on_homs[0]);
}

TEST(Module, YonedaExamples) {
  const auto& k = qq();
  auto y1 = yoneda(fixture(k, "F1"), 0);
  EXPECT_TRUE(validate_module(y1).ok);
  EXPECT_EQ(y1.values[0].dims, (std::map<int, std::size_t>{{0, 1}}));

  auto y2 = yoneda(fixture(k, "F2"), 0);
  EXPECT_TRUE(validate_module(y2).ok);
  EXPECT_EQ(y2.values[0].dims, (std::map<int, std::size_t>{{-1, 1}, {0, 1}}));
  // eps: 1 -> eps, eps -> 0
  auto eps = y2.act(0, 0, 1);
  EXPECT_EQ(eps.degree, -1);
  EXPECT_EQ(component(eps, y2.values[0], y2.values[0], 0), Matrix<RationalField>::identity(k, 1));
  EXPECT_TRUE(component(eps, y2.values[0], y2.values[0], -1).is_zero());

  auto y4 = yoneda(fixture(k, "F4"), 0);
  EXPECT_TRUE(validate_module(y4).ok);
  EXPECT_EQ(y4.values[0].total_dim(), 3u);
  EXPECT_EQ(y4.values[0].diff(0).get(0, 1), k.one());  // w -> u
}

TEST(Module, ValidateDetectsSignError) {
  const auto& k = qq();
  auto q = fixture(k, "F4");
  auto y = yoneda(q, 0);
  auto bad = y;
  bad.action[0][1] = scale_map(k, k.from_int(-1), bad.action[0][1]);  // flip w
  EXPECT_FALSE(validate_module(bad).ok);
}

TEST(Module, CohomologyExamples) {
  const auto& k = qq();
  auto q = fixture(k, "F2");
  auto h0 = std::make_shared<const H0Category<RationalField>>(h0_category(*q));
  auto y = yoneda(q, 0);
  for (int i : {0, -1}) {
    auto hm = module_cohomology(y, i, h0);
    EXPECT_EQ(hm.module.dims, std::vector<std::size_t>{1});
    EXPECT_TRUE(validate_h0_module(hm.module).ok);
  }
  EXPECT_EQ(module_cohomology(y, 1, h0).module.dims, std::vector<std::size_t>{0});

  auto q1 = fixture(k, "F1");
  auto y1 = yoneda(q1, 0);
  EXPECT_EQ(module_cohomology_dims(y1, 0), std::vector<std::size_t>{1});
  EXPECT_EQ(module_cohomology_dims(y1, -1), std::vector<std::size_t>{0});

  // cone of the zero map: H^i = H^{i+1} + H^i
  auto c = module_cone(zero_module_map<RationalField>(1, 0), y, y).cone;
  EXPECT_TRUE(validate_module(c).ok);
  EXPECT_EQ(h_dims(c, 0, -3, 1), (std::vector<std::size_t>{0, 1, 2, 1, 0}));
}

TEST(Module, SimpleModules) {
  for (auto name : {"F1", "F2", "F4", "F2p"}) {
    auto q = fixture(qq(), name);
    auto s = simple_module(q, 0, 0);
    EXPECT_TRUE(validate_module(s).ok) << name;
    EXPECT_EQ(h_dims(s, 0, -1, 1), (std::vector<std::size_t>{0, 1, 0}));
  }
}

TEST(Module, FpPresentations) {
  const auto& k = qq();
  // representable: one generator, no relations
  for (auto name : {"F1", "F2", "F4"}) {
    auto q = fixture(k, name);
    auto h0 = std::make_shared<const H0Category<RationalField>>(h0_category(*q));
    auto p = fp_presentation(representable_h0(h0, 0));
    ASSERT_TRUE(p) << name;
    EXPECT_EQ(p->generators, std::vector<std::size_t>{0});
    EXPECT_TRUE(p->relations.empty());
  }
  // k over F2
  {
    auto q = fixture(k, "F2");
    auto h0 = std::make_shared<const H0Category<RationalField>>(h0_category(*q));
    auto m = module_cohomology(simple_module(q, 0), 0, h0).module;
    auto p = fp_presentation(m);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->generators.size(), 1u);
    EXPECT_TRUE(p->relations.empty());
  }
  // k + k over F1
  {
    auto q = fixture(k, "F1");
    auto h0 = std::make_shared<const H0Category<RationalField>>(h0_category(*q));
    auto r = representable_h0(h0, 0);
    auto p = fp_presentation(direct_sum_h0(h0, {r, r}));
    ASSERT_TRUE(p);
    EXPECT_EQ(p->generators, (std::vector<std::size_t>{0, 0}));
    EXPECT_TRUE(p->relations.empty());
  }
}

// Over the two-object category a quotient of a representable needs relations.
TEST(Module, FpPresentationWithRelations) {
  const auto& k = qq();
  DgCategory<RationalField> q(k);
  q.add_object("A");
  q.add_object("B");
  q.finalize_objects();
  // A -> B one arrow f; hom(B, A) = 0 (path algebra of A -> B)
  q.set_basis(0, 0, {{"idA", 0}});
  q.set_basis(1, 1, {{"idB", 0}});
  q.set_basis(0, 1, {{"f", 0}});
  auto one = ints(k, {1});
  q.set_comp(0, 0, 0, 0, 0, one);
  q.set_comp(1, 1, 1, 0, 0, one);
  q.set_comp(0, 1, 1, 0, 0, one);
  q.set_comp(0, 0, 1, 0, 0, one);
  q.set_identity(0, one);
  q.set_identity(1, one);
  ASSERT_TRUE(validate_dg_category(q).ok);
  auto qp = share(q);
  EXPECT_TRUE(check_hlc(qp).ok());
  auto h0 = std::make_shared<const H0Category<RationalField>>(h0_category(q));
  // simple at B = rep(B) / image of rep(A)
  auto s = module_cohomology(simple_module(qp, 1), 0, h0).module;
  auto p = fp_presentation(s);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->generators, std::vector<std::size_t>{1});
  EXPECT_EQ(p->relations, std::vector<std::size_t>{0});
}

TEST(Module, Hlc) {
  for (auto name : {"F1", "F2", "F4", "F2p"}) {
    auto r = check_hlc(fixture(qq(), name));
    EXPECT_TRUE(r.ok()) << name << ": " << r.witness;
  }
  auto r = check_hlc(fixture(qq(), "F4-broken"));
  EXPECT_FALSE(r.nonpositive);
  EXPECT_EQ(r.witness_degree, 1);
}

TEST(Module, RestrictAlong) {
  const auto& k = qq();
  auto f1 = fixture(k, "F1");
  auto f2 = fixture(k, "F2");
  auto y2 = yoneda(f2, 0);
  EXPECT_TRUE(restrict_along(identity_functor(f2), y2) == y2);
  auto r = restrict_along(functor_f2_to_f1(f2, f1), yoneda(f1, 0));
  EXPECT_TRUE(validate_module(r).ok);
  EXPECT_TRUE(r == simple_module(f2, 0));
  // acyclic stays acyclic
  auto ac = module_cone(identity_module_map(y2), y2, y2).cone;
  auto ra = restrict_along(identity_functor(f2), ac);
  for (int i = -3; i <= 1; ++i) EXPECT_EQ(module_cohomology_dims(ra, i), std::vector<std::size_t>{0});
}

TEST(Module, HomComplexExamples) {
  const auto& k = qq();
  auto f1 = fixture(k, "F1");
  auto y = yoneda(f1, 0);
  auto h = module_hom_complex(y, y);
  EXPECT_EQ(h.complex.dim(0), 1u);
  EXPECT_EQ(h.complex.dim(1), 0u);
  EXPECT_EQ(h.complex.dim(-1), 0u);
  // acyclic source: no maps up to homotopy
  auto ac = module_cone(identity_module_map(y), y, y).cone;
  auto ha = module_hom_complex(ac, y);
  EXPECT_TRUE(validate_complex(k, ha.complex).ok);
  EXPECT_EQ(cohomology(k, ha.complex, 0).dim(), 0u);
}

// dg Yoneda: Hom(yoneda(A), M) = M(A) degreewise, with matching cohomology.
template <class F>
void check_dg_yoneda(const F& k, const std::string& name, std::uint64_t seed) {
  auto q = fixture(k, name);
  Rng rng(seed);
  std::vector<DgModule<F>> samples{yoneda(q, 0), simple_module(q, 0, -1)};
  for (int t = 0; t < 3; ++t) samples.push_back(totalize(random_twisted(q, rng, {-2, 0, 2})));
  auto y = yoneda(q, 0);
  for (auto& m : samples) {
    ASSERT_TRUE(validate_module(m).ok);
    auto h = module_hom_complex(y, m);
    EXPECT_TRUE(validate_complex(k, h.complex).ok);
    for (int p = m.lo(); p <= m.hi(); ++p) {
      EXPECT_EQ(h.complex.dim(p), m.values[0].dim(p)) << name << " degree " << p;
      EXPECT_EQ(cohomology(k, h.complex, p).dim(), cohomology(k, m.values[0], p).dim()) << name << " degree " << p;
    }
  }
}

TEST(Module, DgYoneda) {
  check_dg_yoneda(qq(), "F1", 1);
  check_dg_yoneda(qq(), "F2", 2);
  check_dg_yoneda(f101(), "F4", 3);
  check_dg_yoneda(f101(), "F2p", 4);
}

TEST(Module, HomComplexMapsAreNatural) {
  const auto& k = f101();
  auto q = fixture(k, "F4");
  Rng rng(5);
  auto m = totalize(random_twisted(q, rng, {-2, 0, 2}));
  auto n = totalize(random_twisted(q, rng, {-1, 0, 2}));
  auto h = module_hom_complex(m, n);
  for (auto& [p, basis] : h.basis)
    for (std::size_t i = 0; i < basis.size(); ++i) {
      auto phi = h.decode(k, p, unit_vector(k, basis.size(), i), m, n);
      EXPECT_TRUE(validate_module_map(phi, m, n).ok);
    }
}
