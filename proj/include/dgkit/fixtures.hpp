#pragma once

// Built-in presentations: F1 (point), F2 (exterior algebra, |eps| = -1),
// F4 (acyclic positive part, dw = u), F2p (F2 plus an acyclic summand),
// F4-broken (dw = 0), and single-mutation corruptions.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dg_category.hpp"

namespace dgkit {

namespace detail {

template <class F>
Vec<F> elem(const F& k, std::size_t n, std::initializer_list<std::pair<std::size_t, long long>> terms) {
  Vec<F> v(n);
  for (auto [i, c] : terms) v[i] = k.add(v[i], k.from_int(c));
  return v;
}

// One object "*" with endomorphism basis `basis`; products listed as (g, f, g*f terms); the
// first basis element is the unit and its products are filled in.
template <class F>
DgCategory<F> one_object(const F& k, std::vector<BasisElem> basis, const std::vector<std::pair<std::size_t, std::size_t>>& d,
                         const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>& products) {
  DgCategory<F> q(k);
  q.add_object("*");
  q.finalize_objects();
  const std::size_t n = basis.size();
  q.set_basis(0, 0, std::move(basis));
  for (auto [src, tgt] : d) q.set_d(0, 0, src, elem(k, n, {{tgt, 1}}));
  for (std::size_t i = 0; i < n; ++i) {
    q.set_comp(0, 0, 0, 0, i, elem(k, n, {{i, 1}}));
    q.set_comp(0, 0, 0, i, 0, elem(k, n, {{i, 1}}));
  }
  for (auto [g, f, gf] : products) q.set_comp(0, 0, 0, g, f, elem(k, n, {{gf, 1}}));
  q.set_identity(0, elem(k, n, {{0, 1}}));
  return q;
}

}  // namespace detail

template <class F>
DgCategory<F> fixture_f1(const F& k) {
  return detail::one_object(k, {{"id", 0}}, {}, {});
}

template <class F>
DgCategory<F> fixture_f2(const F& k) {
  return detail::one_object(k, {{"id", 0}, {"eps", -1}}, {}, {});
}

template <class F>
DgCategory<F> fixture_f4(const F& k) {
  return detail::one_object(k, {{"id", 0}, {"w", 0}, {"u", 1}}, {{1, 2}}, {});
}

template <class F>
DgCategory<F> fixture_f4_broken(const F& k) {
  return detail::one_object(k, {{"id", 0}, {"w", 0}, {"u", 1}}, {}, {});
}

// F2 with the contractible pair a -> b (|a| = -2, da = b); all products of non-units vanish.
template <class F>
DgCategory<F> fixture_f2p(const F& k) {
  return detail::one_object(k, {{"id", 0}, {"eps", -1}, {"a", -2}, {"b", -1}}, {{2, 3}}, {});
}

template <class F>
CategoryPtr<F> share(DgCategory<F> q) {
  return std::make_shared<const DgCategory<F>>(std::move(q));
}

template <class F>
std::vector<std::pair<std::string, DgCategory<F>>> named_fixtures(const F& k) {
  return {{"F1", fixture_f1(k)}, {"F2", fixture_f2(k)}, {"F4", fixture_f4(k)}};
}

template <class F>
DgCategory<F> fixture_by_name(const F& k, const std::string& name) {
  if (name == "F1") return fixture_f1(k);
  if (name == "F2") return fixture_f2(k);
  if (name == "F4") return fixture_f4(k);
  if (name == "F2p") return fixture_f2p(k);
  if (name == "F4-broken") return fixture_f4_broken(k);
  throw Error("unknown fixture '" + name + "'");
}

// F2 -> F1 killing eps
template <class F>
DgFunctor<F> functor_f2_to_f1(const CategoryPtr<F>& f2, const CategoryPtr<F>& f1) {
  const auto& k = f2->field;
  DgFunctor<F> fn{f2, f1, {0}, {}};
  fn.on_homs.push_back(Matrix<F>::from_dense(k, {detail::elem(k, 2, {{0, 1}})}, 2));
  return fn;
}

// F2 -> F2p, the inclusion (a quasi-equivalence)
template <class F>
DgFunctor<F> functor_f2_to_f2p(const CategoryPtr<F>& f2, const CategoryPtr<F>& f2p) {
  const auto& k = f2->field;
  Matrix<F> m(4, 2);
  m.set(k, 0, 0, k.one());
  m.set(k, 1, 1, k.one());
  return DgFunctor<F>{f2, f2p, {0}, {m}};
}

// ---------------------------------------------------------------------------
// Mutations: each breaks exactly one datum of a valid fixture.

template <class F>
struct Mutation {
  std::string name, base, axiom;  // axiom: first axiom validate_dg_category must report
  DgCategory<F> category;
};

template <class F>
std::vector<Mutation<F>> mutations(const F& k) {
  using detail::elem;
  std::vector<Mutation<F>> out;
  auto add = [&](std::string name, std::string base, std::string axiom, DgCategory<F> q) { out.push_back({std::move(name), std::move(base), std::move(axiom), std::move(q)}); };
  {
    auto q = fixture_f2(k);
    q.set_comp(0, 0, 0, 1, 1, elem(k, 2, {{0, 1}}));
    add("F2-eps-squared-unit", "F2", "degree", q);
  }
  {
    auto q = fixture_f2(k);
    q.set_comp(0, 0, 0, 0, 1, elem(k, 2, {{1, 2}}));
    add("F2-left-unit-scaled", "F2", "unit", q);
  }
  {
    auto q = fixture_f2(k);
    q.set_identity(0, elem(k, 2, {{1, 1}}));
    add("F2-identity-is-eps", "F2", "identity", q);
  }
  {
    auto q = fixture_f4(k);
    q.set_d(0, 0, 2, elem(k, 3, {{1, 1}}));
    add("F4-du-is-w", "F4", "degree", q);
  }
  {
    auto q = fixture_f4(k);
    q.set_d(0, 0, 0, elem(k, 3, {{2, 1}}));
    add("F4-identity-not-closed", "F4", "identity", q);
  }
  {
    auto q = fixture_f4(k);
    q.set_comp(0, 0, 0, 1, 1, elem(k, 3, {{1, 1}}));
    add("F4-w-idempotent", "F4", "leibniz", q);
  }
  {
    auto q = fixture_f4(k);
    q.set_comp(0, 0, 0, 2, 1, elem(k, 3, {{2, 1}}));
    add("F4-uw-is-u", "F4", "associativity", q);
  }
  {
    auto q = fixture_f2p(k);
    q.set_d(0, 0, 3, elem(k, 4, {{0, 1}}));
    add("F2p-db-is-unit", "F2p", "complex", q);
  }
  {
    auto q = fixture_f2p(k);
    q.set_comp(0, 0, 0, 1, 3, elem(k, 4, {{2, 1}}));
    add("F2p-eps-b-is-a", "F2p", "leibniz", q);
  }
  {
    auto q = fixture_f1(k);
    q.set_identity(0, elem(k, 1, {{0, 2}}));
    add("F1-identity-doubled", "F1", "unit", q);
  }
  return out;
}

}  // namespace dgkit
