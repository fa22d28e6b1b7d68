#pragma once

// Generators for the randomized suites. Twisted complexes are grown as iterated
// cones X_{n-1} = cone(beta_n : Q_{n-1}[-n] -> X_n) with beta_n a random closed
// element of the one-sided hom complex, so every sample is a valid one-sided
// twisted complex with (typically) nonzero q.

#include <optional>
#include <vector>

#include "tstructure.hpp"
#include "twisted.hpp"

namespace dgkit {

template <class F>
Vec<F> random_vector(const F& k, Rng& rng, std::size_t n) {
  Vec<F> v(n);
  for (auto& x : v) x = k.random(rng);
  return v;
}

// Random combination of the given basis (all coefficients random).
template <class F>
Vec<F> random_combination(const F& k, Rng& rng, const std::vector<Vec<F>>& basis, std::size_t dim) {
  Vec<F> v(dim);
  for (auto& b : basis) v = vec_add(k, v, vec_scale(k, k.random(rng), b));
  return v;
}

inline Objects random_objects(Rng& rng, std::size_t n_objects, std::size_t min_mult, std::size_t max_mult) {
  Objects out;
  auto m = min_mult + rng.below(max_mult - min_mult + 1);
  for (std::size_t i = 0; i < m; ++i) out.push_back(rng.below(n_objects));
  return out;
}

// Random closed element of degree p of the given twisted hom complex.
template <class F>
TwMorphism<F> random_closed(const TwHomComplex<F>& h, Rng& rng, int p) {
  const auto& k = h.x.base->field;
  auto n = h.dim(p);
  auto z = kernel_basis(k, h.complex.diff(p));
  return h.decode(p, random_combination(k, rng, z, n));
}

struct TwShape {
  int lo = -2, hi = 0;
  std::size_t max_mult = 2;
};

template <class F>
TwistedComplex<F> random_twisted(const CategoryPtr<F>& q, Rng& rng, TwShape shape) {
  auto x = single_entry(q, shape.hi, random_objects(rng, q->N(), 1, shape.max_mult));
  for (int n = shape.hi; n > shape.lo; --n) {
    auto src = single_entry(q, n, random_objects(rng, q->N(), 0, shape.max_mult));
    auto beta = random_closed(tw_hom_complex(src, x), rng, 0);
    auto c = tw_cone(beta, src, x).cone;
    x = std::move(c);
  }
  x.lo = shape.lo;
  x.hi = shape.hi;
  return x;
}

// Random closed one-sided morphism of degree p.
template <class F>
TwMorphism<F> random_closed_morphism(const TwistedComplex<F>& x, const TwistedComplex<F>& y, Rng& rng, int p = 0) {
  return random_closed(tw_hom_complex(x, y), rng, p);
}

// Random closed morphism with at least one component violating one-sidedness;
// nullopt when the closed morphisms of degree p are all one-sided.
template <class F>
std::optional<TwMorphism<F>> random_closed_non_one_sided(const TwistedComplex<F>& x, const TwistedComplex<F>& y, Rng& rng, int p = 0, int attempts = 8) {
  auto h = tw_hom_complex(x, y, true);
  for (int a = 0; a < attempts; ++a) {
    auto f = random_closed(h, rng, p);
    if (!is_one_sided(f)) return f;
  }
  return std::nullopt;
}

// Random hfp module: Tot of a random twisted complex, plus (half the time) a shifted
// simple module at a random object.
template <class F>
DgModule<F> random_hfp_module(const CategoryPtr<F>& q, Rng& rng, TwShape shape) {
  auto m = totalize(random_twisted(q, rng, shape));
  if (rng.below(2)) {
    auto s = simple_module(q, rng.below(q->N()), rng.range(shape.lo, shape.hi));
    m = direct_sum_modules<F>({&m, &s}, q);
  }
  return m;
}

// Modules with cohomology concentrated in degree 0: sums of simple modules and of
// representables already in the heart, plus an acyclic summand cone(1) half the time.
template <class F>
DgModule<F> random_heart_module(const CategoryPtr<F>& q, Rng& rng, std::size_t max_terms = 3) {
  std::vector<DgModule<F>> atoms;
  for (std::size_t a = 0; a < q->N(); ++a) {
    atoms.push_back(simple_module(q, a));
    auto y = yoneda(q, a);
    if (concentrated_in(y, 0)) atoms.push_back(std::move(y));
  }
  std::vector<DgModule<F>> parts;
  auto n = 1 + rng.below(max_terms);
  for (std::size_t i = 0; i < n; ++i) parts.push_back(atoms[rng.below(atoms.size())]);
  if (rng.below(2)) {
    auto t = totalize(random_twisted(q, rng, TwShape{-1, 0, 1}));
    parts.push_back(module_cone(identity_module_map(t), t, t).cone);
  }
  std::vector<const DgModule<F>*> ptrs;
  for (auto& p : parts) ptrs.push_back(&p);
  return direct_sum_modules(ptrs, q);
}

// Degreewise split sequence A -> B -> C with B = A + C and d_B = [[d_A, h], [0, d_C]]
// for a random closed degree 1 map h : C -> A; sigma, rho are the graded splittings.
template <class F>
struct SplitSample {
  DgModule<F> a, b, c;
  ModuleMap<F> f, g, sigma, rho, h;
};

template <class F>
SplitSample<F> random_split_sample(const CategoryPtr<F>& q, Rng& rng, TwShape shape) {
  const auto& k = q->field;
  auto x = random_twisted(q, rng, shape);
  auto y = random_twisted(q, rng, shape);
  SplitSample<F> s;
  s.a = totalize(x);
  s.c = totalize(y);
  auto hom = tw_hom_complex(y, x, true);
  s.h = totalize_map(random_closed(hom, rng, 1), y, x);
  s.b = direct_sum_modules<F>({&s.a, &s.c}, q);
  s.f = ModuleMap<F>{};
  s.g = s.sigma = s.rho = s.f;
  for (std::size_t o = 0; o < q->N(); ++o) {
    auto& va = s.a.values[o];
    auto& vc = s.c.values[o];
    auto& vb = s.b.values[o];
    GradedMap<F> fo, go, so, ro;
    for (auto& [n, dim] : vb.dims) {
      std::size_t da = va.dim(n), dc = vc.dim(n);
      Matrix<F> fi(dim, da), gi(dc, dim), si(dim, dc), ri(da, dim);
      for (std::size_t r = 0; r < da; ++r) {
        fi.set(k, r, r, k.one());
        ri.set(k, r, r, k.one());
      }
      for (std::size_t r = 0; r < dc; ++r) {
        gi.set(k, r, da + r, k.one());
        si.set(k, da + r, r, k.one());
      }
      if (da) {
        fo.set(n, fi);
        ro.set(n, ri);
      }
      if (dc) {
        go.set(n, gi);
        so.set(n, si);
      }
      // extra differential component C^n -> A^{n+1}
      auto hn = component(s.h.comp[o], vc, va, n);
      if (dc && va.dim(n + 1)) {
        auto d = vb.diff(n);
        add_block(k, d, 0, da, hn);
        vb.set_diff(n, std::move(d));
      }
    }
    s.f.comp.push_back(fo);
    s.g.comp.push_back(go);
    s.sigma.comp.push_back(so);
    s.rho.comp.push_back(ro);
  }
  return s;
}

}  // namespace dgkit
