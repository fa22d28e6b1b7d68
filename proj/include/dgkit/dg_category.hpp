#pragma once

// Finitely presented dg-categories: explicit graded bases for every hom
// complex, structure constants for composition, identities.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "graded_complex.hpp"

namespace dgkit {

struct BasisElem {
  std::string name;
  int degree = 0;
  bool operator==(const BasisElem&) const = default;
};

template <class F>
struct HomSpace {
  std::vector<BasisElem> basis;
  Matrix<F> d;  // column i = d(basis i)

  std::size_t size() const { return basis.size(); }
  bool operator==(const HomSpace&) const = default;
};

template <class F>
class DgCategory {
 public:
  using T = typename F::value_type;
  using Elem = Vec<F>;  // coordinates in the basis of some hom space

  F field;
  std::vector<std::string> objects;

  explicit DgCategory(F k) : field(std::move(k)) {}

  // --- construction -------------------------------------------------------
  void add_object(const std::string& name) {
    if (obj_index_.count(name)) throw Error("duplicate object '" + name + "'");
    obj_index_[name] = objects.size();
    objects.push_back(name);
  }
  // Must be called once all objects exist; allocates empty homs.
  void finalize_objects() {
    const std::size_t n = objects.size();
    homs_.assign(n * n, HomSpace<F>{});
    for (auto& h : homs_) h.d = Matrix<F>(0, 0);
    comp_.assign(n * n * n, {});
    ids_.assign(n, Elem{});
  }
  void set_basis(std::size_t a, std::size_t b, std::vector<BasisElem> basis) {
    auto& h = homs_[a * N() + b];
    for (auto& e : basis) {
      if (name_index_.count(e.name)) throw Error("duplicate hom basis name '" + e.name + "'");
      name_index_[e.name] = {a, b, static_cast<std::size_t>(&e - &basis[0])};
    }
    h.basis = std::move(basis);
    h.d = Matrix<F>(h.size(), h.size());
  }
  void set_d(std::size_t a, std::size_t b, std::size_t i, const Elem& v) {
    auto& h = homs_[a * N() + b];
    for (std::size_t r = 0; r < h.size(); ++r) h.d.set(field, r, i, v[r]);
  }
  void set_comp(std::size_t a, std::size_t b, std::size_t c, std::size_t gi, std::size_t fi, Elem v) {
    auto& table = comp_[(a * N() + b) * N() + c];
    if (table.empty()) table.assign(hom(b, c).size(), std::vector<Elem>(hom(a, b).size(), Elem(hom(a, c).size())));
    table[gi][fi] = std::move(v);
  }
  void set_identity(std::size_t a, Elem v) { ids_[a] = std::move(v); }

  // --- access -------------------------------------------------------------
  std::size_t N() const { return objects.size(); }
  std::size_t obj(const std::string& name) const {
    auto it = obj_index_.find(name);
    if (it == obj_index_.end()) throw Error("unknown object '" + name + "'");
    return it->second;
  }
  bool has_object(const std::string& name) const { return obj_index_.count(name) > 0; }
  const HomSpace<F>& hom(std::size_t a, std::size_t b) const { return homs_[a * N() + b]; }
  const Elem& identity(std::size_t a) const { return ids_[a]; }
  std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> lookup(const std::string& name) const {
    auto it = name_index_.find(name);
    if (it == name_index_.end()) return std::nullopt;
    return it->second;
  }
  // Structure constants g*f for basis indices, or nullptr when no constant was declared (product zero).
  const Elem* comp_entry(std::size_t a, std::size_t b, std::size_t c, std::size_t gi, std::size_t fi) const {
    auto& table = comp_[(a * N() + b) * N() + c];
    if (table.empty()) return nullptr;
    return &table[gi][fi];
  }

  Elem zero(std::size_t a, std::size_t b) const { return Elem(hom(a, b).size()); }
  Elem basis_vec(std::size_t a, std::size_t b, std::size_t i) const { return unit_vector(field, hom(a, b).size(), i); }

  // g o f for f in hom(a,b), g in hom(b,c)
  Elem compose(std::size_t a, std::size_t b, std::size_t c, const Elem& g, const Elem& f) const {
    Elem out(hom(a, c).size());
    auto& table = comp_[(a * N() + b) * N() + c];
    if (table.empty()) return out;
    for (std::size_t gi = 0; gi < g.size(); ++gi) {
      if (field.is_zero(g[gi])) continue;
      for (std::size_t fi = 0; fi < f.size(); ++fi) {
        if (field.is_zero(f[fi])) continue;
        auto coef = field.mul(g[gi], f[fi]);
        const auto& e = table[gi][fi];
        for (std::size_t t = 0; t < e.size(); ++t)
          if (!field.is_zero(e[t])) out[t] = field.add(out[t], field.mul(coef, e[t]));
      }
    }
    return out;
  }

  Elem diff(std::size_t a, std::size_t b, const Elem& x) const { return apply(field, hom(a, b).d, x); }

  // Degree of a nonzero homogeneous element; nullopt for zero; throws if inhomogeneous.
  std::optional<int> degree_of(std::size_t a, std::size_t b, const Elem& x) const {
    std::optional<int> deg;
    auto& h = hom(a, b);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (field.is_zero(x[i])) continue;
      if (deg && *deg != h.basis[i].degree) throw Error("inhomogeneous hom element");
      deg = h.basis[i].degree;
    }
    return deg;
  }

  // --- hom complexes ------------------------------------------------------
  // Basis indices of hom(a,b) in degree p, in declaration order.
  std::vector<std::size_t> in_degree(std::size_t a, std::size_t b, int p) const {
    std::vector<std::size_t> out;
    auto& h = hom(a, b);
    for (std::size_t i = 0; i < h.size(); ++i)
      if (h.basis[i].degree == p) out.push_back(i);
    return out;
  }
  std::vector<int> degrees(std::size_t a, std::size_t b) const {
    std::map<int, bool> ds;
    for (auto& e : hom(a, b).basis) ds[e.degree] = true;
    std::vector<int> out;
    for (auto& [p, _] : ds) out.push_back(p);
    return out;
  }

  Complex<F> hom_complex(std::size_t a, std::size_t b) const {
    Complex<F> c;
    auto& h = hom(a, b);
    for (auto& e : h.basis) c.dims[e.degree] += 1;
    for (auto& [p, dim] : c.dims) {
      auto src = in_degree(a, b, p), tgt = in_degree(a, b, p + 1);
      if (tgt.empty()) continue;
      Matrix<F> m(tgt.size(), src.size());
      for (std::size_t r = 0; r < tgt.size(); ++r)
        for (std::size_t s = 0; s < src.size(); ++s) m.set(field, r, s, h.d.get(tgt[r], src[s]));
      c.set_diff(p, std::move(m));
    }
    return c;
  }
  // Full-basis element <-> degree-p coordinates of hom_complex(a,b).
  Vec<F> to_degree(std::size_t a, std::size_t b, int p, const Elem& x) const {
    auto idx = in_degree(a, b, p);
    Vec<F> v(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) v[i] = x[idx[i]];
    return v;
  }
  Elem from_degree(std::size_t a, std::size_t b, int p, const Vec<F>& v) const {
    auto idx = in_degree(a, b, p);
    Elem x(hom(a, b).size());
    for (std::size_t i = 0; i < idx.size(); ++i) x[idx[i]] = v[i];
    return x;
  }

  bool operator==(const DgCategory& o) const {
    return field.spec() == o.field.spec() && objects == o.objects && homs_ == o.homs_ && ids_ == o.ids_ && normalized_comp() == o.normalized_comp();
  }

 private:
  // Empty tables and all-zero tables describe the same composition.
  std::vector<std::vector<std::vector<Elem>>> normalized_comp() const {
    auto out = comp_;
    for (auto& t : out) {
      bool all_zero = true;
      for (auto& row : t)
        for (auto& e : row)
          if (!vec_is_zero(field, e)) all_zero = false;
      if (all_zero) t.clear();
    }
    return out;
  }

  std::map<std::string, std::size_t> obj_index_;
  std::map<std::string, std::tuple<std::size_t, std::size_t, std::size_t>> name_index_;
  std::vector<HomSpace<F>> homs_;
  std::vector<std::vector<std::vector<Elem>>> comp_;  // [(a,b,c)][g][f]
  std::vector<Elem> ids_;
};

template <class F>
using CategoryPtr = std::shared_ptr<const DgCategory<F>>;

// ---------------------------------------------------------------------------
// Axioms

struct AxiomReport {
  bool ok = true;
  std::string axiom;  // "complex", "degree", "identity", "unit", "associativity", "leibniz"
  std::string witness;
  explicit operator bool() const { return ok; }
};

template <class F>
std::string elem_string(const DgCategory<F>& q, std::size_t a, std::size_t b, const Vec<F>& x) {
  std::string s;
  auto& h = q.hom(a, b);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (q.field.is_zero(x[i])) continue;
    if (!s.empty()) s += " + ";
    s += q.field.to_string(x[i]) + "*" + h.basis[i].name;
  }
  return s.empty() ? "0" : s;
}

template <class F>
AxiomReport validate_dg_category(const DgCategory<F>& q) {
  const auto& k = q.field;
  const std::size_t N = q.N();
  auto fail = [](std::string axiom, std::string w) { return AxiomReport{false, std::move(axiom), std::move(w)}; };
  auto name = [&](std::size_t a, std::size_t b, std::size_t i) { return q.hom(a, b).basis[i].name; };

  // homs are complexes: d raises degree by one and squares to zero
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      auto& h = q.hom(a, b);
      for (std::size_t i = 0; i < h.size(); ++i) {
        auto dx = q.diff(a, b, q.basis_vec(a, b, i));
        for (std::size_t t = 0; t < dx.size(); ++t)
          if (!k.is_zero(dx[t]) && h.basis[t].degree != h.basis[i].degree + 1)
            return fail("degree", "d(" + name(a, b, i) + ") has a component " + h.basis[t].name + " of wrong degree");
      }
    }
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      auto& h = q.hom(a, b);
      for (std::size_t i = 0; i < h.size(); ++i) {
        auto ddx = q.diff(a, b, q.diff(a, b, q.basis_vec(a, b, i)));
        if (!vec_is_zero(k, ddx)) return fail("complex", "d(d(" + name(a, b, i) + ")) = " + elem_string(q, a, b, ddx));
      }
    }

  // composition is degree additive
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t c = 0; c < N; ++c)
        for (std::size_t gi = 0; gi < q.hom(b, c).size(); ++gi)
          for (std::size_t fi = 0; fi < q.hom(a, b).size(); ++fi) {
            auto* e = q.comp_entry(a, b, c, gi, fi);
            if (!e) continue;
            int deg = q.hom(b, c).basis[gi].degree + q.hom(a, b).basis[fi].degree;
            for (std::size_t t = 0; t < e->size(); ++t)
              if (!k.is_zero((*e)[t]) && q.hom(a, c).basis[t].degree != deg)
                return fail("degree", name(b, c, gi) + "*" + name(a, b, fi) + " has a component " + q.hom(a, c).basis[t].name + " of wrong degree");
          }

  // identities are closed of degree 0 and act as units
  for (std::size_t a = 0; a < N; ++a) {
    auto& id = q.identity(a);
    if (id.size() != q.hom(a, a).size()) return fail("identity", "identity of " + q.objects[a] + " is missing");
    auto deg = q.degree_of(a, a, id);
    if (!deg || *deg != 0) return fail("identity", "identity of " + q.objects[a] + " is not a nonzero degree 0 element");
    if (!vec_is_zero(k, q.diff(a, a, id))) return fail("identity", "identity of " + q.objects[a] + " is not closed");
  }
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t i = 0; i < q.hom(a, b).size(); ++i) {
        auto f = q.basis_vec(a, b, i);
        auto left = q.compose(a, b, b, q.identity(b), f);
        if (left != f) return fail("unit", "id_" + q.objects[b] + "*" + name(a, b, i) + " = " + elem_string(q, a, b, left));
        auto right = q.compose(a, a, b, f, q.identity(a));
        if (right != f) return fail("unit", name(a, b, i) + "*id_" + q.objects[a] + " = " + elem_string(q, a, b, right));
      }

  // associativity on basis triples
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t c = 0; c < N; ++c)
        for (std::size_t e = 0; e < N; ++e)
          for (std::size_t fi = 0; fi < q.hom(a, b).size(); ++fi)
            for (std::size_t gi = 0; gi < q.hom(b, c).size(); ++gi) {
              auto f = q.basis_vec(a, b, fi), g = q.basis_vec(b, c, gi);
              auto gf = q.compose(a, b, c, g, f);
              for (std::size_t hi = 0; hi < q.hom(c, e).size(); ++hi) {
                auto h = q.basis_vec(c, e, hi);
                auto l = q.compose(a, c, e, h, gf);
                auto r = q.compose(a, b, e, q.compose(b, c, e, h, g), f);
                if (l != r)
                  return fail("associativity", "(" + name(c, e, hi) + "*" + name(b, c, gi) + ")*" + name(a, b, fi) + " = " + elem_string(q, a, e, r) +
                                                   " but " + name(c, e, hi) + "*(" + name(b, c, gi) + "*" + name(a, b, fi) + ") = " + elem_string(q, a, e, l));
              }
            }

  // Leibniz: d(g f) = d(g) f + (-1)^|g| g d(f)
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t c = 0; c < N; ++c)
        for (std::size_t fi = 0; fi < q.hom(a, b).size(); ++fi)
          for (std::size_t gi = 0; gi < q.hom(b, c).size(); ++gi) {
            auto f = q.basis_vec(a, b, fi), g = q.basis_vec(b, c, gi);
            auto l = q.diff(a, c, q.compose(a, b, c, g, f));
            auto r1 = q.compose(a, b, c, q.diff(b, c, g), f);
            auto r2 = q.compose(a, b, c, g, q.diff(a, b, f));
            auto r = parity_sign(q.hom(b, c).basis[gi].degree) > 0 ? vec_add(k, r1, r2) : vec_sub(k, r1, r2);
            if (l != r)
              return fail("leibniz", "d(" + name(b, c, gi) + "*" + name(a, b, fi) + ") = " + elem_string(q, a, c, l) + " but the Leibniz rule gives " + elem_string(q, a, c, r));
          }
  return {};
}

// ---------------------------------------------------------------------------
// Positive cohomology

struct CohomologyWitness {
  std::size_t a = 0, b = 0;
  int degree = 0;
  std::size_t dim = 0;
};

template <class F>
std::optional<CohomologyWitness> check_nonpositive_cohomology(const DgCategory<F>& q) {
  for (std::size_t a = 0; a < q.N(); ++a)
    for (std::size_t b = 0; b < q.N(); ++b) {
      auto c = q.hom_complex(a, b);
      for (auto& [p, dim] : c.dims) {
        if (p <= 0) continue;
        auto h = cohomology(q.field, c, p);
        if (h.dim()) return CohomologyWitness{a, b, p, h.dim()};
      }
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// H^0 category

template <class F>
struct H0Category {
  F field;
  std::vector<std::string> objects;
  std::vector<Cohomology<F>> homs;                              // [a*N+b], degree-0 coordinates
  std::vector<std::vector<std::vector<Vec<F>>>> comp;          // [(a,b,c)][g][f] in H0 basis of (a,c)
  std::vector<Vec<F>> ids;

  explicit H0Category(F k) : field(std::move(k)) {}
  std::size_t N() const { return objects.size(); }
  const Cohomology<F>& hom(std::size_t a, std::size_t b) const { return homs[a * N() + b]; }
  std::size_t dim(std::size_t a, std::size_t b) const { return hom(a, b).dim(); }

  Vec<F> compose(std::size_t a, std::size_t b, std::size_t c, const Vec<F>& g, const Vec<F>& f) const {
    Vec<F> out(dim(a, c));
    auto& t = comp[(a * N() + b) * N() + c];
    for (std::size_t gi = 0; gi < g.size(); ++gi)
      for (std::size_t fi = 0; fi < f.size(); ++fi) {
        if (field.is_zero(g[gi]) || field.is_zero(f[fi])) continue;
        auto coef = field.mul(g[gi], f[fi]);
        for (std::size_t s = 0; s < out.size(); ++s) out[s] = field.add(out[s], field.mul(coef, t[gi][fi][s]));
      }
    return out;
  }
};

// Class of a degree-0 cocycle (full-basis element of hom(a,b)) in H0 coordinates.
template <class F>
Vec<F> h0_class(const DgCategory<F>& q, const Cohomology<F>& h, std::size_t a, std::size_t b, const Vec<F>& x) {
  auto m = classify(q.field, h, {q.to_degree(a, b, 0, x)});
  return m.column(0);
}

template <class F>
H0Category<F> h0_category(const DgCategory<F>& q) {
  if (auto r = validate_dg_category(q); !r) throw Error("h0_category: invalid category (" + r.axiom + ": " + r.witness + ")");
  const auto& k = q.field;
  H0Category<F> h(k);
  h.objects = q.objects;
  const std::size_t N = q.N();
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) h.homs.push_back(cohomology(k, q.hom_complex(a, b), 0));
  auto rep = [&](std::size_t a, std::size_t b, std::size_t i) { return q.from_degree(a, b, 0, h.hom(a, b).reps[i]); };
  h.comp.resize(N * N * N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t c = 0; c < N; ++c) {
        auto& t = h.comp[(a * N + b) * N + c];
        t.assign(h.dim(b, c), std::vector<Vec<F>>(h.dim(a, b)));
        for (std::size_t gi = 0; gi < h.dim(b, c); ++gi)
          for (std::size_t fi = 0; fi < h.dim(a, b); ++fi)
            t[gi][fi] = h0_class(q, h.hom(a, c), a, c, q.compose(a, b, c, rep(b, c, gi), rep(a, b, fi)));
      }
  for (std::size_t a = 0; a < N; ++a) h.ids.push_back(h0_class(q, h.hom(a, a), a, a, q.identity(a)));
  return h;
}

// Exhaustive unit/associativity check of the induced composition.
template <class F>
Report validate_h0(const H0Category<F>& h) {
  const std::size_t N = h.N();
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t i = 0; i < h.dim(a, b); ++i) {
        auto f = unit_vector(h.field, h.dim(a, b), i);
        if (h.compose(a, b, b, h.ids[b], f) != f || h.compose(a, a, b, f, h.ids[a]) != f) return Report::fail("H0 unit law fails");
        for (std::size_t c = 0; c < N; ++c)
          for (std::size_t j = 0; j < h.dim(b, c); ++j) {
            auto g = unit_vector(h.field, h.dim(b, c), j);
            for (std::size_t e = 0; e < N; ++e)
              for (std::size_t l = 0; l < h.dim(c, e); ++l) {
                auto x = unit_vector(h.field, h.dim(c, e), l);
                if (h.compose(a, c, e, x, h.compose(a, b, c, g, f)) != h.compose(a, b, e, h.compose(b, c, e, x, g), f)) return Report::fail("H0 associativity fails");
              }
          }
      }
  return Report::pass();
}

// ---------------------------------------------------------------------------
// Opposite category: hom_op(a,b) = hom(b,a), g o_op f = (-1)^{|f||g|} f o g

template <class F>
DgCategory<F> opposite(const DgCategory<F>& q) {
  DgCategory<F> o(q.field);
  for (auto& name : q.objects) o.add_object(name);
  o.finalize_objects();
  const std::size_t N = q.N();
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      o.set_basis(a, b, q.hom(b, a).basis);
      for (std::size_t i = 0; i < q.hom(b, a).size(); ++i) o.set_d(a, b, i, q.diff(b, a, q.basis_vec(b, a, i)));
    }
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t c = 0; c < N; ++c) {
        // f in hom_op(a,b) = hom(b,a), g in hom_op(b,c) = hom(c,b); f o g in hom(c,a)
        if (q.hom(b, a).size() == 0 || q.hom(c, b).size() == 0 || !q.comp_entry(c, b, a, 0, 0)) continue;
        for (std::size_t gi = 0; gi < q.hom(c, b).size(); ++gi)
          for (std::size_t fi = 0; fi < q.hom(b, a).size(); ++fi) {
            auto v = *q.comp_entry(c, b, a, fi, gi);
            int s = parity_sign(static_cast<long long>(q.hom(c, b).basis[gi].degree) * q.hom(b, a).basis[fi].degree);
            o.set_comp(a, b, c, gi, fi, s > 0 ? v : vec_sub(q.field, Vec<F>(v.size()), v));
          }
      }
  for (std::size_t a = 0; a < N; ++a) o.set_identity(a, q.identity(a));
  return o;
}

// ---------------------------------------------------------------------------
// Strict dg-functors

template <class F>
struct DgFunctor {
  CategoryPtr<F> source, target;
  std::vector<std::size_t> on_objects;
  std::vector<Matrix<F>> on_homs;  // [a*N+b]: hom_tgt(Fa,Fb) x hom_src(a,b)

  const Matrix<F>& hom_map(std::size_t a, std::size_t b) const { return on_homs[a * source->N() + b]; }
  Vec<F> apply_hom(std::size_t a, std::size_t b, const Vec<F>& x) const { return dgkit::apply(source->field, hom_map(a, b), x); }
};

template <class F>
DgFunctor<F> identity_functor(const CategoryPtr<F>& q) {
  DgFunctor<F> fn{q, q, {}, {}};
  for (std::size_t a = 0; a < q->N(); ++a) fn.on_objects.push_back(a);
  for (std::size_t a = 0; a < q->N(); ++a)
    for (std::size_t b = 0; b < q->N(); ++b) fn.on_homs.push_back(Matrix<F>::identity(q->field, q->hom(a, b).size()));
  return fn;
}

template <class F>
DgFunctor<F> compose_functors(const DgFunctor<F>& g, const DgFunctor<F>& f) {
  DgFunctor<F> out{f.source, g.target, {}, {}};
  const std::size_t N = f.source->N();
  for (std::size_t a = 0; a < N; ++a) out.on_objects.push_back(g.on_objects[f.on_objects[a]]);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      out.on_homs.push_back(multiply(f.source->field, g.hom_map(f.on_objects[a], f.on_objects[b]), f.hom_map(a, b)));
  return out;
}

template <class F>
AxiomReport validate_dg_functor(const DgFunctor<F>& fn) {
  const auto& s = *fn.source;
  const auto& t = *fn.target;
  const auto& k = s.field;
  auto fail = [](std::string axiom, std::string w) { return AxiomReport{false, std::move(axiom), std::move(w)}; };
  const std::size_t N = s.N();
  if (fn.on_objects.size() != N || fn.on_homs.size() != N * N) return fail("shape", "functor data has wrong size");
  for (std::size_t a = 0; a < N; ++a)
    if (fn.on_objects[a] >= t.N()) return fail("shape", "object image out of range");
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      auto& m = fn.hom_map(a, b);
      std::size_t fa = fn.on_objects[a], fb = fn.on_objects[b];
      if (m.rows() != t.hom(fa, fb).size() || m.cols() != s.hom(a, b).size()) return fail("shape", "hom map has wrong shape");
      for (std::size_t i = 0; i < s.hom(a, b).size(); ++i) {
        auto img = fn.apply_hom(a, b, s.basis_vec(a, b, i));
        auto& bname = s.hom(a, b).basis[i].name;
        for (std::size_t r = 0; r < img.size(); ++r)
          if (!k.is_zero(img[r]) && t.hom(fa, fb).basis[r].degree != s.hom(a, b).basis[i].degree)
            return fail("degree", "image of " + bname + " has a component " + t.hom(fa, fb).basis[r].name + " of wrong degree");
        if (t.diff(fa, fb, img) != fn.apply_hom(a, b, s.diff(a, b, s.basis_vec(a, b, i))))
          return fail("differential", "F(d " + bname + ") != d F(" + bname + ")");
      }
    }
  for (std::size_t a = 0; a < N; ++a) {
    std::size_t fa = fn.on_objects[a];
    if (fn.apply_hom(a, a, s.identity(a)) != t.identity(fa)) return fail("identity", "F(id_" + s.objects[a] + ") != id");
  }
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t c = 0; c < N; ++c)
        for (std::size_t fi = 0; fi < s.hom(a, b).size(); ++fi)
          for (std::size_t gi = 0; gi < s.hom(b, c).size(); ++gi) {
            auto f = s.basis_vec(a, b, fi), g = s.basis_vec(b, c, gi);
            auto l = fn.apply_hom(a, c, s.compose(a, b, c, g, f));
            auto r = t.compose(fn.on_objects[a], fn.on_objects[b], fn.on_objects[c], fn.apply_hom(b, c, g), fn.apply_hom(a, b, f));
            if (l != r) return fail("composition", "F(" + s.hom(b, c).basis[gi].name + "*" + s.hom(a, b).basis[fi].name + ") != F(g)F(f)");
          }
  return {};
}

}  // namespace dgkit
