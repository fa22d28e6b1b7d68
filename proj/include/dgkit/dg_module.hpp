#pragma once

// Right dg-modules over a presented dg-category, module maps, Yoneda modules,
// the module hom complex, and modules over H^0.
//
// An element f in hom(a,b) acts by rho(f) : M(b) -> M(a) of degree |f| with
//   d rho(f) - (-1)^|f| rho(f) d = rho(df),   rho(g f) = (-1)^{|f||g|} rho(f) rho(g).

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dg_category.hpp"

namespace dgkit {

template <class F>
struct DgModule {
  CategoryPtr<F> base;
  std::vector<Complex<F>> values;                 // per object
  std::vector<std::vector<GradedMap<F>>> action;  // [a*N+b][i] for basis i of hom(a,b)

  const F& field() const { return base->field; }
  std::size_t N() const { return base->N(); }
  const GradedMap<F>& act(std::size_t a, std::size_t b, std::size_t i) const { return action[a * N() + b][i]; }

  // rho(x) for a homogeneous element x of hom(a,b); degree must be supplied for x = 0
  GradedMap<F> act_elem(std::size_t a, std::size_t b, const Vec<F>& x, int degree) const {
    const auto& k = field();
    GradedMap<F> out;
    out.degree = degree;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (k.is_zero(x[i])) continue;
      out = add_maps(k, out, scale_map(k, x[i], act(a, b, i)), values[b], values[a]);
    }
    return out;
  }

  int lo() const {
    int l = 0;
    bool any = false;
    for (auto& v : values)
      if (!v.empty()) {
        l = any ? std::min(l, v.lo()) : v.lo();
        any = true;
      }
    return l;
  }
  int hi() const {
    int h = -1;
    bool any = false;
    for (auto& v : values)
      if (!v.empty()) {
        h = any ? std::max(h, v.hi()) : v.hi();
        any = true;
      }
    return h;
  }
  bool empty() const {
    for (auto& v : values)
      if (!v.empty()) return false;
    return true;
  }
  bool operator==(const DgModule& o) const { return values == o.values && action == o.action; }
};

template <class F>
DgModule<F> zero_module(const CategoryPtr<F>& q) {
  DgModule<F> m{q, std::vector<Complex<F>>(q->N()), {}};
  m.action.resize(q->N() * q->N());
  for (std::size_t a = 0; a < q->N(); ++a)
    for (std::size_t b = 0; b < q->N(); ++b)
      for (std::size_t i = 0; i < q->hom(a, b).size(); ++i) m.action[a * q->N() + b].push_back(GradedMap<F>{q->hom(a, b).basis[i].degree, {}});
  return m;
}

template <class F>
Report validate_module(const DgModule<F>& m) {
  const auto& q = *m.base;
  const auto& k = q.field;
  const std::size_t N = q.N();
  if (m.values.size() != N || m.action.size() != N * N) return Report::fail("module data has wrong size");
  for (std::size_t a = 0; a < N; ++a)
    if (auto r = validate_complex(k, m.values[a]); !r) return Report::fail("value at " + q.objects[a] + ": " + r.message);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      if (m.action[a * N + b].size() != q.hom(a, b).size()) return Report::fail("missing action maps");
      for (std::size_t i = 0; i < q.hom(a, b).size(); ++i) {
        auto& rho = m.act(a, b, i);
        auto& name = q.hom(a, b).basis[i].name;
        if (rho.degree != q.hom(a, b).basis[i].degree) return Report::fail("action of " + name + " has wrong degree");
        for (auto& [n, mat] : rho.comp)
          if (mat.rows() != m.values[a].dim(n + rho.degree) || mat.cols() != m.values[b].dim(n)) return Report::fail("action of " + name + " has wrong shape");
        auto lhs = differential(k, rho, m.values[b], m.values[a]);
        auto rhs = m.act_elem(a, b, q.diff(a, b, q.basis_vec(a, b, i)), rho.degree + 1);
        if (!(lhs == rhs)) return Report::fail("Leibniz rule fails for " + name);
      }
    }
  for (std::size_t a = 0; a < N; ++a)
    if (!(m.act_elem(a, a, q.identity(a), 0) == identity_map(k, m.values[a]))) return Report::fail("identity of " + q.objects[a] + " does not act as identity");
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t c = 0; c < N; ++c)
        for (std::size_t fi = 0; fi < q.hom(a, b).size(); ++fi)
          for (std::size_t gi = 0; gi < q.hom(b, c).size(); ++gi) {
            int df = q.hom(a, b).basis[fi].degree, dg = q.hom(b, c).basis[gi].degree;
            auto gf = q.compose(a, b, c, q.basis_vec(b, c, gi), q.basis_vec(a, b, fi));
            auto lhs = m.act_elem(a, c, gf, df + dg);
            auto rhs = compose(k, m.act(a, b, fi), m.act(b, c, gi), m.values[c], m.values[b], m.values[a]);
            if (parity_sign(static_cast<long long>(df) * dg) < 0) rhs = scale_map(k, k.from_int(-1), rhs);
            if (!(lhs == rhs)) return Report::fail("action does not respect composition of " + q.hom(b, c).basis[gi].name + " and " + q.hom(a, b).basis[fi].name);
          }
  return Report::pass();
}

// value(b) = hom(b, A), rho(f)(x) = (-1)^{|x||f|} x o f
template <class F>
DgModule<F> yoneda(const CategoryPtr<F>& qp, std::size_t A) {
  const auto& q = *qp;
  const auto& k = q.field;
  auto m = zero_module(qp);
  for (std::size_t b = 0; b < q.N(); ++b) m.values[b] = q.hom_complex(b, A);
  for (std::size_t c = 0; c < q.N(); ++c)
    for (std::size_t b = 0; b < q.N(); ++b)
      for (std::size_t i = 0; i < q.hom(c, b).size(); ++i) {
        int df = q.hom(c, b).basis[i].degree;
        GradedMap<F> rho;
        rho.degree = df;
        auto f = q.basis_vec(c, b, i);
        for (auto& [n, dim] : m.values[b].dims) {
          std::size_t rows = m.values[c].dim(n + df);
          if (!rows) continue;
          Matrix<F> mat(rows, dim);
          for (std::size_t s = 0; s < dim; ++s) {
            auto x = q.from_degree(b, A, n, unit_vector(k, dim, s));
            auto y = q.to_degree(c, A, n + df, q.compose(c, b, A, x, f));
            if (parity_sign(static_cast<long long>(n) * df) < 0) y = vec_sub(k, Vec<F>(y.size()), y);
            for (std::size_t r = 0; r < rows; ++r) mat.set(k, r, s, y[r]);
          }
          rho.set(n, std::move(mat));
        }
        m.action[c * q.N() + b][i] = std::move(rho);
      }
  return m;
}

template <class F>
DgModule<F> shift_module(const DgModule<F>& m, int n) {
  const auto& k = m.field();
  DgModule<F> out = m;
  for (std::size_t a = 0; a < m.N(); ++a) out.values[a] = shift(k, m.values[a], n);
  for (auto& acts : out.action)
    for (auto& rho : acts) {
      GradedMap<F> r;
      r.degree = rho.degree;
      int s = parity_sign(static_cast<long long>(n) * rho.degree);
      for (auto& [i, mat] : rho.comp) r.set(i - n, scale_sign(k, s, mat));
      rho = std::move(r);
    }
  return out;
}

// k placed at object A in the given degree; a basis element of hom(A,A) acts by its
// coefficient in the identity. Requires the other basis elements to span a dg-ideal.
template <class F>
DgModule<F> simple_module(const CategoryPtr<F>& qp, std::size_t A, int degree = 0) {
  const auto& q = *qp;
  const auto& k = q.field;
  auto m = zero_module(qp);
  m.values[A] = unit_complex<F>(degree);
  std::optional<std::size_t> unit;
  for (std::size_t i = 0; i < q.hom(A, A).size(); ++i)
    if (!k.is_zero(q.identity(A)[i])) {
      if (unit) throw Error("simple_module: identity of " + q.objects[A] + " is not a single basis element");
      unit = i;
    }
  if (!unit) throw Error("simple_module: missing identity");
  auto& rho = m.action[A * q.N() + A][*unit];
  rho.set(degree, Matrix<F>::scalar(k, 1, k.inv(q.identity(A)[*unit])));
  if (auto r = validate_module(m); !r) throw Error("simple_module: augmentation is not multiplicative (" + r.message + ")");
  return m;
}

// ---------------------------------------------------------------------------
// Module maps: a family of graded maps phi_A : M(A) -> N(A) of common degree p
// with phi_a rho_M(f) = (-1)^{p|f|} rho_N(f) phi_b.

template <class F>
struct ModuleMap {
  int degree = 0;
  std::vector<GradedMap<F>> comp;  // per object
  bool operator==(const ModuleMap& o) const {
    if (degree != o.degree || comp.size() != o.comp.size()) return false;
    for (std::size_t a = 0; a < comp.size(); ++a)
      if (!(comp[a].comp == o.comp[a].comp)) return false;
    return true;
  }
  bool is_zero() const {
    for (auto& c : comp)
      if (!c.is_zero()) return false;
    return true;
  }
};

template <class F>
ModuleMap<F> zero_module_map(std::size_t N, int degree) {
  ModuleMap<F> f;
  f.degree = degree;
  f.comp.assign(N, GradedMap<F>{degree, {}});
  return f;
}

template <class F>
ModuleMap<F> identity_module_map(const DgModule<F>& m) {
  ModuleMap<F> f;
  for (auto& v : m.values) f.comp.push_back(identity_map(m.field(), v));
  return f;
}

template <class F>
ModuleMap<F> compose_module_maps(const F& k, const ModuleMap<F>& g, const ModuleMap<F>& f, const DgModule<F>& a, const DgModule<F>& b, const DgModule<F>& c) {
  ModuleMap<F> out;
  out.degree = f.degree + g.degree;
  for (std::size_t x = 0; x < f.comp.size(); ++x) out.comp.push_back(compose(k, g.comp[x], f.comp[x], a.values[x], b.values[x], c.values[x]));
  return out;
}

template <class F>
ModuleMap<F> add_module_maps(const F& k, const ModuleMap<F>& f, const ModuleMap<F>& g, const DgModule<F>& a, const DgModule<F>& b) {
  ModuleMap<F> out;
  out.degree = f.degree;
  for (std::size_t x = 0; x < f.comp.size(); ++x) out.comp.push_back(add_maps(k, f.comp[x], g.comp[x], a.values[x], b.values[x]));
  return out;
}

template <class F>
ModuleMap<F> scale_module_map(const F& k, const typename F::value_type& c, const ModuleMap<F>& f) {
  ModuleMap<F> out;
  out.degree = f.degree;
  for (auto& g : f.comp) out.comp.push_back(scale_map(k, c, g));
  return out;
}

template <class F>
ModuleMap<F> module_map_differential(const F& k, const ModuleMap<F>& f, const DgModule<F>& a, const DgModule<F>& b) {
  ModuleMap<F> out;
  out.degree = f.degree + 1;
  for (std::size_t x = 0; x < f.comp.size(); ++x) out.comp.push_back(differential(k, f.comp[x], a.values[x], b.values[x]));
  return out;
}

template <class F>
Report validate_module_map(const ModuleMap<F>& f, const DgModule<F>& m, const DgModule<F>& n) {
  const auto& q = *m.base;
  const auto& k = q.field;
  if (f.comp.size() != q.N()) return Report::fail("module map has wrong number of components");
  for (std::size_t a = 0; a < q.N(); ++a) {
    if (f.comp[a].degree != f.degree) return Report::fail("component degree mismatch");
    for (auto& [i, mat] : f.comp[a].comp)
      if (mat.rows() != n.values[a].dim(i + f.degree) || mat.cols() != m.values[a].dim(i)) return Report::fail("component of wrong shape at " + q.objects[a]);
  }
  for (std::size_t a = 0; a < q.N(); ++a)
    for (std::size_t b = 0; b < q.N(); ++b)
      for (std::size_t i = 0; i < q.hom(a, b).size(); ++i) {
        int df = q.hom(a, b).basis[i].degree;
        auto l = compose(k, f.comp[a], m.act(a, b, i), m.values[b], m.values[a], n.values[a]);
        auto r = compose(k, n.act(a, b, i), f.comp[b], m.values[b], n.values[b], n.values[a]);
        if (parity_sign(static_cast<long long>(f.degree) * df) < 0) r = scale_map(k, k.from_int(-1), r);
        if (!(l == r)) return Report::fail("not natural with respect to " + q.hom(a, b).basis[i].name);
      }
  return Report::pass();
}

template <class F>
bool is_closed_module_map(const F& k, const ModuleMap<F>& f, const DgModule<F>& a, const DgModule<F>& b) {
  return module_map_differential(k, f, a, b).is_zero();
}

template <class F>
DgModule<F> direct_sum_modules(const std::vector<const DgModule<F>*>& parts, const CategoryPtr<F>& q) {
  const auto& k = q->field;
  auto out = zero_module(q);
  const std::size_t N = q->N();
  for (std::size_t a = 0; a < N; ++a) {
    std::vector<const Complex<F>*> vs;
    for (auto* p : parts) vs.push_back(&p->values[a]);
    out.values[a] = direct_sum(k, vs);
  }
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t i = 0; i < q->hom(a, b).size(); ++i) {
        GradedMap<F> rho;
        rho.degree = q->hom(a, b).basis[i].degree;
        for (auto& [n, dim] : out.values[b].dims) {
          Matrix<F> mat(out.values[a].dim(n + rho.degree), dim);
          std::size_t r0 = 0, c0 = 0;
          for (auto* p : parts) {
            add_block(k, mat, r0, c0, component(p->act(a, b, i), p->values[b], p->values[a], n));
            r0 += p->values[a].dim(n + rho.degree);
            c0 += p->values[b].dim(n);
          }
          rho.set(n, std::move(mat));
        }
        out.action[a * N + b][i] = std::move(rho);
      }
  return out;
}

// Cone of a closed degree-0 module map phi : M -> N.
// cone(A)^n = M(A)^{n+1} + N(A)^n, d = [[-d_M, 0], [phi, d_N]],
// action diag((-1)^|f| rho_M, rho_N).
template <class F>
struct ModuleCone {
  DgModule<F> cone;
  DgModule<F> m_shift;
  ModuleMap<F> i, p, j, s;  // M[1] -> C, C -> M[1], N -> C, C -> N
};

template <class F>
ModuleCone<F> module_cone(const ModuleMap<F>& phi, const DgModule<F>& m, const DgModule<F>& n) {
  const auto& q = m.base;
  const auto& k = q->field;
  const std::size_t N = q->N();
  ModuleCone<F> out{zero_module(q), shift_module(m, 1), {}, {}, {}, {}};
  for (std::size_t a = 0; a < N; ++a) {
    auto c = cone(k, phi.comp[a], m.values[a], n.values[a]);
    out.cone.values[a] = c.cone;
    out.i.comp.push_back(c.i);
    out.p.comp.push_back(c.p);
    out.j.comp.push_back(c.j);
    out.s.comp.push_back(c.s);
  }
  auto ms = out.m_shift;
  auto parts = direct_sum_modules<F>({&ms, &n}, q);
  out.cone.action = parts.action;
  return out;
}

// ---------------------------------------------------------------------------
// Cohomology of modules

template <class F>
std::vector<std::size_t> module_cohomology_dims(const DgModule<F>& m, int i) {
  std::vector<std::size_t> out;
  for (auto& v : m.values) out.push_back(cohomology(m.field(), v, i).dim());
  return out;
}

// Per-object verdict for H^i(phi); iso/epi only when all objects agree.
struct ModuleMapVerdict {
  bool iso = true, epi = true, mono = true;
};

template <class F>
ModuleMapVerdict module_map_verdict(const ModuleMap<F>& phi, const DgModule<F>& m, const DgModule<F>& n, int i) {
  ModuleMapVerdict v;
  for (std::size_t a = 0; a < m.N(); ++a) {
    auto r = cohomology_verdict(m.field(), phi.comp[a], m.values[a], n.values[a], i);
    v.iso = v.iso && r.iso();
    v.epi = v.epi && r.surjective();
    v.mono = v.mono && r.injective();
  }
  return v;
}

// Modules over H^0: finite-dimensional spaces with a (degree 0) right action.
template <class F>
struct H0Module {
  std::shared_ptr<const H0Category<F>> base;
  std::vector<std::size_t> dims;
  std::vector<std::vector<Matrix<F>>> action;  // [a*N+b][i] : dims[a] x dims[b]

  std::size_t N() const { return dims.size(); }
  const Matrix<F>& act(std::size_t a, std::size_t b, std::size_t i) const { return action[a * N() + b][i]; }
  Matrix<F> act_elem(std::size_t a, std::size_t b, const Vec<F>& x) const {
    const auto& k = base->field;
    Matrix<F> out(dims[a], dims[b]);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!k.is_zero(x[i])) out = add(k, out, scale(k, x[i], act(a, b, i)));
    return out;
  }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (auto d : dims) s += d;
    return s;
  }
};

template <class F>
Report validate_h0_module(const H0Module<F>& m) {
  const auto& h = *m.base;
  const auto& k = h.field;
  const std::size_t N = h.N();
  for (std::size_t a = 0; a < N; ++a)
    if (!(m.act_elem(a, a, h.ids[a]) == Matrix<F>::identity(k, m.dims[a]))) return Report::fail("H0 identity does not act as identity");
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t c = 0; c < N; ++c)
        for (std::size_t fi = 0; fi < h.dim(a, b); ++fi)
          for (std::size_t gi = 0; gi < h.dim(b, c); ++gi) {
            auto gf = h.compose(a, b, c, unit_vector(k, h.dim(b, c), gi), unit_vector(k, h.dim(a, b), fi));
            if (!(m.act_elem(a, c, gf) == multiply(k, m.act(a, b, fi), m.act(b, c, gi)))) return Report::fail("H0 action is not functorial");
          }
  return Report::pass();
}

template <class F>
struct H0ModuleData {
  H0Module<F> module;
  std::vector<Cohomology<F>> cohomology;  // per object, representatives in M(A)^i
};

template <class F>
H0ModuleData<F> module_cohomology(const DgModule<F>& m, int i, const std::shared_ptr<const H0Category<F>>& h0) {
  if (auto r = validate_module(m); !r) throw Error("module_cohomology: invalid module (" + r.message + ")");
  const auto& q = *m.base;
  const auto& k = q.field;
  const std::size_t N = q.N();
  H0ModuleData<F> out;
  out.module.base = h0;
  for (std::size_t a = 0; a < N; ++a) {
    out.cohomology.push_back(cohomology(k, m.values[a], i));
    out.module.dims.push_back(out.cohomology.back().dim());
  }
  out.module.action.resize(N * N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t fi = 0; fi < h0->dim(a, b); ++fi) {
        auto rep = q.from_degree(a, b, 0, h0->hom(a, b).reps[fi]);
        auto rho = m.act_elem(a, b, rep, 0);
        out.module.action[a * N + b].push_back(induced_map(k, rho, m.values[b], m.values[a], i, out.cohomology[b], out.cohomology[a]));
      }
  if (auto r = validate_h0_module(out.module); !r) throw Error("module_cohomology: induced action is not functorial");
  return out;
}

// H^0(Q)(-, A)
template <class F>
H0Module<F> representable_h0(const std::shared_ptr<const H0Category<F>>& h0, std::size_t A) {
  const auto& h = *h0;
  const auto& k = h.field;
  const std::size_t N = h.N();
  H0Module<F> m;
  m.base = h0;
  for (std::size_t c = 0; c < N; ++c) m.dims.push_back(h.dim(c, A));
  m.action.resize(N * N);
  // f in H0(c,b) acts H0(b,A) -> H0(c,A), x -> x f
  for (std::size_t c = 0; c < N; ++c)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t fi = 0; fi < h.dim(c, b); ++fi) {
        Matrix<F> mat(h.dim(c, A), h.dim(b, A));
        auto f = unit_vector(k, h.dim(c, b), fi);
        for (std::size_t x = 0; x < h.dim(b, A); ++x) {
          auto y = h.compose(c, b, A, unit_vector(k, h.dim(b, A), x), f);
          for (std::size_t r = 0; r < y.size(); ++r) mat.set(k, r, x, y[r]);
        }
        m.action[c * N + b].push_back(std::move(mat));
      }
  return m;
}

template <class F>
H0Module<F> direct_sum_h0(const std::shared_ptr<const H0Category<F>>& h0, const std::vector<H0Module<F>>& parts) {
  const auto& k = h0->field;
  const std::size_t N = h0->N();
  H0Module<F> m;
  m.base = h0;
  m.dims.assign(N, 0);
  for (auto& p : parts)
    for (std::size_t a = 0; a < N; ++a) m.dims[a] += p.dims[a];
  m.action.resize(N * N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t fi = 0; fi < h0->dim(a, b); ++fi) {
        Matrix<F> mat(m.dims[a], m.dims[b]);
        std::size_t r0 = 0, c0 = 0;
        for (auto& p : parts) {
          add_block(k, mat, r0, c0, p.act(a, b, fi));
          r0 += p.dims[a];
          c0 += p.dims[b];
        }
        m.action[a * N + b].push_back(std::move(mat));
      }
  return m;
}

// Map  (+)_g H0(-, a_g) -> M  sending the identity of a_g to the element x_g of M(a_g).
template <class F>
struct Generator {
  std::size_t object = 0;
  Vec<F> element;
};

template <class F>
std::vector<Matrix<F>> generator_map(const H0Module<F>& m, const std::vector<Generator<F>>& gens) {
  const auto& h = *m.base;
  const auto& k = h.field;
  std::vector<Matrix<F>> out;
  for (std::size_t c = 0; c < h.N(); ++c) {
    std::vector<Vec<F>> cols;
    for (auto& g : gens)
      for (std::size_t x = 0; x < h.dim(c, g.object); ++x) cols.push_back(apply(k, m.act(c, g.object, x), g.element));
    out.push_back(Matrix<F>::from_columns(k, cols, m.dims[c]));
  }
  return out;
}

// Greedy generators of the submodule with the given per-object subspaces (spanning
// sets); objects in declaration order, basis vectors of each subspace in order.
template <class F>
std::vector<Generator<F>> greedy_generators(const H0Module<F>& m, const std::vector<std::vector<Vec<F>>>& sub) {
  const auto& k = m.base->field;
  std::vector<Generator<F>> gens;
  for (std::size_t a = 0; a < m.N(); ++a)
    for (auto& v : sub[a]) {
      auto img = generator_map(m, gens)[a];
      auto cols = columns(img);
      if (extend_basis(k, cols, {v}, m.dims[a]).empty()) continue;
      gens.push_back({a, v});
    }
  return gens;
}

template <class F>
struct FpPresentation {
  std::vector<std::size_t> generators;  // objects of the representables in P0
  std::vector<std::size_t> relations;   // objects of the representables in P1
  std::vector<Generator<F>> gen_elements;  // in M
  std::vector<Generator<F>> rel_elements;  // in P0
  std::vector<Matrix<F>> p0_to_m, p1_to_p0;  // per object
  H0Module<F> p0;
};

template <class F>
std::optional<FpPresentation<F>> fp_presentation(const H0Module<F>& m) {
  const auto& h0 = m.base;
  const auto& k = h0->field;
  const std::size_t N = h0->N();
  FpPresentation<F> out;
  std::vector<std::vector<Vec<F>>> all(N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t i = 0; i < m.dims[a]; ++i) all[a].push_back(unit_vector(k, m.dims[a], i));
  out.gen_elements = greedy_generators(m, all);
  std::vector<H0Module<F>> reps;
  for (auto& g : out.gen_elements) {
    out.generators.push_back(g.object);
    reps.push_back(representable_h0(h0, g.object));
  }
  out.p0 = direct_sum_h0(h0, reps);
  out.p0_to_m = generator_map(m, out.gen_elements);
  // relations: generators of the kernel of P0 -> M; the identity of a_g sits at
  // the offset of summand g inside P0(a_g)
  std::vector<std::vector<Vec<F>>> ker(N);
  for (std::size_t a = 0; a < N; ++a) ker[a] = kernel_basis(k, out.p0_to_m[a]);
  out.rel_elements = greedy_generators(out.p0, ker);
  for (auto& r : out.rel_elements) out.relations.push_back(r.object);
  out.p1_to_p0 = generator_map(out.p0, out.rel_elements);
  // exactness at M and at P0
  for (std::size_t a = 0; a < N; ++a) {
    if (rank(k, out.p0_to_m[a]) != m.dims[a]) return std::nullopt;
    if (rank(k, out.p1_to_p0[a]) != ker[a].size()) return std::nullopt;
    if (!multiply(k, out.p0_to_m[a], out.p1_to_p0[a]).is_zero()) return std::nullopt;
  }
  return out;
}

// Naturality kernel: Hom_{H0}(M, N)
template <class F>
std::vector<std::vector<Matrix<F>>> h0_module_homs(const H0Module<F>& m, const H0Module<F>& n) {
  const auto& h = *m.base;
  const auto& k = h.field;
  const std::size_t N = h.N();
  std::vector<std::size_t> off(N + 1, 0);
  for (std::size_t a = 0; a < N; ++a) off[a + 1] = off[a] + n.dims[a] * m.dims[a];
  std::vector<Vec<F>> eqs;
  // phi_a M(f) = N(f) phi_b for f in H0(a,b)
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t fi = 0; fi < h.dim(a, b); ++fi) {
        auto& mf = m.act(a, b, fi);
        auto& nf = n.act(a, b, fi);
        for (std::size_t r = 0; r < n.dims[a]; ++r)
          for (std::size_t c = 0; c < m.dims[b]; ++c) {
            Vec<F> eq(off[N]);
            for (std::size_t t = 0; t < m.dims[a]; ++t) {
              auto x = mf.get(t, c);
              if (!k.is_zero(x)) eq[off[a] + r * m.dims[a] + t] = k.add(eq[off[a] + r * m.dims[a] + t], x);
            }
            for (std::size_t t = 0; t < n.dims[b]; ++t) {
              auto x = nf.get(r, t);
              if (!k.is_zero(x)) eq[off[b] + t * m.dims[b] + c] = k.sub(eq[off[b] + t * m.dims[b] + c], x);
            }
            eqs.push_back(std::move(eq));
          }
      }
  auto sol = kernel_basis(k, Matrix<F>::from_dense(k, eqs, off[N]));
  std::vector<std::vector<Matrix<F>>> out;
  for (auto& v : sol) {
    std::vector<Matrix<F>> phi;
    for (std::size_t a = 0; a < N; ++a) {
      Matrix<F> mat(n.dims[a], m.dims[a]);
      for (std::size_t r = 0; r < n.dims[a]; ++r)
        for (std::size_t c = 0; c < m.dims[a]; ++c) mat.set(k, r, c, v[off[a] + r * m.dims[a] + c]);
      phi.push_back(std::move(mat));
    }
    out.push_back(std::move(phi));
  }
  return out;
}

// ---------------------------------------------------------------------------
// hlc predicates

struct HlcReport {
  bool nonpositive = true, coherent = true, hfp_representables = true;
  std::string witness;
  int witness_degree = 0;
  bool ok() const { return nonpositive && coherent && hfp_representables; }
};

template <class F>
HlcReport check_hlc(const CategoryPtr<F>& qp) {
  const auto& q = *qp;
  const auto& k = q.field;
  HlcReport rep;
  if (auto w = check_nonpositive_cohomology(q)) {
    rep.nonpositive = false;
    rep.witness_degree = w->degree;
    rep.witness = "H^" + std::to_string(w->degree) + " hom(" + q.objects[w->a] + "," + q.objects[w->b] + ") has dimension " + std::to_string(w->dim);
    return rep;
  }
  auto h0 = std::make_shared<const H0Category<F>>(h0_category(q));
  const std::size_t N = q.N();
  // weak kernel of every basis morphism f : a -> b, f_* : H0(-,a) -> H0(-,b)
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t fi = 0; fi < h0->dim(a, b); ++fi) {
        auto ra = representable_h0(h0, a);
        std::vector<std::vector<Vec<F>>> ker(N);
        std::vector<Matrix<F>> fstar;
        auto f = unit_vector(k, h0->dim(a, b), fi);
        for (std::size_t c = 0; c < N; ++c) {
          Matrix<F> mat(h0->dim(c, b), h0->dim(c, a));
          for (std::size_t x = 0; x < h0->dim(c, a); ++x) {
            auto y = h0->compose(c, a, b, f, unit_vector(k, h0->dim(c, a), x));
            for (std::size_t r = 0; r < y.size(); ++r) mat.set(k, r, x, y[r]);
          }
          ker[c] = kernel_basis(k, mat);
          fstar.push_back(std::move(mat));
        }
        auto gens = greedy_generators(ra, ker);
        auto wk = generator_map(ra, gens);
        for (std::size_t c = 0; c < N; ++c)
          if (rank(k, wk[c]) != ker[c].size() || !multiply(k, fstar[c], wk[c]).is_zero()) {
            rep.coherent = false;
            rep.witness = "no weak kernel found for H0 basis morphism " + std::to_string(fi) + " of (" + q.objects[a] + "," + q.objects[b] + ")";
            return rep;
          }
      }
  for (std::size_t A = 0; A < N; ++A) {
    auto y = yoneda(qp, A);
    for (int i = y.lo(); i <= y.hi(); ++i) {
      auto hm = module_cohomology(y, i, h0);
      if (!fp_presentation(hm.module)) {
        rep.hfp_representables = false;
        rep.witness_degree = i;
        rep.witness = "H^" + std::to_string(i) + " of yoneda(" + q.objects[A] + ") is not finitely presented";
        return rep;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Restriction along a strict dg-functor

template <class F>
DgModule<F> restrict_along(const DgFunctor<F>& fn, const DgModule<F>& m) {
  const auto& s = fn.source;
  auto out = zero_module(s);
  const std::size_t N = s->N();
  for (std::size_t a = 0; a < N; ++a) out.values[a] = m.values[fn.on_objects[a]];
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t i = 0; i < s->hom(a, b).size(); ++i) {
        auto img = fn.apply_hom(a, b, s->basis_vec(a, b, i));
        out.action[a * N + b][i] = m.act_elem(fn.on_objects[a], fn.on_objects[b], img, s->hom(a, b).basis[i].degree);
      }
  return out;
}

// ---------------------------------------------------------------------------
// Module hom complex: degree p = natural transformations of degree p, computed
// as the kernel of the commutation system inside (+)_A Hom(M(A), N(A))^p.

template <class F>
struct ModuleHomComplex {
  Complex<F> complex;
  std::map<int, std::vector<Vec<F>>> basis;  // degree -> elements in the ambient layout

  ModuleMap<F> decode(const F& k, int p, const Vec<F>& coords, const DgModule<F>& m, const DgModule<F>& n) const;
};

namespace detail {

template <class F>
std::vector<std::size_t> ambient_offsets(const DgModule<F>& m, const DgModule<F>& n, int p) {
  std::vector<std::size_t> off{0};
  for (std::size_t a = 0; a < m.N(); ++a) off.push_back(off.back() + hom_layout<F>(m.values[a], n.values[a], p).size);
  return off;
}

template <class F>
ModuleMap<F> decode_ambient(const F& k, const Vec<F>& v, int p, const DgModule<F>& m, const DgModule<F>& n) {
  auto off = ambient_offsets(m, n, p);
  ModuleMap<F> f;
  f.degree = p;
  for (std::size_t a = 0; a < m.N(); ++a) f.comp.push_back(hom_decode(k, Vec<F>(v.begin() + off[a], v.begin() + off[a + 1]), p, m.values[a], n.values[a]));
  return f;
}

template <class F>
Vec<F> encode_ambient(const F& k, const ModuleMap<F>& f, const DgModule<F>& m, const DgModule<F>& n) {
  Vec<F> v;
  for (std::size_t a = 0; a < m.N(); ++a) {
    auto part = hom_encode(k, f.comp[a], m.values[a], n.values[a]);
    v.insert(v.end(), part.begin(), part.end());
  }
  return v;
}

// Rows: for each (a,b,f) the entries of phi_a rho_M(f) - (-1)^{p|f|} rho_N(f) phi_b.
template <class F>
Matrix<F> naturality_system(const F& k, const DgModule<F>& m, const DgModule<F>& n, int p) {
  const auto& q = *m.base;
  const std::size_t N = q.N();
  auto off = ambient_offsets(m, n, p);
  std::vector<std::map<int, std::size_t>> blk(N);
  for (std::size_t a = 0; a < N; ++a)
    for (auto [lvl, o] : hom_layout<F>(m.values[a], n.values[a], p).blocks) blk[a][lvl] = off[a] + o;
  std::vector<typename Matrix<F>::Row> rows;
  std::size_t row_base = 0;
  std::map<std::size_t, std::map<std::size_t, typename F::value_type>> acc;  // row -> col -> value
  auto put = [&](std::size_t r, std::size_t c, const typename F::value_type& v) {
    auto& x = acc[r][c];
    x = k.add(x, v);
  };
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t i = 0; i < q.hom(a, b).size(); ++i) {
        int df = q.hom(a, b).basis[i].degree;
        auto lay = hom_layout<F>(m.values[b], n.values[a], p + df);  // M(b) -> N(a)
        std::map<int, std::size_t> rowoff;
        for (auto [lvl, o] : lay.blocks) rowoff[lvl] = row_base + o;
        const auto& Mb = m.values[b];
        const auto& Ma = m.values[a];
        const auto& Nb = n.values[b];
        const auto& Na = n.values[a];
        // phi_a rho_M(f): at level l of M(b): (phi_a)_{l+df} (rho_M f)_l
        for (auto& [l, rm] : m.act(a, b, i).comp) {
          auto ro = rowoff.find(l);
          auto co = blk[a].find(l + df);
          if (ro == rowoff.end() || co == blk[a].end()) continue;
          std::size_t ma = Ma.dim(l + df), mb = Mb.dim(l);
          std::size_t na = Na.dim(l + df + p);
          // entry (r, c) of phi_a at level l+df contributes rm[c][c'] to row (r, c')
          for (std::size_t c = 0; c < rm.rows(); ++c)
            for (auto& [c2, x] : rm.row(c))
              for (std::size_t r = 0; r < na; ++r) put(ro->second + r * mb + c2, co->second + r * ma + c, x);
        }
        // -(-1)^{p df} rho_N(f) phi_b: at level l of M(b): (rho_N f)_{l+p} (phi_b)_l
        const bool neg = parity_sign(static_cast<long long>(p) * df) > 0;
        for (auto& [lp, rn] : n.act(a, b, i).comp) {
          int l = lp - p;
          auto ro = rowoff.find(l);
          auto co = blk[b].find(l);
          if (ro == rowoff.end() || co == blk[b].end()) continue;
          std::size_t mb = Mb.dim(l);
          (void)Nb;
          // entry (r, c) of phi_b contributes rn[r2][r] to row (r2, c)
          for (std::size_t r2 = 0; r2 < rn.rows(); ++r2)
            for (auto& [r, x] : rn.row(r2)) {
              auto y = neg ? k.neg(x) : x;
              for (std::size_t c = 0; c < mb; ++c) put(ro->second + r2 * mb + c, co->second + r * mb + c, y);
            }
        }
        row_base += lay.size;
      }
  Matrix<F> sys(row_base, off[N]);
  for (auto& [r, cols] : acc)
    for (auto& [c, v] : cols)
      if (!k.is_zero(v)) sys.row_mut(r).push_back({c, v});
  return sys;
}

}  // namespace detail

template <class F>
ModuleMap<F> ModuleHomComplex<F>::decode(const F& k, int p, const Vec<F>& coords, const DgModule<F>& m, const DgModule<F>& n) const {
  auto& b = basis.at(p);
  Vec<F> amb(detail::ambient_offsets(m, n, p).back());
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (!k.is_zero(coords[i])) amb = vec_add(k, amb, vec_scale(k, coords[i], b[i]));
  return detail::decode_ambient(k, amb, p, m, n);
}

template <class F>
ModuleHomComplex<F> module_hom_complex(const DgModule<F>& m, const DgModule<F>& n, std::optional<std::pair<int, int>> range = std::nullopt) {
  const auto& k = m.field();
  ModuleHomComplex<F> out;
  if (m.empty() || n.empty()) return out;
  int lo = n.lo() - m.hi(), hi = n.hi() - m.lo();
  if (range) {
    lo = std::max(lo, range->first);
    hi = std::min(hi, range->second);
  }
  // one extra degree on each side so the differential into/out of the range is known
  for (int p = lo - 1; p <= hi + 1; ++p) {
    auto sys = detail::naturality_system(k, m, n, p);
    out.basis[p] = kernel_basis(k, sys);
  }
  for (int p = lo - 1; p <= hi + 1; ++p) out.complex.set_dim(p, out.basis[p].size());
  for (int p = lo - 1; p <= hi; ++p) {
    auto& src = out.basis[p];
    auto& tgt = out.basis[p + 1];
    if (src.empty() || tgt.empty()) continue;
    std::vector<Vec<F>> images;
    for (auto& v : src) {
      auto phi = detail::decode_ambient(k, v, p, m, n);
      images.push_back(detail::encode_ambient(k, module_map_differential(k, phi, m, n), m, n));
    }
    std::size_t amb = detail::ambient_offsets(m, n, p + 1).back();
    auto sol = solve_columns(k, Matrix<F>::from_columns(k, tgt, amb), Matrix<F>::from_columns(k, images, amb));
    Matrix<F> d(tgt.size(), src.size());
    for (std::size_t j = 0; j < sol.size(); ++j) {
      if (!sol[j]) throw Error("module_hom_complex: differential leaves the space of natural transformations");
      for (std::size_t r = 0; r < tgt.size(); ++r) d.set(k, r, j, (*sol[j])[r]);
    }
    out.complex.set_diff(p, std::move(d));
  }
  return out;
}

}  // namespace dgkit
