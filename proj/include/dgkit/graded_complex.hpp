#pragma once

// Bounded cochain complexes of finite-dimensional spaces, graded maps between
// them, and the shift / cone / hom-complex constructions.
//
// Conventions: d^n : C^n -> C^{n+1}; C[n]^i = C^{i+n} with differential (-1)^n d;
// for a graded map f of degree p, d(f) = d_b f - (-1)^p f d_a.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace dgkit {

template <class F>
struct Complex {
  std::map<int, std::size_t> dims;  // positive dimensions only
  std::map<int, Matrix<F>> d;       // d[n] : dims[n+1] x dims[n], nonzero only

  std::size_t dim(int n) const {
    auto it = dims.find(n);
    return it == dims.end() ? 0 : it->second;
  }
  Matrix<F> diff(int n) const {
    auto it = d.find(n);
    if (it != d.end()) return it->second;
    return Matrix<F>(dim(n + 1), dim(n));
  }
  bool empty() const { return dims.empty(); }
  int lo() const { return dims.empty() ? 0 : dims.begin()->first; }
  int hi() const { return dims.empty() ? -1 : dims.rbegin()->first; }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (auto& [n, k] : dims) s += k;
    return s;
  }

  void set_dim(int n, std::size_t k) {
    if (k == 0)
      dims.erase(n);
    else
      dims[n] = k;
  }
  void set_diff(int n, Matrix<F> m) {
    if (m.rows() != dim(n + 1) || m.cols() != dim(n)) throw Error("differential has wrong shape in degree " + std::to_string(n));
    if (m.is_zero())
      d.erase(n);
    else
      d[n] = std::move(m);
  }

  bool operator==(const Complex&) const = default;
};

// Graded map of some degree; comp[n] : target^{n+degree} x source^n, nonzero only.
template <class F>
struct GradedMap {
  int degree = 0;
  std::map<int, Matrix<F>> comp;

  Matrix<F> at(int n, std::size_t rows, std::size_t cols) const {
    auto it = comp.find(n);
    if (it != comp.end()) return it->second;
    return Matrix<F>(rows, cols);
  }
  void set(int n, Matrix<F> m) {
    if (m.is_zero())
      comp.erase(n);
    else
      comp[n] = std::move(m);
  }
  bool is_zero() const { return comp.empty(); }
  bool operator==(const GradedMap&) const = default;
};

template <class F>
Matrix<F> component(const GradedMap<F>& f, const Complex<F>& a, const Complex<F>& b, int n) {
  return f.at(n, b.dim(n + f.degree), a.dim(n));
}

struct Report {
  bool ok = true;
  std::string message;
  static Report pass() { return {}; }
  static Report fail(std::string m) { return {false, std::move(m)}; }
  explicit operator bool() const { return ok; }
};

template <class F>
Report validate_complex(const F& k, const Complex<F>& c) {
  for (auto& [n, m] : c.d) {
    if (m.rows() != c.dim(n + 1) || m.cols() != c.dim(n)) return Report::fail("differential d^" + std::to_string(n) + " has wrong shape");
  }
  for (auto& [n, m] : c.d) {
    auto next = c.d.find(n + 1);
    if (next == c.d.end()) continue;
    auto prod = multiply(k, next->second, m);
    if (!prod.is_zero()) return Report::fail("d^" + std::to_string(n + 1) + " d^" + std::to_string(n) + " != 0 in degree " + std::to_string(n) + ":\n" + to_string(k, prod));
  }
  return Report::pass();
}

template <class F>
Complex<F> zero_complex() {
  return {};
}

// k concentrated in a single degree
template <class F>
Complex<F> unit_complex(int degree, std::size_t dim = 1) {
  Complex<F> c;
  c.set_dim(degree, dim);
  return c;
}

template <class F>
Complex<F> shift(const F& k, const Complex<F>& c, int n) {
  Complex<F> out;
  for (auto& [i, dim] : c.dims) out.dims[i - n] = dim;
  int s = parity_sign(n);
  for (auto& [i, m] : c.d) out.d[i - n] = scale_sign(k, s, m);
  return out;
}

template <class F>
Complex<F> direct_sum(const F& k, const std::vector<const Complex<F>*>& parts) {
  Complex<F> out;
  std::map<int, bool> degrees;
  for (auto* p : parts)
    for (auto& [n, dim] : p->dims) {
      out.dims[n] += dim;
      degrees[n] = true;
    }
  for (auto& [n, _] : degrees) {
    Matrix<F> m(out.dim(n + 1), out.dim(n));
    std::size_t r0 = 0, c0 = 0;
    for (auto* p : parts) {
      add_block(k, m, r0, c0, p->diff(n));
      r0 += p->dim(n + 1);
      c0 += p->dim(n);
    }
    out.set_diff(n, std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Graded maps

template <class F>
GradedMap<F> identity_map(const F& k, const Complex<F>& c) {
  GradedMap<F> f;
  for (auto& [n, dim] : c.dims) f.set(n, Matrix<F>::identity(k, dim));
  return f;
}

// Degree -n identity C -> C[n]; closed only up to the sign (-1)^n.
template <class F>
GradedMap<F> shifted_identity(const F& k, const Complex<F>& c, int n) {
  GradedMap<F> f;
  f.degree = -n;
  for (auto& [i, dim] : c.dims) f.set(i, Matrix<F>::identity(k, dim));
  return f;
}

template <class F>
GradedMap<F> compose(const F& k, const GradedMap<F>& g, const GradedMap<F>& f, const Complex<F>& a, const Complex<F>& b, const Complex<F>& c) {
  GradedMap<F> out;
  out.degree = f.degree + g.degree;
  for (auto& [n, fm] : f.comp) {
    auto gm = component(g, b, c, n + f.degree);
    out.set(n, multiply(k, gm, fm));
  }
  (void)a;
  return out;
}

template <class F>
GradedMap<F> add_maps(const F& k, const GradedMap<F>& f, const GradedMap<F>& g, const Complex<F>& a, const Complex<F>& b) {
  if (f.degree != g.degree) throw Error("adding graded maps of different degree");
  GradedMap<F> out;
  out.degree = f.degree;
  std::map<int, bool> ns;
  for (auto& [n, _] : f.comp) ns[n] = true;
  for (auto& [n, _] : g.comp) ns[n] = true;
  for (auto& [n, _] : ns) out.set(n, add(k, component(f, a, b, n), component(g, a, b, n)));
  return out;
}

template <class F>
GradedMap<F> scale_map(const F& k, const typename F::value_type& c, const GradedMap<F>& f) {
  GradedMap<F> out;
  out.degree = f.degree;
  for (auto& [n, m] : f.comp) out.set(n, scale(k, c, m));
  return out;
}

template <class F>
GradedMap<F> sub_maps(const F& k, const GradedMap<F>& f, const GradedMap<F>& g, const Complex<F>& a, const Complex<F>& b) {
  return add_maps(k, f, scale_map(k, k.from_int(-1), g), a, b);
}

// d(f) = d_b f - (-1)^p f d_a
template <class F>
GradedMap<F> differential(const F& k, const GradedMap<F>& f, const Complex<F>& a, const Complex<F>& b) {
  GradedMap<F> out;
  const int p = f.degree;
  out.degree = p + 1;
  std::map<int, bool> ns;
  for (auto& [n, _] : f.comp) {
    ns[n] = true;
    ns[n - 1] = true;
  }
  for (auto& [n, _] : ns) {
    if (a.dim(n) == 0 || b.dim(n + p + 1) == 0) continue;
    auto left = multiply(k, b.diff(n + p), component(f, a, b, n));
    auto right = multiply(k, component(f, a, b, n + 1), a.diff(n));
    out.set(n, sub(k, left, scale_sign(k, parity_sign(p), right)));
  }
  return out;
}

template <class F>
bool is_closed(const F& k, const GradedMap<F>& f, const Complex<F>& a, const Complex<F>& b) {
  return differential(k, f, a, b).is_zero();
}

// ---------------------------------------------------------------------------
// Cone of a closed degree-0 map f : A -> B
//
// cone^n = A^{n+1} + B^n with differential [[-d_A, 0], [f, d_B]].
// Structural maps i : A[1] -> C, p : C -> A[1], j : B -> C, s : C -> B (degree 0)
// and sigma : A[1] -> A, the degree-1 identity.

template <class F>
struct ConeData {
  Complex<F> cone;
  Complex<F> a_shift;  // A[1]
  GradedMap<F> i, p, j, s, sigma;
};

template <class F>
ConeData<F> cone(const F& k, const GradedMap<F>& f, const Complex<F>& a, const Complex<F>& b) {
  if (f.degree != 0) throw Error("cone: map must have degree 0");
  if (!is_closed(k, f, a, b)) throw Error("cone: map is not closed");
  ConeData<F> out;
  out.a_shift = shift(k, a, 1);
  std::map<int, bool> ns;
  for (auto& [n, _] : a.dims) ns[n - 1] = true;
  for (auto& [n, _] : b.dims) ns[n] = true;
  for (auto& [n, _] : ns) out.cone.set_dim(n, a.dim(n + 1) + b.dim(n));
  for (auto& [n, _] : ns) {
    std::size_t an = a.dim(n + 1), bn = b.dim(n), an1 = a.dim(n + 2), bn1 = b.dim(n + 1);
    Matrix<F> m(an1 + bn1, an + bn);
    add_block(k, m, 0, 0, scale_sign(k, -1, a.diff(n + 1)));
    add_block(k, m, an1, 0, component(f, a, b, n + 1));
    add_block(k, m, an1, an, b.diff(n));
    out.cone.set_diff(n, std::move(m));
  }
  out.i.degree = out.p.degree = out.j.degree = out.s.degree = 0;
  out.sigma.degree = 1;
  for (auto& [n, _] : ns) {
    std::size_t an = a.dim(n + 1), bn = b.dim(n);
    if (an) {
      Matrix<F> inc(an + bn, an), proj(an, an + bn);
      for (std::size_t t = 0; t < an; ++t) {
        inc.set(k, t, t, k.one());
        proj.set(k, t, t, k.one());
      }
      out.i.set(n, inc);
      out.p.set(n, proj);
      out.sigma.set(n, Matrix<F>::identity(k, an));
    }
    if (bn) {
      Matrix<F> inc(an + bn, bn), proj(bn, an + bn);
      for (std::size_t t = 0; t < bn; ++t) {
        inc.set(k, an + t, t, k.one());
        proj.set(k, t, an + t, k.one());
      }
      out.j.set(n, inc);
      out.s.set(n, proj);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hom complex. Degree-p basis: for each n in the support of a (ascending), the
// entries (r, c) of Hom(a^n, b^{n+p}) in row-major order.

template <class F>
struct HomLayout {
  int degree = 0;
  std::vector<std::pair<int, std::size_t>> blocks;  // (n, offset)
  std::size_t size = 0;
};

template <class F>
HomLayout<F> hom_layout(const Complex<F>& a, const Complex<F>& b, int p) {
  HomLayout<F> l;
  l.degree = p;
  for (auto& [n, da] : a.dims) {
    std::size_t db = b.dim(n + p);
    if (!db) continue;
    l.blocks.push_back({n, l.size});
    l.size += da * db;
  }
  return l;
}

template <class F>
Vec<F> hom_encode(const F& k, const GradedMap<F>& f, const Complex<F>& a, const Complex<F>& b) {
  auto l = hom_layout<F>(a, b, f.degree);
  Vec<F> v(l.size);
  for (auto [n, off] : l.blocks) {
    auto it = f.comp.find(n);
    if (it == f.comp.end()) continue;
    std::size_t da = a.dim(n);
    for (std::size_t r = 0; r < it->second.rows(); ++r)
      for (auto& [c, x] : it->second.row(r)) v[off + r * da + c] = x;
  }
  (void)k;
  return v;
}

template <class F>
GradedMap<F> hom_decode(const F& k, const Vec<F>& v, int p, const Complex<F>& a, const Complex<F>& b) {
  auto l = hom_layout<F>(a, b, p);
  if (v.size() != l.size) throw Error("hom_decode: vector length mismatch");
  GradedMap<F> f;
  f.degree = p;
  for (auto [n, off] : l.blocks) {
    std::size_t da = a.dim(n), db = b.dim(n + p);
    Matrix<F> m(db, da);
    for (std::size_t r = 0; r < db; ++r)
      for (std::size_t c = 0; c < da; ++c)
        if (!k.is_zero(v[off + r * da + c])) m.row_mut(r).push_back({c, v[off + r * da + c]});
    f.set(n, std::move(m));
  }
  return f;
}

// Matrix of the hom differential from degree p to degree p+1.
template <class F>
Matrix<F> hom_differential_matrix(const F& k, const Complex<F>& a, const Complex<F>& b, int p) {
  auto src = hom_layout<F>(a, b, p);
  auto tgt = hom_layout<F>(a, b, p + 1);
  std::map<int, std::size_t> toff;
  for (auto [n, off] : tgt.blocks) toff[n] = off;
  Matrix<F> m(tgt.size, src.size);
  const auto sgn = parity_sign(p);
  for (auto [n, off] : src.blocks) {
    std::size_t da = a.dim(n), db = b.dim(n + p);
    // d_b f : a^n -> b^{n+p+1}
    if (auto it = toff.find(n); it != toff.end()) {
      auto dbm = b.diff(n + p);
      for (std::size_t r2 = 0; r2 < dbm.rows(); ++r2)
        for (auto& [r, x] : dbm.row(r2))
          for (std::size_t c = 0; c < da; ++c) m.add_to(k, it->second + r2 * da + c, off + r * da + c, x);
    }
    // -(-1)^p f d_a : a^{n-1} -> b^{n+p}
    if (auto it = toff.find(n - 1); it != toff.end()) {
      auto dam = a.diff(n - 1);  // a^n x a^{n-1}
      std::size_t da1 = a.dim(n - 1);
      for (std::size_t c = 0; c < dam.rows(); ++c)
        for (auto& [c2, x] : dam.row(c)) {
          auto y = sgn > 0 ? k.neg(x) : x;
          for (std::size_t r = 0; r < db; ++r) m.add_to(k, it->second + r * da1 + c2, off + r * da + c, y);
        }
    }
  }
  return m;
}

template <class F>
Complex<F> hom_complex(const F& k, const Complex<F>& a, const Complex<F>& b) {
  Complex<F> out;
  if (a.empty() || b.empty()) return out;
  int lo = b.lo() - a.hi(), hi = b.hi() - a.lo();
  for (int p = lo; p <= hi; ++p) out.set_dim(p, hom_layout<F>(a, b, p).size);
  for (int p = lo; p < hi; ++p)
    if (out.dim(p) && out.dim(p + 1)) out.set_diff(p, hom_differential_matrix(k, a, b, p));
  return out;
}

// ---------------------------------------------------------------------------
// Cohomology

template <class F>
struct Cohomology {
  int degree = 0;
  std::size_t ambient = 0;
  std::vector<Vec<F>> reps;        // cocycles projecting to a basis
  std::vector<Vec<F>> boundaries;  // spanning set of the coboundaries
  std::size_t dim() const { return reps.size(); }
};

template <class F>
std::vector<Vec<F>> columns(const Matrix<F>& m) {
  std::vector<Vec<F>> out(m.cols(), Vec<F>(m.rows()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (auto& [c, x] : m.row(r)) out[c][r] = x;
  return out;
}

template <class F>
Cohomology<F> cohomology(const F& k, const Complex<F>& c, int n) {
  Cohomology<F> h;
  h.degree = n;
  h.ambient = c.dim(n);
  if (!h.ambient) return h;
  auto cycles = kernel_basis(k, c.diff(n));
  auto bnd = columns(c.diff(n - 1));
  for (auto i : extend_basis(k, bnd, cycles, h.ambient)) h.reps.push_back(cycles[i]);
  // keep an independent spanning set of coboundaries
  std::vector<Vec<F>> none;
  for (auto i : extend_basis(k, none, bnd, h.ambient)) h.boundaries.push_back(bnd[i]);
  return h;
}

template <class F>
std::map<int, std::size_t> cohomology_dims(const F& k, const Complex<F>& c, int lo, int hi) {
  std::map<int, std::size_t> out;
  for (int n = lo; n <= hi; ++n) out[n] = cohomology(k, c, n).dim();
  return out;
}

// Coordinates of the classes of the given cocycles (columns of z) in the basis h.reps.
template <class F>
Matrix<F> classify(const F& k, const Cohomology<F>& h, const std::vector<Vec<F>>& cocycles) {
  Matrix<F> out(h.dim(), cocycles.size());
  if (cocycles.empty() || h.ambient == 0) return out;
  std::vector<Vec<F>> basis = h.reps;
  basis.insert(basis.end(), h.boundaries.begin(), h.boundaries.end());
  auto a = Matrix<F>::from_columns(k, basis, h.ambient);
  auto sol = solve_columns(k, a, Matrix<F>::from_columns(k, cocycles, h.ambient));
  for (std::size_t j = 0; j < sol.size(); ++j) {
    if (!sol[j]) throw Error("classify: vector is not a cocycle");
    for (std::size_t i = 0; i < h.dim(); ++i)
      if (!k.is_zero((*sol[j])[i])) out.set(k, i, j, (*sol[j])[i]);
  }
  return out;
}

// Matrix of H^n(f) : H^n(a) -> H^{n+p}(b) in the representative bases.
template <class F>
Matrix<F> induced_map(const F& k, const GradedMap<F>& f, const Complex<F>& a, const Complex<F>& b, int n, const Cohomology<F>& ha, const Cohomology<F>& hb) {
  auto m = component(f, a, b, n);
  std::vector<Vec<F>> imgs;
  for (auto& z : ha.reps) imgs.push_back(apply(k, m, z));
  return classify(k, hb, imgs);
}

template <class F>
Matrix<F> induced_map(const F& k, const GradedMap<F>& f, const Complex<F>& a, const Complex<F>& b, int n) {
  return induced_map(k, f, a, b, n, cohomology(k, a, n), cohomology(k, b, n + f.degree));
}

struct MapVerdict {
  std::size_t src_dim = 0, tgt_dim = 0, rank = 0;
  bool injective() const { return rank == src_dim; }
  bool surjective() const { return rank == tgt_dim; }
  bool iso() const { return injective() && surjective(); }
};

template <class F>
MapVerdict cohomology_verdict(const F& k, const GradedMap<F>& f, const Complex<F>& a, const Complex<F>& b, int n) {
  auto ha = cohomology(k, a, n);
  auto hb = cohomology(k, b, n + f.degree);
  MapVerdict v{ha.dim(), hb.dim(), 0};
  if (v.src_dim && v.tgt_dim) v.rank = rank(k, induced_map(k, f, a, b, n, ha, hb));
  return v;
}

// h of degree p-1 with d(h) = f, or nullopt if f is not a coboundary.
template <class F>
std::optional<GradedMap<F>> null_homotopy_witness(const F& k, const GradedMap<F>& f, const Complex<F>& a, const Complex<F>& b) {
  const int p = f.degree;
  auto rhs = hom_encode(k, f, a, b);
  auto dm = hom_differential_matrix(k, a, b, p - 1);
  if (rhs.empty()) return GradedMap<F>{p - 1, {}};
  auto sol = solve_particular(k, dm, rhs);
  if (!sol) return std::nullopt;
  auto h = hom_decode(k, *sol, p - 1, a, b);
  if (!(differential(k, h, a, b) == f)) throw Error("null_homotopy_witness: solver returned a wrong witness");
  return h;
}

}  // namespace dgkit
