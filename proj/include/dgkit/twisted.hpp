#pragma once

// One-sided twisted complexes (A_i, q_i^j), their morphisms, shift, cone,
// stupid truncations, totalization and the one-sided reduction of morphisms.
//
// q_i^j goes from entry i to entry j and has degree i-j+1; a morphism
// component f_i^j has degree i-j+p. Maurer-Cartan identity:
//   (-1)^j d q_i^j + sum_k q_k^j q_i^k = 0.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dg_module.hpp"

namespace dgkit {

using Objects = std::vector<std::size_t>;

// Matrix of hom elements: cell (t, s) lies in hom(src[s], tgt[t]).
template <class F>
struct Block {
  std::size_t rows = 0, cols = 0;
  std::vector<Vec<F>> cells;  // row-major

  const Vec<F>& at(std::size_t t, std::size_t s) const { return cells[t * cols + s]; }
  Vec<F>& at(std::size_t t, std::size_t s) { return cells[t * cols + s]; }
  bool is_zero() const {
    for (auto& c : cells)
      for (auto& x : c)
        if (!(x == typename F::value_type{})) return false;
    return true;
  }
  bool operator==(const Block&) const = default;
};

template <class F>
Block<F> zero_block(const DgCategory<F>& q, const Objects& src, const Objects& tgt) {
  Block<F> b;
  b.rows = tgt.size();
  b.cols = src.size();
  for (std::size_t t = 0; t < tgt.size(); ++t)
    for (std::size_t s = 0; s < src.size(); ++s) b.cells.push_back(q.zero(src[s], tgt[t]));
  return b;
}

// g o f with f : src -> mid, g : mid -> tgt
template <class F>
Block<F> block_compose(const DgCategory<F>& q, const Block<F>& g, const Block<F>& f, const Objects& src, const Objects& mid, const Objects& tgt) {
  auto out = zero_block(q, src, tgt);
  for (std::size_t t = 0; t < tgt.size(); ++t)
    for (std::size_t s = 0; s < src.size(); ++s) {
      auto& cell = out.at(t, s);
      for (std::size_t u = 0; u < mid.size(); ++u) cell = vec_add(q.field, cell, q.compose(src[s], mid[u], tgt[t], g.at(t, u), f.at(u, s)));
    }
  return out;
}

template <class F>
void block_accumulate(const F& k, Block<F>& acc, const Block<F>& x, int sign = 1) {
  for (std::size_t c = 0; c < acc.cells.size(); ++c) acc.cells[c] = sign > 0 ? vec_add(k, acc.cells[c], x.cells[c]) : vec_sub(k, acc.cells[c], x.cells[c]);
}

template <class F>
Block<F> block_diff(const DgCategory<F>& q, const Block<F>& b, const Objects& src, const Objects& tgt) {
  Block<F> out = b;
  for (std::size_t t = 0; t < tgt.size(); ++t)
    for (std::size_t s = 0; s < src.size(); ++s) out.at(t, s) = q.diff(src[s], tgt[t], b.at(t, s));
  return out;
}

template <class F>
Block<F> block_scale_sign(const F& k, int sign, Block<F> b) {
  if (sign > 0) return b;
  for (auto& c : b.cells) c = vec_sub(k, Vec<F>(c.size()), c);
  return b;
}

// ---------------------------------------------------------------------------

template <class F>
struct TwistedComplex {
  CategoryPtr<F> base;
  std::map<int, Objects> entries;                  // nonempty lists only
  std::map<std::pair<int, int>, Block<F>> q;       // (i, j) : i -> j, nonzero only
  int lo = 0, hi = -1;                             // window
  bool extendible = false;                         // promise: continues below lo

  const Objects& at(int i) const {
    static const Objects none;
    auto it = entries.find(i);
    return it == entries.end() ? none : it->second;
  }
  Block<F> q_at(int i, int j) const {
    auto it = q.find({i, j});
    if (it != q.end()) return it->second;
    return zero_block(*base, at(i), at(j));
  }
  void set_q(int i, int j, Block<F> b) {
    if (b.is_zero())
      q.erase({i, j});
    else
      q[{i, j}] = std::move(b);
  }
  std::vector<int> indices() const {
    std::vector<int> out;
    for (auto& [i, _] : entries) out.push_back(i);
    return out;
  }
  bool empty() const { return entries.empty(); }
  int top() const { return entries.empty() ? hi : entries.rbegin()->first; }
  std::size_t multiplicity() const {
    std::size_t m = 0;
    for (auto& [i, o] : entries) m = std::max(m, o.size());
    return m;
  }

  // Data equality; the window is bookkeeping and compared separately.
  bool operator==(const TwistedComplex& o) const { return entries == o.entries && q == o.q; }
};

template <class F>
TwistedComplex<F> single_entry(const CategoryPtr<F>& q, int index, Objects objs) {
  TwistedComplex<F> x;
  x.base = q;
  if (!objs.empty()) x.entries[index] = std::move(objs);
  x.lo = x.hi = index;
  return x;
}

template <class F>
struct TwMorphism {
  int degree = 0;
  std::map<std::pair<int, int>, Block<F>> comp;  // (i, j): source entry i -> target entry j, nonzero only

  void set(int i, int j, Block<F> b) {
    if (b.is_zero())
      comp.erase({i, j});
    else
      comp[{i, j}] = std::move(b);
  }
  bool is_zero() const { return comp.empty(); }
  bool operator==(const TwMorphism&) const = default;
};

template <class F>
Block<F> comp_at(const TwMorphism<F>& f, const TwistedComplex<F>& x, const TwistedComplex<F>& y, int i, int j) {
  auto it = f.comp.find({i, j});
  if (it != f.comp.end()) return it->second;
  return zero_block(*x.base, x.at(i), y.at(j));
}

template <class F>
bool is_one_sided(const TwMorphism<F>& f) {
  for (auto& [ij, b] : f.comp)
    if (ij.first - ij.second + f.degree > 0) return false;
  return true;
}

struct TwReport {
  bool ok = true;
  std::string kind;  // "shape", "degree", "one-sided", "MC"
  int i = 0, j = 0;
  std::string message;
  explicit operator bool() const { return ok; }
};

template <class F>
bool block_has_degree(const DgCategory<F>& q, const Block<F>& b, const Objects& src, const Objects& tgt, int degree) {
  for (std::size_t t = 0; t < tgt.size(); ++t)
    for (std::size_t s = 0; s < src.size(); ++s) {
      auto d = q.degree_of(src[s], tgt[t], b.at(t, s));
      if (d && *d != degree) return false;
    }
  return true;
}

template <class F>
TwReport validate_twisted(const TwistedComplex<F>& x) {
  const auto& q = *x.base;
  const auto& k = q.field;
  auto fail = [](std::string kind, int i, int j, std::string m) { return TwReport{false, std::move(kind), i, j, std::move(m)}; };
  for (auto& [i, objs] : x.entries)
    for (auto o : objs)
      if (o >= q.N()) return fail("shape", i, i, "unknown object in entry " + std::to_string(i));
  for (auto& [ij, b] : x.q) {
    auto [i, j] = ij;
    auto& src = x.at(i);
    auto& tgt = x.at(j);
    if (b.rows != tgt.size() || b.cols != src.size() || b.cells.size() != b.rows * b.cols) return fail("shape", i, j, "block has wrong shape");
    for (std::size_t t = 0; t < tgt.size(); ++t)
      for (std::size_t s = 0; s < src.size(); ++s)
        if (b.at(t, s).size() != q.hom(src[s], tgt[t]).size()) return fail("shape", i, j, "cell has wrong length");
    if (j <= i) return fail("one-sided", i, j, "q_" + std::to_string(i) + "^" + std::to_string(j) + " is nonzero");
    try {
      if (!block_has_degree(q, b, src, tgt, i - j + 1)) return fail("degree", i, j, "component of wrong degree");
    } catch (const Error&) {
      return fail("degree", i, j, "inhomogeneous component");
    }
  }
  auto idx = x.indices();
  for (int i : idx)
    for (int j : idx) {
      if (j <= i) continue;
      auto& src = x.at(i);
      auto& tgt = x.at(j);
      auto acc = block_scale_sign(k, parity_sign(j), block_diff(q, x.q_at(i, j), src, tgt));
      for (int m : idx) {
        if (m <= i || m >= j) continue;
        auto a = x.q.find({i, m});
        auto b = x.q.find({m, j});
        if (a == x.q.end() || b == x.q.end()) continue;
        block_accumulate(k, acc, block_compose(q, b->second, a->second, src, x.at(m), tgt));
      }
      if (!acc.is_zero()) return fail("MC", i, j, "Maurer-Cartan identity fails at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  return {};
}

// ---------------------------------------------------------------------------
// Morphism calculus

// (df)_i^j = (-1)^j d f_i^j + sum_k r_k^j f_i^k - (-1)^p sum_k f_k^j q_i^k
template <class F>
TwMorphism<F> tw_differential(const TwMorphism<F>& f, const TwistedComplex<F>& x, const TwistedComplex<F>& y) {
  const auto& q = *x.base;
  const auto& k = q.field;
  TwMorphism<F> out;
  out.degree = f.degree + 1;
  std::map<std::pair<int, int>, Block<F>> acc;
  auto slot = [&](int i, int j) -> Block<F>& {
    auto it = acc.find({i, j});
    if (it == acc.end()) it = acc.emplace(std::make_pair(i, j), zero_block(q, x.at(i), y.at(j))).first;
    return it->second;
  };
  for (auto& [ij, b] : f.comp) {
    auto [i, kk] = ij;
    block_accumulate(k, slot(i, kk), block_diff(q, b, x.at(i), y.at(kk)), parity_sign(kk));
    for (auto& [rkj, r] : y.q)
      if (rkj.first == kk) block_accumulate(k, slot(i, rkj.second), block_compose(q, r, b, x.at(i), y.at(kk), y.at(rkj.second)));
    for (auto& [qik, qb] : x.q)
      if (qik.second == i) block_accumulate(k, slot(qik.first, kk), block_compose(q, b, qb, x.at(qik.first), x.at(i), y.at(kk)), -parity_sign(f.degree));
  }
  for (auto& [ij, b] : acc) out.set(ij.first, ij.second, std::move(b));
  return out;
}

template <class F>
TwMorphism<F> tw_compose(const TwMorphism<F>& g, const TwMorphism<F>& f, const TwistedComplex<F>& x, const TwistedComplex<F>& y, const TwistedComplex<F>& z) {
  const auto& q = *x.base;
  TwMorphism<F> out;
  out.degree = f.degree + g.degree;
  std::map<std::pair<int, int>, Block<F>> acc;
  for (auto& [fik, fb] : f.comp)
    for (auto& [gkj, gb] : g.comp) {
      if (gkj.first != fik.second) continue;
      int i = fik.first, j = gkj.second;
      auto it = acc.find({i, j});
      if (it == acc.end()) it = acc.emplace(std::make_pair(i, j), zero_block(q, x.at(i), z.at(j))).first;
      block_accumulate(q.field, it->second, block_compose(q, gb, fb, x.at(i), y.at(fik.second), z.at(j)));
    }
  for (auto& [ij, b] : acc) out.set(ij.first, ij.second, std::move(b));
  return out;
}

template <class F>
TwMorphism<F> tw_add(const F& k, const TwMorphism<F>& f, const TwMorphism<F>& g, const TwistedComplex<F>& x, const TwistedComplex<F>& y, int sign = 1) {
  TwMorphism<F> out = f;
  for (auto& [ij, b] : g.comp) {
    auto cur = comp_at(out, x, y, ij.first, ij.second);
    block_accumulate(k, cur, b, sign);
    out.set(ij.first, ij.second, std::move(cur));
  }
  return out;
}

template <class F>
TwMorphism<F> tw_identity(const TwistedComplex<F>& x) {
  const auto& q = *x.base;
  TwMorphism<F> id;
  for (auto& [i, objs] : x.entries) {
    auto b = zero_block(q, objs, objs);
    for (std::size_t s = 0; s < objs.size(); ++s) b.at(s, s) = q.identity(objs[s]);
    id.set(i, i, std::move(b));
  }
  return id;
}

template <class F>
bool tw_degrees_ok(const TwMorphism<F>& f, const TwistedComplex<F>& x, const TwistedComplex<F>& y) {
  for (auto& [ij, b] : f.comp) {
    auto& src = x.at(ij.first);
    auto& tgt = y.at(ij.second);
    if (b.rows != tgt.size() || b.cols != src.size()) return false;
    if (!block_has_degree(*x.base, b, src, tgt, ij.first - ij.second + f.degree)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Shift and cone

template <class F>
TwistedComplex<F> tw_shift(const TwistedComplex<F>& x, int n) {
  const auto& k = x.base->field;
  TwistedComplex<F> out;
  out.base = x.base;
  out.extendible = x.extendible;
  out.lo = x.lo - n;
  out.hi = x.hi - n;
  for (auto& [i, objs] : x.entries) out.entries[i - n] = objs;
  for (auto& [ij, b] : x.q) out.set_q(ij.first - n, ij.second - n, block_scale_sign(k, parity_sign(n), b));
  return out;
}

// Position of the source part in cone entry i is first: entry(i) = X(i+1) ++ Y(i).
template <class F>
struct TwCone {
  TwistedComplex<F> cone;
  TwMorphism<F> j;  // Y -> cone, degree 0
  TwMorphism<F> p;  // cone -> X[1], degree 0
};

template <class F>
TwCone<F> tw_cone(const TwMorphism<F>& f, const TwistedComplex<F>& x, const TwistedComplex<F>& y) {
  const auto& q = *x.base;
  const auto& k = q.field;
  if (f.degree != 0) throw Error("tw_cone: morphism must have degree 0");
  if (!is_one_sided(f)) throw Error("tw_cone: morphism must be one-sided");
  if (!tw_differential(f, x, y).is_zero()) throw Error("tw_cone: morphism is not closed");
  TwCone<F> out;
  auto& c = out.cone;
  c.base = x.base;
  c.extendible = x.extendible || y.extendible;
  c.lo = std::min(x.lo - 1, y.lo);
  c.hi = std::max(x.hi - 1, y.hi);
  if (x.empty()) {
    c.lo = y.lo;
    c.hi = y.hi;
  } else if (y.empty()) {
    c.lo = x.lo - 1;
    c.hi = x.hi - 1;
  }
  std::set<int> idx;
  for (auto& [i, _] : x.entries) idx.insert(i - 1);
  for (auto& [i, _] : y.entries) idx.insert(i);
  for (int i : idx) {
    Objects objs = x.at(i + 1);
    objs.insert(objs.end(), y.at(i).begin(), y.at(i).end());
    if (!objs.empty()) c.entries[i] = objs;
  }
  for (int i : idx)
    for (int j : idx) {
      if (j <= i) continue;
      auto& src = c.at(i);
      auto& tgt = c.at(j);
      std::size_t xs = x.at(i + 1).size(), xt = x.at(j + 1).size();
      auto b = zero_block(q, src, tgt);
      auto qx = x.q.find({i + 1, j + 1});
      auto ry = y.q.find({i, j});
      auto fc = f.comp.find({i + 1, j});
      for (std::size_t t = 0; t < tgt.size(); ++t)
        for (std::size_t s = 0; s < src.size(); ++s) {
          bool sx = s < xs, tx = t < xt;
          if (sx && tx && qx != x.q.end()) b.at(t, s) = vec_sub(k, Vec<F>(b.at(t, s).size()), qx->second.at(t, s));
          if (sx && !tx && fc != f.comp.end()) b.at(t, s) = fc->second.at(t - xt, s);
          if (!sx && !tx && ry != y.q.end()) b.at(t, s) = ry->second.at(t - xt, s - xs);
        }
      c.set_q(i, j, std::move(b));
    }
  // structural inclusion / projection
  out.j.degree = 0;
  for (auto& [i, objs] : y.entries) {
    auto b = zero_block(q, objs, c.at(i));
    std::size_t xs = x.at(i + 1).size();
    for (std::size_t s = 0; s < objs.size(); ++s) b.at(xs + s, s) = q.identity(objs[s]);
    out.j.set(i, i, std::move(b));
  }
  out.p.degree = 0;
  for (auto& [i1, objs] : x.entries) {
    int i = i1 - 1;
    auto b = zero_block(q, c.at(i), objs);
    for (std::size_t s = 0; s < objs.size(); ++s) b.at(s, s) = q.identity(objs[s]);
    out.p.set(i, i, std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stupid truncations

template <class F>
TwistedComplex<F> sigma_geq(const TwistedComplex<F>& x, int n) {
  TwistedComplex<F> out;
  out.base = x.base;
  out.lo = std::max(x.lo, n);
  out.hi = x.hi;
  if (out.lo > out.hi) out.lo = out.hi + 1;
  for (auto& [i, objs] : x.entries)
    if (i >= n) out.entries[i] = objs;
  for (auto& [ij, b] : x.q)
    if (ij.first >= n && ij.second >= n) out.q[ij] = b;
  return out;
}

// Identity blocks on the common entries: sigma_{>=n} X -> sigma_{>=m} X for m <= n.
template <class F>
TwMorphism<F> truncation_inclusion(const TwistedComplex<F>& x, int n) {
  return tw_identity(sigma_geq(x, n));
}

template <class F>
struct Truncation {
  TwistedComplex<F> sigma;       // sigma_{>=n} X
  TwistedComplex<F> sigma_prev;  // sigma_{>=n-1} X
  TwistedComplex<F> beta_source; // A_{n-1} placed at index n
  TwMorphism<F> phi_n;           // sigma_{>=n} X -> X
  TwMorphism<F> phi_step;        // sigma_{>=n} X -> sigma_{>=n-1} X
  TwMorphism<F> beta;            // beta_source -> sigma_{>=n} X
};

template <class F>
Truncation<F> stupid_truncate(const TwistedComplex<F>& x, int n) {
  Truncation<F> t;
  t.sigma = sigma_geq(x, n);
  t.sigma_prev = sigma_geq(x, n - 1);
  t.phi_n = truncation_inclusion(x, n);
  t.phi_step = t.phi_n;
  t.beta_source = single_entry(x.base, n, x.at(n - 1));
  t.beta.degree = 0;
  for (auto& [ij, b] : x.q)
    if (ij.first == n - 1) t.beta.set(n, ij.second, b);
  return t;
}

// ---------------------------------------------------------------------------
// Totalization. Tot(X)(C)^n = (+)_i hom(C, A_i)^{n-i}; basis ordered by index i,
// then entry position s, then basis elements of hom(C, A_i[s]) of degree n-i.

struct TotPiece {
  int index = 0;
  std::size_t pos = 0, object = 0, offset = 0;
  std::vector<std::size_t> basis;  // hom basis indices of degree n - index
};

template <class F>
std::vector<TotPiece> tot_layout(const TwistedComplex<F>& x, std::size_t C, int n) {
  std::vector<TotPiece> out;
  std::size_t off = 0;
  for (auto& [i, objs] : x.entries)
    for (std::size_t s = 0; s < objs.size(); ++s) {
      auto b = x.base->in_degree(C, objs[s], n - i);
      if (b.empty()) continue;
      out.push_back({i, s, objs[s], off, b});
      off += b.size();
    }
  return out;
}

inline std::size_t layout_size(const std::vector<TotPiece>& l) { return l.empty() ? 0 : l.back().offset + l.back().basis.size(); }

// degree range of Tot(X)(C) for all C
template <class F>
std::pair<int, int> tot_degree_range(const TwistedComplex<F>& x) {
  int lo = 0, hi = -1;
  bool any = false;
  for (auto& [i, objs] : x.entries)
    for (auto o : objs)
      for (std::size_t c = 0; c < x.base->N(); ++c)
        for (int d : x.base->degrees(c, o)) {
          int n = i + d;
          if (!any) {
            lo = hi = n;
            any = true;
          }
          lo = std::min(lo, n);
          hi = std::max(hi, n);
        }
  return {lo, hi};
}

// Element of Tot(X)(C)^n -> per (index, pos) full hom vectors
template <class F>
std::map<std::pair<int, std::size_t>, Vec<F>> tot_decode(const TwistedComplex<F>& x, std::size_t C, int n, const Vec<F>& v) {
  std::map<std::pair<int, std::size_t>, Vec<F>> out;
  for (auto& pc : tot_layout(x, C, n)) {
    Vec<F> h = x.base->zero(C, pc.object);
    bool nz = false;
    for (std::size_t b = 0; b < pc.basis.size(); ++b) {
      h[pc.basis[b]] = v[pc.offset + b];
      nz = nz || !x.base->field.is_zero(h[pc.basis[b]]);
    }
    if (nz) out[{pc.index, pc.pos}] = std::move(h);
  }
  return out;
}

// Adds the hom element h in hom(C, A_i[s]) (homogeneous of degree n - i) to v.
template <class F>
void tot_accumulate(const F& k, const std::vector<TotPiece>& layout, Vec<F>& v, int i, std::size_t s, const Vec<F>& h, int sign = 1) {
  for (auto& pc : layout) {
    if (pc.index != i || pc.pos != s) continue;
    for (std::size_t b = 0; b < pc.basis.size(); ++b) {
      auto& e = h[pc.basis[b]];
      if (!k.is_zero(e)) v[pc.offset + b] = sign > 0 ? k.add(v[pc.offset + b], e) : k.sub(v[pc.offset + b], e);
    }
    return;
  }
  if (!vec_is_zero(k, h)) throw Error("tot_accumulate: element outside the layout");
}

template <class F>
DgModule<F> totalize(const TwistedComplex<F>& x) {
  const auto& q = *x.base;
  const auto& k = q.field;
  auto m = zero_module(x.base);
  const std::size_t N = q.N();
  auto [lo, hi] = tot_degree_range(x);
  std::vector<std::map<int, std::vector<TotPiece>>> lay(N);
  for (std::size_t C = 0; C < N; ++C)
    for (int n = lo - 1; n <= hi + 1; ++n) {
      lay[C][n] = tot_layout(x, C, n);
      m.values[C].set_dim(n, layout_size(lay[C][n]));
    }
  for (std::size_t C = 0; C < N; ++C)
    for (int n = lo; n < hi; ++n) {
      auto& src = lay[C][n];
      auto& tgt = lay[C][n + 1];
      Matrix<F> d(layout_size(tgt), layout_size(src));
      for (auto& pc : src)
        for (std::size_t b = 0; b < pc.basis.size(); ++b) {
          Vec<F> img(layout_size(tgt));
          auto xv = q.basis_vec(C, pc.object, pc.basis[b]);
          tot_accumulate(k, tgt, img, pc.index, pc.pos, q.diff(C, pc.object, xv), parity_sign(pc.index));
          for (auto& [ij, blk] : x.q) {
            if (ij.first != pc.index) continue;
            auto& tobjs = x.at(ij.second);
            for (std::size_t t = 0; t < tobjs.size(); ++t)
              tot_accumulate(k, tgt, img, ij.second, t, q.compose(C, pc.object, tobjs[t], blk.at(t, pc.pos), xv));
          }
          for (std::size_t r = 0; r < img.size(); ++r)
            if (!k.is_zero(img[r])) d.set(k, r, pc.offset + b, img[r]);
        }
      m.values[C].set_diff(n, std::move(d));
    }
  // rho(f)(x) = (-1)^{n|f|} x o f for f in hom(C', C)
  for (std::size_t C2 = 0; C2 < N; ++C2)
    for (std::size_t C = 0; C < N; ++C)
      for (std::size_t fi = 0; fi < q.hom(C2, C).size(); ++fi) {
        int df = q.hom(C2, C).basis[fi].degree;
        auto f = q.basis_vec(C2, C, fi);
        GradedMap<F> rho;
        rho.degree = df;
        for (int n = lo; n <= hi; ++n) {
          auto& src = lay[C][n];
          if (n + df < lo - 1 || n + df > hi + 1) continue;
          auto tgt = tot_layout(x, C2, n + df);
          if (src.empty() || tgt.empty()) continue;
          Matrix<F> mat(layout_size(tgt), layout_size(src));
          int sg = parity_sign(static_cast<long long>(n) * df);
          for (auto& pc : src)
            for (std::size_t b = 0; b < pc.basis.size(); ++b) {
              Vec<F> img(layout_size(tgt));
              tot_accumulate(k, tgt, img, pc.index, pc.pos, q.compose(C2, C, pc.object, q.basis_vec(C, pc.object, pc.basis[b]), f), sg);
              for (std::size_t r = 0; r < img.size(); ++r)
                if (!k.is_zero(img[r])) mat.set(k, r, pc.offset + b, img[r]);
            }
          rho.set(n, std::move(mat));
        }
        m.action[C2 * N + C][fi] = std::move(rho);
      }
  return m;
}

// Tot(f)(x) = sum_j f_i^j o x
template <class F>
ModuleMap<F> totalize_map(const TwMorphism<F>& f, const TwistedComplex<F>& x, const TwistedComplex<F>& y) {
  const auto& q = *x.base;
  const auto& k = q.field;
  ModuleMap<F> out;
  out.degree = f.degree;
  auto [lo, hi] = tot_degree_range(x);
  for (std::size_t C = 0; C < q.N(); ++C) {
    GradedMap<F> g;
    g.degree = f.degree;
    for (int n = lo; n <= hi; ++n) {
      auto src = tot_layout(x, C, n);
      auto tgt = tot_layout(y, C, n + f.degree);
      if (src.empty() || tgt.empty()) continue;
      Matrix<F> mat(layout_size(tgt), layout_size(src));
      for (auto& pc : src)
        for (std::size_t b = 0; b < pc.basis.size(); ++b) {
          Vec<F> img(layout_size(tgt));
          auto xv = q.basis_vec(C, pc.object, pc.basis[b]);
          for (auto& [ij, blk] : f.comp) {
            if (ij.first != pc.index) continue;
            auto& tobjs = y.at(ij.second);
            for (std::size_t t = 0; t < tobjs.size(); ++t) tot_accumulate(k, tgt, img, ij.second, t, q.compose(C, pc.object, tobjs[t], blk.at(t, pc.pos), xv));
          }
          for (std::size_t r = 0; r < img.size(); ++r)
            if (!k.is_zero(img[r])) mat.set(k, r, pc.offset + b, img[r]);
        }
      g.set(n, std::move(mat));
    }
    out.comp.push_back(std::move(g));
  }
  return out;
}

// Module map Tot(X) -> M of degree p from Yoneda data m_{i,s} in M(A_i[s])^{i+p}:
//   phi(x) = (-1)^{(i+p)|x|} rho_M(x)(m_{i,s}).
template <class F>
using YonedaData = std::map<std::pair<int, std::size_t>, Vec<F>>;

template <class F>
ModuleMap<F> map_from_yoneda_data(const TwistedComplex<F>& x, const DgModule<F>& m, int p, const YonedaData<F>& data) {
  const auto& q = *x.base;
  const auto& k = q.field;
  ModuleMap<F> out;
  out.degree = p;
  auto [lo, hi] = tot_degree_range(x);
  for (std::size_t C = 0; C < q.N(); ++C) {
    GradedMap<F> g;
    g.degree = p;
    for (int n = lo; n <= hi; ++n) {
      auto src = tot_layout(x, C, n);
      std::size_t rows = m.values[C].dim(n + p);
      if (src.empty() || !rows) continue;
      Matrix<F> mat(rows, layout_size(src));
      for (auto& pc : src) {
        auto it = data.find({pc.index, pc.pos});
        if (it == data.end()) continue;
        int e = n - pc.index;
        for (std::size_t b = 0; b < pc.basis.size(); ++b) {
          auto rho = m.act(C, pc.object, pc.basis[b]);
          auto img = apply(k, component(rho, m.values[pc.object], m.values[C], pc.index + p), it->second);
          if (parity_sign(static_cast<long long>(pc.index + p) * e) < 0) img = vec_sub(k, Vec<F>(img.size()), img);
          for (std::size_t r = 0; r < rows; ++r)
            if (!k.is_zero(img[r])) mat.set(k, r, pc.offset + b, img[r]);
        }
      }
      g.set(n, std::move(mat));
    }
    out.comp.push_back(std::move(g));
  }
  return out;
}

// Tot(cone f) against cone(Tot f): cone(Tot f)(C)^n = Tot X(C)^{n+1} + Tot Y(C)^n is
// identified with Tot(cone f)(C)^n by sending the X piece (i, s) to cone piece
// (i-1, s) and the Y piece (i, s) to (i, |X_{i+1}| + s). Differentials and all
// action maps must agree exactly under this relabelling.
template <class F>
Report compare_tot_cone(const TwMorphism<F>& f, const TwistedComplex<F>& x, const TwistedComplex<F>& y) {
  const auto& q = *x.base;
  const auto& k = q.field;
  auto tc = tw_cone(f, x, y).cone;
  auto a = totalize(tc);
  auto tx = totalize(x), ty = totalize(y);
  auto b = module_cone(totalize_map(f, x, y), tx, ty).cone;
  // perm[C][n][row of b] = row of a
  auto perm = [&](std::size_t C, int n) {
    std::vector<std::size_t> out;
    auto la = tot_layout(tc, C, n);
    auto find = [&](int i, std::size_t s) -> const TotPiece& {
      for (auto& pc : la)
        if (pc.index == i && pc.pos == s) return pc;
      throw Error("compare_tot_cone: missing piece");
    };
    for (auto& pc : tot_layout(x, C, n + 1)) {
      auto& t = find(pc.index - 1, pc.pos);
      for (std::size_t b2 = 0; b2 < pc.basis.size(); ++b2) out.push_back(t.offset + b2);
    }
    for (auto& pc : tot_layout(y, C, n)) {
      auto& t = find(pc.index, x.at(pc.index + 1).size() + pc.pos);
      for (std::size_t b2 = 0; b2 < pc.basis.size(); ++b2) out.push_back(t.offset + b2);
    }
    return out;
  };
  auto relabel = [&](const Matrix<F>& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    Matrix<F> out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (auto& [c, v] : m.row(r)) out.set(k, rows[r], cols[c], v);
    return out;
  };
  int lo = std::min(a.lo(), b.lo()) - 1, hi = std::max(a.hi(), b.hi()) + 1;
  for (std::size_t C = 0; C < q.N(); ++C)
    for (int n = lo; n <= hi; ++n) {
      if (a.values[C].dim(n) != b.values[C].dim(n)) return Report::fail("dimension mismatch at " + q.objects[C] + " degree " + std::to_string(n));
      if (!a.values[C].dim(n)) continue;
      auto pn = perm(C, n), pn1 = perm(C, n + 1);
      if (!(a.values[C].diff(n) == relabel(b.values[C].diff(n), pn1, pn))) return Report::fail("differential mismatch at " + q.objects[C] + " degree " + std::to_string(n));
    }
  for (std::size_t C2 = 0; C2 < q.N(); ++C2)
    for (std::size_t C = 0; C < q.N(); ++C)
      for (std::size_t fi = 0; fi < q.hom(C2, C).size(); ++fi) {
        int df = q.hom(C2, C).basis[fi].degree;
        for (int n = lo; n <= hi; ++n) {
          auto ma = component(a.act(C2, C, fi), a.values[C], a.values[C2], n);
          auto mb = component(b.act(C2, C, fi), b.values[C], b.values[C2], n);
          if (!(ma == relabel(mb, perm(C2, n + df), perm(C, n)))) return Report::fail("action mismatch for " + q.hom(C2, C).basis[fi].name + " at degree " + std::to_string(n));
        }
      }
  return Report::pass();
}

// ---------------------------------------------------------------------------
// Hom complexes of twisted complexes.
//
// The full complex has every slot (i, j, t, s) in every hom degree. The
// one-sided model keeps slots of hom degree s = i - j + p < 0 in full, only
// the cocycles of slots with s = 0, and nothing with s > 0; it is closed under
// the differential and composition, and its closed degree-0 elements are the
// closed one-sided morphisms.

template <class F>
struct TwSlot {
  int i = 0, j = 0;
  std::size_t s = 0, t = 0;  // source / target positions
  std::size_t src = 0, tgt = 0;
  int hdeg = 0;
  bool cocycles = false;
  std::size_t offset = 0, size = 0;
};

template <class F>
struct TwHomComplex {
  TwistedComplex<F> x, y;
  bool full = false;
  Complex<F> complex;
  std::map<int, std::vector<TwSlot<F>>> slots;  // per degree p
  // cocycle bases of hom(a,b)^0 (degree-0 coordinates) with the free columns that
  // serve as coordinates
  mutable std::map<std::pair<std::size_t, std::size_t>, std::pair<std::vector<Vec<F>>, std::vector<std::size_t>>> z0;

  std::size_t dim(int p) const { return complex.dim(p); }

  TwMorphism<F> decode(int p, const Vec<F>& v) const {
    const auto& q = *x.base;
    TwMorphism<F> f;
    f.degree = p;
    auto it = slots.find(p);
    if (it == slots.end()) return f;
    std::map<std::pair<int, int>, Block<F>> acc;
    for (auto& sl : it->second) {
      auto bi = acc.find({sl.i, sl.j});
      if (bi == acc.end()) bi = acc.emplace(std::make_pair(sl.i, sl.j), zero_block(q, x.at(sl.i), y.at(sl.j))).first;
      auto& cell = bi->second.at(sl.t, sl.s);
      if (sl.cocycles) {
        auto& zb = z0_basis(sl.src, sl.tgt).first;
        Vec<F> d0(q.in_degree(sl.src, sl.tgt, 0).size());
        for (std::size_t b = 0; b < sl.size; ++b) d0 = vec_add(q.field, d0, vec_scale(q.field, v[sl.offset + b], zb[b]));
        cell = vec_add(q.field, cell, q.from_degree(sl.src, sl.tgt, 0, d0));
      } else {
        auto idx = q.in_degree(sl.src, sl.tgt, sl.hdeg);
        for (std::size_t b = 0; b < sl.size; ++b) cell[idx[b]] = v[sl.offset + b];
      }
    }
    for (auto& [ij, b] : acc) f.set(ij.first, ij.second, std::move(b));
    return f;
  }

  // Throws if f does not lie in this complex.
  Vec<F> encode(const TwMorphism<F>& f) const {
    const auto& q = *x.base;
    const auto& k = q.field;
    const int p = f.degree;
    Vec<F> v(dim(p));
    std::set<std::tuple<int, int, std::size_t, std::size_t>> covered;
    auto it = slots.find(p);
    if (it != slots.end())
      for (auto& sl : it->second) {
        auto fc = f.comp.find({sl.i, sl.j});
        if (fc == f.comp.end()) continue;
        auto& cell = fc->second.at(sl.t, sl.s);
        covered.insert({sl.i, sl.j, sl.s, sl.t});
        if (sl.cocycles) {
          auto d0 = q.to_degree(sl.src, sl.tgt, 0, cell);
          if (!vec_is_zero(k, apply(k, q.hom_complex(sl.src, sl.tgt).diff(0), d0))) throw Error("tw hom encode: slot component is not a cocycle");
          auto& fc2 = z0_basis(sl.src, sl.tgt).second;
          for (std::size_t b = 0; b < sl.size; ++b) v[sl.offset + b] = d0[fc2[b]];
        } else {
          auto idx = q.in_degree(sl.src, sl.tgt, sl.hdeg);
          for (std::size_t b = 0; b < sl.size; ++b) v[sl.offset + b] = cell[idx[b]];
        }
      }
    for (auto& [ij, b] : f.comp)
      for (std::size_t t = 0; t < b.rows; ++t)
        for (std::size_t s = 0; s < b.cols; ++s)
          if (!vec_is_zero(k, b.at(t, s)) && !covered.count({ij.first, ij.second, s, t})) throw Error("tw hom encode: morphism has a component outside the complex");
    if (!(decode(p, v) == f)) throw Error("tw hom encode: morphism is not in the complex");
    return v;
  }

  const std::pair<std::vector<Vec<F>>, std::vector<std::size_t>>& z0_basis(std::size_t a, std::size_t b) const {
    auto it = z0.find({a, b});
    if (it != z0.end()) return it->second;
    const auto& q = *x.base;
    auto e = rref(q.field, q.hom_complex(a, b).diff(0));
    auto basis = kernel_from_rref(q.field, e);
    std::vector<char> piv(e.cols, 0);
    for (auto c : e.pivots) piv[c] = 1;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < e.cols; ++c)
      if (!piv[c]) free.push_back(c);
    return z0[{a, b}] = {basis, free};
  }
};

template <class F>
TwHomComplex<F> tw_hom_complex(const TwistedComplex<F>& x, const TwistedComplex<F>& y, bool full = false) {
  const auto& q = *x.base;
  const auto& k = q.field;
  TwHomComplex<F> h;
  h.x = x;
  h.y = y;
  h.full = full;
  std::set<int> ps;
  for (auto& [i, so] : x.entries)
    for (auto& [j, to] : y.entries)
      for (auto a : so)
        for (auto b : to)
          for (int d : q.degrees(a, b))
            if (full || d <= 0) ps.insert(d - i + j);
  if (ps.empty()) return h;
  int plo = *ps.begin() - 1, phi = *ps.rbegin() + 1;
  for (int p = plo; p <= phi; ++p) {
    auto& sl = h.slots[p];
    std::size_t off = 0;
    for (auto& [i, so] : x.entries)
      for (auto& [j, to] : y.entries) {
        int sdeg = i - j + p;
        if (!full && sdeg > 0) continue;
        for (std::size_t t = 0; t < to.size(); ++t)
          for (std::size_t s = 0; s < so.size(); ++s) {
            TwSlot<F> slot{i, j, s, t, so[s], to[t], sdeg, !full && sdeg == 0, off, 0};
            slot.size = slot.cocycles ? h.z0_basis(so[s], to[t]).first.size() : q.in_degree(so[s], to[t], sdeg).size();
            if (!slot.size) continue;
            off += slot.size;
            sl.push_back(slot);
          }
      }
    h.complex.set_dim(p, off);
  }
  for (int p = plo; p < phi; ++p) {
    std::size_t n = h.dim(p), m = h.dim(p + 1);
    if (!n || !m) continue;
    Matrix<F> d(m, n);
    for (std::size_t c = 0; c < n; ++c) {
      auto img = h.encode(tw_differential(h.decode(p, unit_vector(k, n, c)), x, y));
      for (std::size_t r = 0; r < m; ++r)
        if (!k.is_zero(img[r])) d.set(k, r, c, img[r]);
    }
    h.complex.set_diff(p, std::move(d));
  }
  return h;
}

// ---------------------------------------------------------------------------
// One-sided reduction: for f with d(f) one-sided, find alpha with f - d(alpha)
// one-sided. Entries i are processed from the top down, and for each i the
// violating target indices k from the bottom up; the defect at (i,k) is then a
// positive-degree cocycle and is killed by a coboundary.

template <class F>
struct OneSidedResult {
  TwMorphism<F> g, alpha;
  std::map<int, int> n_i;  // lowest processed target index per source index
};

struct NotReducible : Error {
  int i, k, degree;
  NotReducible(int i_, int k_, int deg) : Error("slot (" + std::to_string(i_) + "," + std::to_string(k_) + ") has a non-exact defect in degree " + std::to_string(deg)), i(i_), k(k_), degree(deg) {}
};

template <class F>
OneSidedResult<F> make_one_sided(const TwMorphism<F>& f, const TwistedComplex<F>& x, const TwistedComplex<F>& y) {
  const auto& q = *x.base;
  const auto& k = q.field;
  const int p = f.degree;
  if (!is_one_sided(tw_differential(f, x, y))) throw Error("make_one_sided: d(f) is not one-sided");
  OneSidedResult<F> res;
  res.alpha.degree = p - 1;
  auto g = f;
  auto xi = x.indices();
  auto yi = y.indices();
  for (auto it = xi.rbegin(); it != xi.rend(); ++it) {
    int i = *it;
    for (int kk : yi) {
      int sdeg = i - kk + p;
      if (sdeg <= 0) break;
      auto gc = g.comp.find({i, kk});
      if (gc == g.comp.end()) continue;
      if (!res.n_i.count(i)) res.n_i[i] = kk;
      auto& src = x.at(i);
      auto& tgt = y.at(kk);
      auto a = zero_block(q, src, tgt);
      for (std::size_t t = 0; t < tgt.size(); ++t)
        for (std::size_t s = 0; s < src.size(); ++s) {
          auto& h = gc->second.at(t, s);
          if (vec_is_zero(k, h)) continue;
          auto hc = q.hom_complex(src[s], tgt[t]);
          auto sol = solve_particular(k, hc.diff(sdeg - 1), q.to_degree(src[s], tgt[t], sdeg, h));
          if (!sol) throw NotReducible(i, kk, sdeg);
          auto beta = q.from_degree(src[s], tgt[t], sdeg - 1, *sol);
          a.at(t, s) = parity_sign(kk) > 0 ? beta : vec_sub(k, Vec<F>(beta.size()), beta);
        }
      TwMorphism<F> step;
      step.degree = p - 1;
      step.set(i, kk, a);
      res.alpha = tw_add(k, res.alpha, step, x, y);
      g = tw_add(k, f, tw_differential(res.alpha, x, y), x, y, -1);
    }
  }
  res.g = std::move(g);
  if (!is_one_sided(res.g)) throw Error("make_one_sided: result is not one-sided");
  return res;
}

// ---------------------------------------------------------------------------
// Functoriality along strict dg-functors

template <class F>
Block<F> map_block(const DgFunctor<F>& fn, const Block<F>& b, const Objects& src, const Objects& tgt) {
  Block<F> out;
  out.rows = b.rows;
  out.cols = b.cols;
  for (std::size_t t = 0; t < tgt.size(); ++t)
    for (std::size_t s = 0; s < src.size(); ++s) out.cells.push_back(fn.apply_hom(src[s], tgt[t], b.at(t, s)));
  return out;
}

template <class F>
TwistedComplex<F> tw_map(const DgFunctor<F>& fn, const TwistedComplex<F>& x) {
  TwistedComplex<F> out;
  out.base = fn.target;
  out.lo = x.lo;
  out.hi = x.hi;
  out.extendible = x.extendible;
  for (auto& [i, objs] : x.entries) {
    Objects o;
    for (auto a : objs) o.push_back(fn.on_objects[a]);
    out.entries[i] = o;
  }
  for (auto& [ij, b] : x.q) out.set_q(ij.first, ij.second, map_block(fn, b, x.at(ij.first), x.at(ij.second)));
  return out;
}

template <class F>
TwMorphism<F> tw_map(const DgFunctor<F>& fn, const TwMorphism<F>& f, const TwistedComplex<F>& x, const TwistedComplex<F>& y) {
  TwMorphism<F> out;
  out.degree = f.degree;
  for (auto& [ij, b] : f.comp) out.set(ij.first, ij.second, map_block(fn, b, x.at(ij.first), y.at(ij.second)));
  return out;
}

// ---------------------------------------------------------------------------
// Iterated cones: X_M = (A_M at M), X_{n-1} = cone(beta_n : Q_{n-1} at n -> X_n)

template <class F>
struct ConeStep {
  int n = 0;
  Objects objects;       // Q_{n-1}
  TwMorphism<F> beta;    // from single_entry(n, objects) to X_n
};

template <class F>
std::vector<TwistedComplex<F>> assemble_from_cones(const CategoryPtr<F>& q, int top, const Objects& seed, const std::vector<ConeStep<F>>& steps) {
  std::vector<TwistedComplex<F>> xs{single_entry(q, top, seed)};
  int expect = top;
  for (auto& st : steps) {
    if (st.n != expect) throw Error("assemble_from_cones: step " + std::to_string(st.n) + " out of order (expected " + std::to_string(expect) + ")");
    auto src = single_entry(q, st.n, st.objects);
    auto c = tw_cone(st.beta, src, xs.back());
    xs.push_back(std::move(c.cone));
    --expect;
  }
  return xs;
}

}  // namespace dgkit
