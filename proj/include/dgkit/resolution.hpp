#pragma once

// Resolution of a dg-module by totalizations of one-sided twisted complexes built
// from representables, reconstruction, and the comparison checks built on top.
//
// Step n starts from alpha_n : Tot X_n -> M with H^i(alpha_n) iso for i > n and epi
// at n. With C_n = cone(alpha_n)[-1] (so C_n^k = Tot X_n^k + M^{k-1}) the classes of
// H^n(C_n) are covered by representables B = Q_{n-1}; a generator z_g = (x_g, m_g)
// gives the component x_g of b_n : B[-n] -> X_n, X_{n-1} = cone(b_n), and
// alpha_{n-1} extends alpha_n by c_g = -m_g, so that d c_g = alpha_n(x_g).

#include <sstream>
#include <string>
#include <vector>

#include "holim.hpp"
#include "tstructure.hpp"

namespace dgkit {

struct StepVerdict {
  int degree = 0;
  bool expect_iso = false;  // otherwise epi
  bool ok = false;
};

template <class F>
struct CoverStep {
  Objects objects;
  std::vector<Vec<F>> cocycles;  // z_g in M(B_g)^n
  ModuleMap<F> map;              // Tot(B at index n) -> M
  bool epi = false;
};

// Covers H^n(M) by representables; empty when H^n(M) = 0.
template <class F>
CoverStep<F> projective_cover_step(const DgModule<F>& m, int n, const std::shared_ptr<const H0Category<F>>& h0) {
  const auto& q = m.base;
  const auto& k = q->field;
  auto hm = module_cohomology(m, n, h0);
  CoverStep<F> out;
  std::vector<std::vector<Vec<F>>> all(q->N());
  for (std::size_t a = 0; a < q->N(); ++a)
    for (std::size_t i = 0; i < hm.module.dims[a]; ++i) all[a].push_back(unit_vector(k, hm.module.dims[a], i));
  YonedaData<F> data;
  for (auto& g : greedy_generators(hm.module, all)) {
    Vec<F> z(m.values[g.object].dim(n));
    auto& reps = hm.cohomology[g.object].reps;
    for (std::size_t r = 0; r < reps.size(); ++r)
      if (!k.is_zero(g.element[r])) z = vec_add(k, z, vec_scale(k, g.element[r], reps[r]));
    data[{n, out.objects.size()}] = z;
    out.objects.push_back(g.object);
    out.cocycles.push_back(std::move(z));
  }
  auto src = single_entry(q, n, out.objects);
  out.map = map_from_yoneda_data(src, m, 0, data);
  out.epi = module_map_verdict(out.map, totalize(src), m, n).epi;
  return out;
}

template <class F>
struct ResolutionStep {
  int n = 0;
  TwistedComplex<F> x;        // X_n
  ModuleMap<F> alpha;         // Tot X_n -> M
  std::vector<StepVerdict> verdicts;
  Objects objects;            // Q_{n-1}, placed at index n-1 of X_{n-1}
  TwMorphism<F> beta;         // b_n : single_entry(n, objects) -> X_n
  std::vector<Vec<F>> c;      // c_g in M(B_g)^{n-1}
  bool soundness = true;      // d c_n = alpha_n Tot(b_n), alpha_{n-1} Tot(j) = alpha_n, closedness
};

template <class F>
struct ResolutionTrace {
  DgModule<F> target;
  int top = 0;
  int window = 0;
  bool acyclic = false;
  Objects seed;  // Q_top
  std::vector<ResolutionStep<F>> steps;
  TwistedComplex<F> x;  // X_{top - W}
  ModuleMap<F> alpha;
  std::vector<StepVerdict> final_verdicts;
  int lo() const { return top - window; }
  bool ok() const {
    for (auto& s : steps) {
      if (!s.soundness) return false;
      for (auto& v : s.verdicts)
        if (!v.ok) return false;
    }
    for (auto& v : final_verdicts)
      if (!v.ok) return false;
    return true;
  }
  std::vector<ConeStep<F>> cone_steps() const {
    std::vector<ConeStep<F>> out;
    for (auto& s : steps) out.push_back({s.n, s.objects, s.beta});
    return out;
  }
};

template <class F>
std::vector<StepVerdict> step_verdicts(const ModuleMap<F>& alpha, const DgModule<F>& tot, const DgModule<F>& m, int n) {
  std::vector<StepVerdict> out;
  int hi = std::max(tot.hi(), m.hi()) + 1;
  for (int i = n; i <= hi; ++i) {
    auto v = module_map_verdict(alpha, tot, m, i);
    out.push_back({i, i > n, i > n ? v.iso : v.epi});
  }
  return out;
}

template <class F>
std::optional<int> top_cohomology(const DgModule<F>& m) {
  for (int i = m.hi(); i >= m.lo(); --i)
    if (module_h_nonzero(m, i)) return i;
  return std::nullopt;
}

template <class F>
ResolutionTrace<F> resolve(const DgModule<F>& m, int window) {
  const auto& q = m.base;
  const auto& k = q->field;
  if (window < 0) throw Error("resolve: window must be nonnegative");
  if (auto r = validate_module(m); !r) throw Error("resolve: invalid module (" + r.message + ")");
  require_hlc(q);
  auto h0 = std::make_shared<const H0Category<F>>(h0_category(*q));
  for (int i = m.lo(); i <= m.hi(); ++i)
    if (!fp_presentation(module_cohomology(m, i, h0).module)) throw HypothesisFailure("H^" + std::to_string(i) + " of the module is not finitely presented");

  ResolutionTrace<F> tr;
  tr.target = m;
  tr.window = window;
  auto top = top_cohomology(m);
  if (!top) {
    tr.acyclic = true;
    tr.top = 0;
    tr.x = TwistedComplex<F>{q, {}, {}, -window, 0, false};
    tr.alpha = zero_module_map<F>(q->N(), 0);
    return tr;
  }
  tr.top = *top;
  auto cover = projective_cover_step(m, tr.top, h0);
  if (!cover.epi) throw Error("resolve: generators do not cover the top cohomology");
  tr.seed = cover.objects;
  auto x = single_entry(q, tr.top, cover.objects);
  YonedaData<F> data;
  for (std::size_t g = 0; g < cover.cocycles.size(); ++g) data[{tr.top, g}] = cover.cocycles[g];
  auto alpha = cover.map;

  for (int n = tr.top; n > tr.top - window; --n) {
    ResolutionStep<F> st;
    st.n = n;
    auto tot = totalize(x);
    st.verdicts = step_verdicts(alpha, tot, m, n);
    auto cn = module_cone(alpha, tot, m);
    auto c = shift_module(cn.cone, -1);
    auto cov = projective_cover_step(c, n, h0);
    st.objects = cov.objects;
    auto src = single_entry(q, n, st.objects);
    st.beta.degree = 0;
    std::map<int, Block<F>> blocks;
    for (std::size_t g = 0; g < st.objects.size(); ++g) {
      std::size_t B = st.objects[g];
      std::size_t tdim = tot.values[B].dim(n);
      Vec<F> xg(cov.cocycles[g].begin(), cov.cocycles[g].begin() + static_cast<std::ptrdiff_t>(tdim));
      for (auto& [jt, h] : tot_decode(x, B, n, xg)) {
        auto [j, t] = jt;
        auto it = blocks.find(j);
        if (it == blocks.end()) it = blocks.emplace(j, zero_block(*q, st.objects, x.at(j))).first;
        it->second.at(t, g) = h;
      }
      // z_g is a cocycle of C_n: d m_g = -alpha_n(x_g), so c_g = -m_g
      Vec<F> cg(cov.cocycles[g].begin() + static_cast<std::ptrdiff_t>(tdim), cov.cocycles[g].end());
      cg = vec_scale(k, k.from_int(-1), cg);
      auto ax = apply(k, component(alpha.comp[B], tot.values[B], m.values[B], n), xg);
      if (!(apply(k, m.values[B].diff(n - 1), cg) == ax)) throw Error("resolve: d c_g != alpha_n(x_g)");
      st.c.push_back(std::move(cg));
    }
    for (auto& [j, b] : blocks) st.beta.set(n, j, std::move(b));
    if (!tw_differential(st.beta, src, x).is_zero()) throw Error("resolve: b_n is not closed");
    YonedaData<F> cdata;
    for (std::size_t g = 0; g < st.c.size(); ++g) cdata[{n, g}] = st.c[g];
    auto cmap = map_from_yoneda_data(src, m, -1, cdata);
    auto tsrc = totalize(src);
    bool sound = module_map_differential(k, cmap, tsrc, m) == compose_module_maps(k, alpha, totalize_map(st.beta, src, x), tsrc, tot, m);
    auto cone = tw_cone(st.beta, src, x);
    for (std::size_t g = 0; g < st.c.size(); ++g) data[{n - 1, g}] = st.c[g];
    auto xn = cone.cone;
    auto tn = totalize(xn);
    auto an = map_from_yoneda_data(xn, m, 0, data);
    sound = sound && is_closed_module_map(k, an, tn, m);
    sound = sound && compose_module_maps(k, an, totalize_map(cone.j, x, xn), tot, tn, m) == alpha;
    st.soundness = sound;
    st.x = std::move(x);
    st.alpha = std::move(alpha);
    tr.steps.push_back(std::move(st));
    x = std::move(xn);
    alpha = std::move(an);
  }
  x.lo = tr.lo();
  x.hi = tr.top;
  x.extendible = true;
  tr.final_verdicts = step_verdicts(alpha, totalize(x), m, tr.lo());
  tr.x = std::move(x);
  tr.alpha = std::move(alpha);
  return tr;
}

// Sequence Tot X_top -> Tot X_{top-1} -> ... with thresholds n and target maps alpha_n.
template <class F>
struct ResolutionSequence {
  ModuleSequence<F> seq;
  std::vector<int> thresholds;
  std::vector<ModuleMap<F>> alphas;
};

template <class F>
ResolutionSequence<F> resolution_sequence(const ResolutionTrace<F>& tr) {
  ResolutionSequence<F> out;
  std::vector<const TwistedComplex<F>*> xs;
  for (auto& st : tr.steps) {
    xs.push_back(&st.x);
    out.thresholds.push_back(st.n);
    out.alphas.push_back(st.alpha);
  }
  xs.push_back(&tr.x);
  out.thresholds.push_back(tr.lo());
  out.alphas.push_back(tr.alpha);
  for (auto* x : xs) out.seq.terms.push_back(totalize(*x));
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) out.seq.maps.push_back(totalize_map(tw_identity(*xs[i]), *xs[i], *xs[i + 1]));
  out.seq.stabilized_from = out.seq.maps.size();
  return out;
}

// ---------------------------------------------------------------------------

template <class F>
struct Reconstruction {
  ResolutionTrace<F> trace;
  TwistedComplex<F> x;
  bool assembled_matches = false;       // assemble_from_cones reproduces the trace
  std::vector<int> acyclic_degrees;     // H^i(cone alpha) = 0 checked here
  std::vector<int> failed_degrees;
  bool ok() const { return assembled_matches && failed_degrees.empty() && trace.ok(); }
};

template <class F>
Reconstruction<F> reconstruct(const DgModule<F>& m, int window) {
  Reconstruction<F> out{resolve(m, window), {}, false, {}, {}};
  auto& tr = out.trace;
  const auto& q = m.base;
  if (tr.acyclic) {
    out.x = tr.x;
    out.assembled_matches = true;
    for (int i = m.lo(); i <= m.hi(); ++i) out.acyclic_degrees.push_back(i);
    return out;
  }
  auto xs = assemble_from_cones(q, tr.top, tr.seed, tr.cone_steps());
  out.x = xs.back();
  out.x.lo = tr.x.lo;
  out.x.hi = tr.x.hi;
  out.x.extendible = true;
  out.assembled_matches = out.x == tr.x;
  auto tot = totalize(out.x);
  auto cn = module_cone(tr.alpha, tot, m).cone;
  int hi = std::max(tot.hi(), m.hi()) + 1;
  for (int i = tr.lo() + 1; i <= hi; ++i) {
    out.acyclic_degrees.push_back(i);
    if (module_h_nonzero(cn, i)) out.failed_degrees.push_back(i);
  }
  return out;
}

// Cohomology dims of M over [lo, hi] for every object, flattened.
template <class F>
std::vector<std::size_t> window_dims(const DgModule<F>& m, int lo, int hi) {
  std::vector<std::size_t> out;
  for (int i = lo; i <= hi; ++i)
    for (auto d : module_cohomology_dims(m, i)) out.push_back(d);
  return out;
}

// ---------------------------------------------------------------------------

struct QffRow {
  int degree = 0;
  std::size_t tw = 0, mod = 0;
};

struct QffReport {
  std::vector<QffRow> rows;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// dim H^p of the twisted hom complex against the module hom complex of the
// totalizations, for p in [lo, hi].
template <class F>
QffReport compare_homs(const TwistedComplex<F>& x, const TwistedComplex<F>& y, int lo, int hi) {
  const auto& k = x.base->field;
  QffReport rep;
  auto h = tw_hom_complex(x, y);
  auto tx = totalize(x), ty = totalize(y);
  ModuleHomComplex<F> mh;
  bool any = !tx.empty() && !ty.empty();
  if (any) mh = module_hom_complex(tx, ty, std::pair<int, int>{lo, hi});
  for (int p = lo; p <= hi; ++p) {
    QffRow r{p, cohomology(k, h.complex, p).dim(), any ? cohomology(k, mh.complex, p).dim() : 0};
    if (r.tw != r.mod) rep.mismatches.push_back("degree " + std::to_string(p) + ": twisted " + std::to_string(r.tw) + " vs module " + std::to_string(r.mod));
    rep.rows.push_back(r);
  }
  return rep;
}

template <class F>
QffReport verify_quasi_ff(const CategoryPtr<F>& q, const std::vector<std::pair<TwistedComplex<F>, TwistedComplex<F>>>& pairs, int lo, int hi) {
  require_hlc(q);
  QffReport all;
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    auto r = compare_homs(pairs[s].first, pairs[s].second, lo, hi);
    for (auto& row : r.rows) all.rows.push_back(row);
    for (auto& mm : r.mismatches) all.mismatches.push_back("pair " + std::to_string(s) + " " + mm);
  }
  return all;
}

// ---------------------------------------------------------------------------
// Comparison on window-bounded hfp modules:
//  (a) aisle verdicts of M and of Tot X agree in the reliable sub-window,
//  (b) H0 homs agree for sampled pairs: H0 tw_hom(X_M, X_N), H0 Hom(Tot X_M, Tot X_N)
//      and H0 Hom(Tot X_M, N), with X_N resolved two steps deeper,
//  (c) reconstruct certifies a quasi-isomorphism in the window.

template <class F>
CheckReport verify_comparison(const CategoryPtr<F>& q, const std::vector<DgModule<F>>& samples, int window) {
  require_hlc(q);
  const auto& k = q->field;
  CheckReport rep;
  rep.notes.push_back("countable coproducts replaced by stabilized finite sequences");
  std::vector<Reconstruction<F>> recs, deep;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    auto tag = "sample " + std::to_string(s) + ": ";
    recs.push_back(reconstruct(samples[s], window));
    deep.push_back(reconstruct(samples[s], window + 2));
    auto& r = recs.back();
    if (!r.ok()) rep.fail(tag + "reconstruction is not a quasi-isomorphism in the window");
    auto tot = totalize(r.x);
    int lo = r.trace.lo() + 2, hi = std::max(tot.hi(), samples[s].hi()) + 1;
    if (window_dims(samples[s], lo, hi) != window_dims(tot, lo, hi)) rep.fail(tag + "window cohomology differs");
    // verdicts may differ only by one side being inconclusive
    for (int n = lo; n <= hi; ++n)
      for (auto side : {Side::leq, Side::geq}) {
        auto w = std::pair<int, int>{lo, hi};
        auto a = aisle_check(samples[s], n, side, w).verdict;
        auto b = aisle_check(tot, n, side, w).verdict;
        if (a != b && a != Verdict::inconclusive && b != Verdict::inconclusive) rep.fail(tag + "aisle verdicts conflict at n = " + std::to_string(n));
      }
  }
  for (std::size_t s = 0; s < samples.size(); ++s)
    for (std::size_t t = 0; t < samples.size(); ++t) {
      auto tag = "pair (" + std::to_string(s) + "," + std::to_string(t) + "): ";
      auto& x = recs[s].x;
      auto& y = deep[t].x;
      auto tx = totalize(x), ty = totalize(y);
      auto h = tw_hom_complex(x, y);
      std::size_t a = cohomology(k, h.complex, 0).dim(), b = 0, c = 0;
      if (!tx.empty() && !ty.empty()) b = cohomology(k, module_hom_complex(tx, ty, std::pair<int, int>{0, 0}).complex, 0).dim();
      if (!tx.empty() && !samples[t].empty()) c = cohomology(k, module_hom_complex(tx, samples[t], std::pair<int, int>{0, 0}).complex, 0).dim();
      if (a != b || b != c) rep.fail(tag + "H0 hom dims " + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c));
    }
  return rep;
}

// Heart comparison with h-projective approximations taken from resolutions.
template <class F>
DimReport heart_compare(const CategoryPtr<F>& q, const std::vector<DgModule<F>>& samples, int window = 3) {
  HeartInput<F> in;
  in.samples = samples;
  for (auto& m : samples) in.approx.push_back(totalize(resolve(m, window).x));
  return heart_compare(q, in);
}

// ---------------------------------------------------------------------------
// Trace text: deterministic rendering of the step data.

template <class F>
void write_block(std::ostream& os, const DgCategory<F>& q, const Block<F>& b, const Objects& src, const Objects& tgt) {
  for (std::size_t t = 0; t < tgt.size(); ++t) {
    os << "      [";
    for (std::size_t s = 0; s < src.size(); ++s) os << (s ? ", " : "") << elem_string(q, src[s], tgt[t], b.at(t, s));
    os << "]\n";
  }
}

template <class F>
void write_twisted(std::ostream& os, const TwistedComplex<F>& x) {
  const auto& q = *x.base;
  for (auto& [i, objs] : x.entries) {
    os << "    entry " << i << ":";
    for (auto o : objs) os << " " << q.objects[o];
    os << "\n";
  }
  for (auto& [ij, b] : x.q) {
    os << "    q " << ij.first << "->" << ij.second << "\n";
    write_block(os, q, b, x.at(ij.first), x.at(ij.second));
  }
}

template <class F>
void write_vec(std::ostream& os, const F& k, const Vec<F>& v) {
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << k.to_string(v[i]);
  os << "]";
}

template <class F>
std::string trace_text(const ResolutionTrace<F>& tr) {
  const auto& q = *tr.target.base;
  const auto& k = q.field;
  std::ostringstream os;
  os << "dgkit-trace 1\n";
  os << "field " << k.spec().name() << "\n";
  os << "window " << tr.window << "\n";
  if (tr.acyclic) {
    os << "acyclic\n";
    return os.str();
  }
  os << "top " << tr.top << "\n";
  os << "seed";
  for (auto o : tr.seed) os << " " << q.objects[o];
  os << "\n";
  auto verdicts = [&](const std::vector<StepVerdict>& vs) {
    for (auto& v : vs) os << "  H^" << v.degree << " " << (v.expect_iso ? "iso" : "epi") << " " << (v.ok ? "ok" : "FAIL") << "\n";
  };
  for (auto& st : tr.steps) {
    os << "step " << st.n << "\n";
    verdicts(st.verdicts);
    os << "  Q";
    for (auto o : st.objects) os << " " << q.objects[o];
    os << "\n";
    for (auto& [ij, b] : st.beta.comp) {
      os << "  beta " << ij.first << "->" << ij.second << "\n";
      write_block(os, q, b, st.objects, st.x.at(ij.second));
    }
    for (std::size_t g = 0; g < st.c.size(); ++g) {
      os << "  c " << g << " ";
      write_vec(os, k, st.c[g]);
      os << "\n";
    }
    os << "  sound " << (st.soundness ? "yes" : "no") << "\n";
  }
  os << "final " << tr.lo() << "\n";
  verdicts(tr.final_verdicts);
  write_twisted(os, tr.x);
  return os.str();
}

}  // namespace dgkit
