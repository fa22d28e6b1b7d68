#pragma once

// Homotopy colimits of finite (stabilized) sequences of dg-modules, the
// split-cone comparison, and the truncation-colimit checks for twisted complexes.
//
// For M_0 -> ... -> M_N (stabilized from N on) the telescope is modelled as
// cone(1 - mu : (+)_{n<N} M_n -> (+)_{n<=N} M_n), which is quasi-isomorphic to
// the telescope of the infinite sequence continued by identities.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twisted.hpp"

namespace dgkit {

// Module map between direct sums given by blocks (t, s) : src[s] -> tgt[t].
template <class F>
ModuleMap<F> block_module_map(const CategoryPtr<F>& q, int degree, const std::vector<const DgModule<F>*>& src, const std::vector<const DgModule<F>*>& tgt,
                              const std::map<std::pair<std::size_t, std::size_t>, ModuleMap<F>>& blocks) {
  const auto& k = q->field;
  ModuleMap<F> out;
  out.degree = degree;
  for (std::size_t a = 0; a < q->N(); ++a) {
    GradedMap<F> g;
    g.degree = degree;
    std::map<int, bool> levels;
    for (auto* m : src)
      for (auto& [n, d] : m->values[a].dims) levels[n] = true;
    for (auto& [n, _] : levels) {
      std::vector<std::size_t> roff{0}, coff{0};
      for (auto* m : tgt) roff.push_back(roff.back() + m->values[a].dim(n + degree));
      for (auto* m : src) coff.push_back(coff.back() + m->values[a].dim(n));
      Matrix<F> mat(roff.back(), coff.back());
      for (auto& [ts, blk] : blocks) {
        auto [t, s] = ts;
        add_block(k, mat, roff[t], coff[s], component(blk.comp[a], src[s]->values[a], tgt[t]->values[a], n));
      }
      g.set(n, std::move(mat));
    }
    out.comp.push_back(std::move(g));
  }
  return out;
}

template <class F>
ModuleMap<F> negate_module_map(const F& k, const ModuleMap<F>& f) {
  return scale_module_map(k, k.from_int(-1), f);
}

template <class F>
ModuleMap<F> sub_module_maps(const F& k, const ModuleMap<F>& f, const ModuleMap<F>& g, const DgModule<F>& a, const DgModule<F>& b) {
  return add_module_maps(k, f, negate_module_map(k, g), a, b);
}

// Degreewise rank data of a module map, per object and degree.
template <class F>
bool module_map_injective(const ModuleMap<F>& f, const DgModule<F>& a, const DgModule<F>& b) {
  const auto& k = a.field();
  for (std::size_t x = 0; x < a.N(); ++x)
    for (auto& [n, d] : a.values[x].dims)
      if (rank(k, component(f.comp[x], a.values[x], b.values[x], n)) != d) return false;
  return true;
}

template <class F>
bool module_map_surjective(const ModuleMap<F>& f, const DgModule<F>& a, const DgModule<F>& b) {
  const auto& k = a.field();
  for (std::size_t x = 0; x < a.N(); ++x)
    for (auto& [n, d] : b.values[x].dims)
      if (rank(k, component(f.comp[x], a.values[x], b.values[x], n - f.degree)) != d) return false;
  return true;
}

// ---------------------------------------------------------------------------

template <class F>
struct ModuleSequence {
  std::vector<DgModule<F>> terms;
  std::vector<ModuleMap<F>> maps;  // maps[n] : terms[n] -> terms[n+1]
  std::size_t stabilized_from = 0;  // maps are identities from here on (implicitly beyond the last term)
};

template <class F>
Report validate_sequence(const ModuleSequence<F>& s) {
  if (s.terms.empty()) return Report::fail("empty sequence");
  if (s.maps.size() + 1 != s.terms.size()) return Report::fail("sequence needs one map per consecutive pair");
  const auto& k = s.terms[0].field();
  for (std::size_t n = 0; n < s.maps.size(); ++n) {
    auto& f = s.maps[n];
    if (f.degree != 0) return Report::fail("map " + std::to_string(n) + " has nonzero degree");
    if (auto r = validate_module_map(f, s.terms[n], s.terms[n + 1]); !r) return Report::fail("map " + std::to_string(n) + ": " + r.message);
    if (!is_closed_module_map(k, f, s.terms[n], s.terms[n + 1])) return Report::fail("map " + std::to_string(n) + " is not closed");
    if (n >= s.stabilized_from && !(s.terms[n] == s.terms[n + 1] && f == identity_module_map(s.terms[n])))
      return Report::fail("map " + std::to_string(n) + " is past the stabilization index but not an identity");
  }
  return Report::pass();
}

template <class F>
struct Hocolim {
  DgModule<F> sum_src, sum_tgt;   // (+)_{n<N} M_n, (+)_{n<=N} M_n
  ModuleMap<F> one_minus_mu;      // sum_src -> sum_tgt
  ModuleCone<F> cone;             // cone.cone is the homotopy colimit
  std::vector<ModuleMap<F>> j;    // M_n -> hocolim
  std::vector<ModuleMap<F>> incl; // M_n -> sum_tgt
};

template <class F>
Hocolim<F> hocolim_modules(const ModuleSequence<F>& s) {
  if (auto r = validate_sequence(s); !r) throw Error("hocolim_modules: " + r.message);
  const auto& q = s.terms[0].base;
  const auto& k = q->field;
  const std::size_t N = s.terms.size() - 1;
  std::vector<const DgModule<F>*> src, tgt;
  for (std::size_t n = 0; n < N; ++n) src.push_back(&s.terms[n]);
  for (std::size_t n = 0; n <= N; ++n) tgt.push_back(&s.terms[n]);
  Hocolim<F> h{direct_sum_modules(src, q), direct_sum_modules(tgt, q), {}, {}, {}, {}};
  std::map<std::pair<std::size_t, std::size_t>, ModuleMap<F>> blocks;
  for (std::size_t n = 0; n < N; ++n) {
    blocks[{n, n}] = identity_module_map(s.terms[n]);
    blocks[{n + 1, n}] = negate_module_map(k, s.maps[n]);
  }
  h.one_minus_mu = block_module_map(q, 0, src, tgt, blocks);
  h.cone = module_cone(h.one_minus_mu, h.sum_src, h.sum_tgt);
  for (std::size_t n = 0; n <= N; ++n) {
    auto inc = block_module_map(q, 0, {&s.terms[n]}, tgt, {{{n, 0}, identity_module_map(s.terms[n])}});
    h.j.push_back(compose_module_maps(k, h.cone.j, inc, s.terms[n], h.sum_tgt, h.cone.cone));
    h.incl.push_back(std::move(inc));
  }
  return h;
}

// (+)j_n o (1 - mu) equals d(i o sigma), with i : sum_src[1] -> cone and sigma the
// degree +1 shifted identity; the composite is null-homotopic, not zero.
template <class F>
Report check_hocolim_inclusions(const Hocolim<F>& h) {
  const auto& k = h.sum_src.field();
  const auto& q = h.sum_src.base;
  auto jsum = h.cone.j;
  auto lhs = compose_module_maps(k, jsum, h.one_minus_mu, h.sum_src, h.sum_tgt, h.cone.cone);
  ModuleMap<F> sigma;
  sigma.degree = -1;
  for (std::size_t a = 0; a < q->N(); ++a) sigma.comp.push_back(shifted_identity(k, h.sum_src.values[a], 1));
  auto is = compose_module_maps(k, h.cone.i, sigma, h.sum_src, h.cone.m_shift, h.cone.cone);
  auto rhs = module_map_differential(k, is, h.sum_src, h.cone.cone);
  if (!(lhs == rhs)) return Report::fail("(+)j o (1 - mu) differs from d(i sigma)");
  return Report::pass();
}

// ---------------------------------------------------------------------------
// Split cone comparison: for a degreewise split sequence A -f-> B -g-> C with
// sections sigma : C -> B, rho : B -> A, the map phi = (0, g) : cone(f) -> C is a
// homotopy equivalence with inverse psi = (-delta, sigma), delta = rho d(sigma),
// phi psi = 1 and psi phi - 1 = d(K), K(a, b) = (-rho b, 0).

template <class F>
struct SplitCompare {
  ModuleCone<F> cone;
  ModuleMap<F> phi, psi, homotopy;
};

template <class F>
SplitCompare<F> split_cone_compare(const ModuleMap<F>& f, const ModuleMap<F>& g, const ModuleMap<F>& sigma, const ModuleMap<F>& rho, const DgModule<F>& a,
                                   const DgModule<F>& b, const DgModule<F>& c) {
  const auto& q = a.base;
  const auto& k = q->field;
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw Error("split_cone_compare: " + what);
  };
  need(f.degree == 0 && g.degree == 0 && sigma.degree == 0 && rho.degree == 0, "all maps must have degree 0");
  need(is_closed_module_map(k, f, a, b) && is_closed_module_map(k, g, b, c), "f and g must be closed");
  for (auto [m, s, t, name] : {std::tuple{&f, &a, &b, "f"}, std::tuple{&g, &b, &c, "g"}, std::tuple{&sigma, &c, &b, "sigma"}, std::tuple{&rho, &b, &a, "rho"}})
    need(validate_module_map(*m, *s, *t).ok, std::string(name) + " is not a graded module map");
  need(compose_module_maps(k, g, f, a, b, c).is_zero(), "g f != 0");
  need(compose_module_maps(k, rho, sigma, c, b, a).is_zero(), "rho sigma != 0");
  need(compose_module_maps(k, g, sigma, c, b, c) == identity_module_map(c), "g sigma != 1");
  need(compose_module_maps(k, rho, f, a, b, a) == identity_module_map(a), "rho f != 1");
  need(add_module_maps(k, compose_module_maps(k, sigma, g, b, c, b), compose_module_maps(k, f, rho, b, a, b), b, b) == identity_module_map(b), "sigma g + f rho != 1");

  SplitCompare<F> out{module_cone(f, a, b), {}, {}, {}};
  auto& cn = out.cone;
  out.phi = compose_module_maps(k, g, cn.s, cn.cone, b, c);
  // delta = rho d(sigma) : C -> A of degree 1, placed in the A[1] slot
  auto dsigma = module_map_differential(k, sigma, c, b);
  auto delta = compose_module_maps(k, rho, dsigma, c, b, a);
  ModuleMap<F> delta0;  // C -> A[1], degree 0, same matrices
  delta0.degree = 0;
  for (std::size_t x = 0; x < q->N(); ++x) {
    GradedMap<F> gm;
    gm.degree = 0;
    for (auto& [n, m] : delta.comp[x].comp) gm.set(n, m);
    delta0.comp.push_back(std::move(gm));
  }
  out.psi = add_module_maps(k, compose_module_maps(k, cn.i, negate_module_map(k, delta0), c, cn.m_shift, cn.cone),
                            compose_module_maps(k, cn.j, sigma, c, b, cn.cone), c, cn.cone);
  // K = -i rho s shifted: (a, b) -> (-rho b, 0), degree -1
  ModuleMap<F> rho_s;  // cone -> A[1] of degree -1 with matrices of rho o s
  rho_s.degree = -1;
  auto rs = compose_module_maps(k, rho, cn.s, cn.cone, b, a);
  for (std::size_t x = 0; x < q->N(); ++x) {
    GradedMap<F> gm;
    gm.degree = -1;
    for (auto& [n, m] : rs.comp[x].comp) gm.set(n, m);
    rho_s.comp.push_back(std::move(gm));
  }
  out.homotopy = negate_module_map(k, compose_module_maps(k, cn.i, rho_s, cn.cone, cn.m_shift, cn.cone));
  return out;
}

template <class F>
Report check_split_compare(const SplitCompare<F>& sc, const DgModule<F>& c) {
  const auto& k = c.field();
  const auto& cone = sc.cone.cone;
  if (!validate_module_map(sc.phi, cone, c).ok || !is_closed_module_map(k, sc.phi, cone, c)) return Report::fail("phi is not a closed module map");
  if (!validate_module_map(sc.psi, c, cone).ok || !is_closed_module_map(k, sc.psi, c, cone)) return Report::fail("psi is not a closed module map");
  if (!validate_module_map(sc.homotopy, cone, cone).ok) return Report::fail("homotopy is not a module map");
  if (!(compose_module_maps(k, sc.phi, sc.psi, c, cone, c) == identity_module_map(c))) return Report::fail("phi psi != 1");
  auto lhs = sub_module_maps(k, compose_module_maps(k, sc.psi, sc.phi, cone, c, cone), identity_module_map(cone), cone, cone);
  if (!(lhs == module_map_differential(k, sc.homotopy, cone, cone))) return Report::fail("psi phi - 1 != d(K)");
  return Report::pass();
}

// ---------------------------------------------------------------------------
// Cohomological behaviour of the telescope.

struct CheckReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void fail(std::string s) {
    ok = false;
    failures.push_back(std::move(s));
  }
  void merge(const CheckReport& o, const std::string& prefix) {
    for (auto& f : o.failures) fail(prefix + f);
    for (auto& n : o.notes) notes.push_back(prefix + n);
  }
};

// Hypothesis: H^i(mu_n) iso for i > t_n and epi at i = t_n, over degrees in [lo, hi].
// Conclusion: H^i(j_n) iso for i > t_n, epi at i = t_n; with a compatible target Y
// (f_{n+1} mu_n = f_n) the induced map hocolim -> Y is checked wherever every H^i(f_n)
// with i > t_n is an isomorphism.
template <class F>
struct HocolimTarget {
  const DgModule<F>* y = nullptr;
  std::vector<ModuleMap<F>> maps;  // f_n : M_n -> Y
};

template <class F>
CheckReport verify_hocolim_cohomology(const ModuleSequence<F>& s, const std::vector<int>& thresholds, int lo, int hi, const HocolimTarget<F>* target = nullptr) {
  CheckReport rep;
  const std::size_t N = s.terms.size() - 1;
  if (thresholds.size() != s.terms.size()) throw Error("verify_hocolim_cohomology: one threshold per term required");
  for (std::size_t n = 0; n < N; ++n)
    for (int i = std::max(lo, thresholds[n]); i <= hi; ++i) {
      auto v = module_map_verdict(s.maps[n], s.terms[n], s.terms[n + 1], i);
      if (i > thresholds[n] && !v.iso) {
        rep.fail("hypothesis: H^" + std::to_string(i) + "(mu_" + std::to_string(n) + ") is not an isomorphism");
        return rep;
      }
      if (i == thresholds[n] && !v.epi) {
        rep.fail("hypothesis: H^" + std::to_string(i) + "(mu_" + std::to_string(n) + ") is not surjective");
        return rep;
      }
    }
  auto h = hocolim_modules(s);
  if (auto r = check_hocolim_inclusions(h); !r) rep.fail(r.message);
  if (auto r = validate_module(h.cone.cone); !r) rep.fail("hocolim is not a valid module: " + r.message);
  for (std::size_t n = 0; n <= N; ++n)
    for (int i = std::max(lo, thresholds[n]); i <= hi; ++i) {
      auto v = module_map_verdict(h.j[n], s.terms[n], h.cone.cone, i);
      if (i > thresholds[n] && !v.iso) rep.fail("H^" + std::to_string(i) + "(j_" + std::to_string(n) + ") is not an isomorphism");
      if (i == thresholds[n] && !v.epi) rep.fail("H^" + std::to_string(i) + "(j_" + std::to_string(n) + ") is not surjective");
    }
  if (target) {
    const auto& k = s.terms[0].field();
    const auto& y = *target->y;
    for (std::size_t n = 0; n < N; ++n)
      if (!(compose_module_maps(k, target->maps[n + 1], s.maps[n], s.terms[n], s.terms[n + 1], y) == target->maps[n])) rep.fail("target maps are not compatible at " + std::to_string(n));
    if (!rep.ok) return rep;
    // induced map (0, (+)f_n) : cone(1 - mu) -> Y
    std::vector<const DgModule<F>*> tgt;
    for (auto& t : s.terms) tgt.push_back(&t);
    std::map<std::pair<std::size_t, std::size_t>, ModuleMap<F>> blocks;
    for (std::size_t n = 0; n <= N; ++n) blocks[{0, n}] = target->maps[n];
    auto fsum = block_module_map(s.terms[0].base, 0, tgt, {&y}, blocks);
    auto ind = compose_module_maps(k, fsum, h.cone.s, h.cone.cone, h.sum_tgt, y);
    if (!is_closed_module_map(k, ind, h.cone.cone, y)) rep.fail("induced map is not closed");
    for (int i = lo; i <= hi; ++i) {
      bool stable = true;
      for (std::size_t n = 0; n <= N; ++n)
        if (i > thresholds[n] && !module_map_verdict(target->maps[n], s.terms[n], y, i).iso) stable = false;
      bool stable_last = i > thresholds[N] && module_map_verdict(target->maps[N], s.terms[N], y, i).iso;
      if (!stable || !stable_last) continue;
      if (!module_map_verdict(ind, h.cone.cone, y, i).iso) rep.fail("induced map hocolim -> Y is not an isomorphism on H^" + std::to_string(i));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Truncation sequence of a twisted complex: T_p = Tot sigma_{>=M-p} X, p = 0..P,
// with T_P = Tot X.

template <class F>
struct TruncationSequence {
  std::vector<TwistedComplex<F>> sigma;
  ModuleSequence<F> seq;
  std::vector<ModuleMap<F>> to_total;  // T_p -> Tot X
  std::vector<int> thresholds;         // M - p
};

template <class F>
TruncationSequence<F> truncation_sequence(const TwistedComplex<F>& x) {
  TruncationSequence<F> t;
  int top = x.empty() ? x.hi : x.top();
  int bottom = x.empty() ? x.hi : std::min(x.lo, x.entries.begin()->first);
  if (bottom > top) bottom = top;
  for (int n = top; n >= bottom; --n) {
    t.sigma.push_back(sigma_geq(x, n));
    t.seq.terms.push_back(totalize(t.sigma.back()));
    t.thresholds.push_back(n);
  }
  for (std::size_t p = 0; p + 1 < t.sigma.size(); ++p) t.seq.maps.push_back(totalize_map(tw_identity(t.sigma[p]), t.sigma[p], t.sigma[p + 1]));
  for (auto& s : t.sigma) t.to_total.push_back(totalize_map(tw_identity(s), s, x));
  t.seq.stabilized_from = t.seq.maps.size();
  return t;
}

// Union colimit, split exactness of 0 -> (+)T_p -> (+)T_p -> Tot X -> 0, and the
// telescope comparison with its commuting triangle.
template <class F>
CheckReport verify_truncation_colimit(const TwistedComplex<F>& x) {
  CheckReport rep;
  if (auto r = validate_twisted(x); !r) {
    rep.fail("invalid twisted complex: " + r.message);
    return rep;
  }
  const auto& q = x.base;
  const auto& k = q->field;
  auto tot = totalize(x);
  auto t = truncation_sequence(x);
  const std::size_t P = t.seq.terms.size() - 1;
  // (a) union colimit
  if (!(t.seq.terms[P] == tot)) rep.fail("last truncation does not totalize to Tot X");
  for (std::size_t p = 0; p <= P; ++p) {
    if (!module_map_injective(t.to_total[p], t.seq.terms[p], tot)) rep.fail("T_" + std::to_string(p) + " -> Tot X is not injective");
    if (p < P) {
      if (!module_map_injective(t.seq.maps[p], t.seq.terms[p], t.seq.terms[p + 1])) rep.fail("truncation inclusion " + std::to_string(p) + " is not injective");
      if (!(compose_module_maps(k, t.to_total[p + 1], t.seq.maps[p], t.seq.terms[p], t.seq.terms[p + 1], tot) == t.to_total[p])) rep.fail("inclusions do not commute at " + std::to_string(p));
    }
  }
  if (!module_map_surjective(t.to_total[P], t.seq.terms[P], tot)) rep.fail("truncations do not exhaust Tot X");
  if (!rep.ok) return rep;
  // (b) exact, degreewise split sequence
  auto h = hocolim_modules(t.seq);
  std::vector<const DgModule<F>*> all, src;
  for (std::size_t p = 0; p <= P; ++p) all.push_back(&t.seq.terms[p]);
  for (std::size_t p = 0; p < P; ++p) src.push_back(&t.seq.terms[p]);
  std::map<std::pair<std::size_t, std::size_t>, ModuleMap<F>> gb, rb;
  for (std::size_t p = 0; p <= P; ++p) gb[{0, p}] = t.to_total[p];
  auto g = block_module_map(q, 0, all, {&tot}, gb);
  auto sigma = block_module_map(q, 0, {&tot}, all, {{{P, 0}, identity_module_map(tot)}});
  // rho(y)_n = sum_{m <= n} mu^{n-m} y_m for n < P
  for (std::size_t n = 0; n < P; ++n) {
    auto acc = identity_module_map(t.seq.terms[n]);
    for (std::size_t m = n + 1; m-- > 0;) {
      rb[{n, m}] = acc;
      if (m == 0) break;
      acc = compose_module_maps(k, acc, t.seq.maps[m - 1], t.seq.terms[m - 1], t.seq.terms[m], t.seq.terms[n]);
    }
  }
  auto rho = block_module_map(q, 0, all, src, rb);
  try {
    auto sc = split_cone_compare(h.one_minus_mu, g, sigma, rho, h.sum_src, h.sum_tgt, tot);
    if (auto r = check_split_compare(sc, tot); !r) rep.fail("telescope comparison: " + r.message);
    // (c) commuting triangle phi o j_p = T_p -> Tot X, strictly
    for (std::size_t p = 0; p <= P; ++p)
      if (!(compose_module_maps(k, sc.phi, h.j[p], t.seq.terms[p], h.cone.cone, tot) == t.to_total[p])) rep.fail("triangle does not commute at " + std::to_string(p));
    for (int i = tot.lo() - 1; i <= tot.hi() + 1; ++i)
      if (!module_map_verdict(sc.phi, h.cone.cone, tot, i).iso) rep.fail("hocolim -> Tot X is not a quasi-isomorphism at H^" + std::to_string(i));
  } catch (const Error& e) {
    rep.fail(std::string("split sequence: ") + e.what());
  }
  return rep;
}

// H^i(Tot sigma_{>=n} X) -> H^i(Tot X): iso for i > n, epi at i = n.
template <class F>
CheckReport verify_truncation_stabilization(const TwistedComplex<F>& x) {
  CheckReport rep;
  auto tot = totalize(x);
  auto t = truncation_sequence(x);
  int hi = tot.hi() + 1;
  for (std::size_t p = 0; p < t.sigma.size(); ++p) {
    int n = t.thresholds[p];
    for (int i = n; i <= hi; ++i) {
      auto v = module_map_verdict(t.to_total[p], t.seq.terms[p], tot, i);
      if (i > n && !v.iso) rep.fail("H^" + std::to_string(i) + " of sigma_{>=" + std::to_string(n) + "} -> Tot X is not an isomorphism");
      if (i == n && !v.epi) rep.fail("H^" + std::to_string(i) + " of sigma_{>=" + std::to_string(n) + "} -> Tot X is not surjective");
    }
  }
  return rep;
}

}  // namespace dgkit
