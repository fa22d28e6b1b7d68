#pragma once

// Verification suites shared by the CLI and the acceptance runner. Each suite
// returns line-oriented text that depends only on its inputs and the seed.

#include <string>
#include <vector>

#include "io.hpp"
#include "random.hpp"
#include "resolution.hpp"

namespace dgkit {

struct SuiteReport {
  std::string name;
  std::vector<std::string> lines;
  std::size_t failures = 0;
  bool hypothesis_failure = false;

  bool ok() const { return failures == 0 && !hypothesis_failure; }
  void line(std::string s) { lines.push_back(std::move(s)); }
  void fail(std::string s) {
    ++failures;
    lines.push_back("FAIL " + std::move(s));
  }
  std::string text() const {
    std::string out;
    for (auto& l : lines) out += name + ": " + l + "\n";
    out += name + ": " + (ok() ? "ok" : "failed") + "\n";
    return out;
  }
};

template <class F>
using NamedCategories = std::vector<std::pair<std::string, CategoryPtr<F>>>;

template <class F>
NamedCategories<F> builtin_categories(const F& k) {
  NamedCategories<F> out;
  for (auto name : {"F1", "F2", "F4"}) out.emplace_back(name, share(fixture_by_name(k, name)));
  return out;
}

// One stream per (suite, fixture) so that suites do not perturb each other.
inline Rng suite_rng(std::uint64_t seed, std::size_t fixture, std::uint64_t salt) {
  return Rng(seed * 1000003ULL + fixture * 7919ULL + salt);
}

inline TwShape random_shape(Rng& rng, int max_width, std::size_t max_mult = 2) {
  int w = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_width)));
  int hi = rng.range(-1, 1);
  return TwShape{hi - w + 1, hi, max_mult};
}

// ---------------------------------------------------------------------------
// Axioms of presented categories and detection of corruptions.

template <class F>
SuiteReport axiom_suite(const NamedCategories<F>& valid, const NamedCategories<F>& corrupted) {
  SuiteReport rep{"axioms"};
  for (auto& [name, q] : valid) {
    auto a = validate_dg_category(*q);
    if (!a.ok) {
      rep.fail(name + " violates " + a.axiom + ": " + a.witness);
      continue;
    }
    if (auto w = check_nonpositive_cohomology(*q)) {
      rep.fail(name + " has cohomology in degree " + std::to_string(w->degree));
      continue;
    }
    auto h = check_hlc(q);
    if (!h.ok()) {
      rep.fail(name + " is not hlc: " + h.witness);
      continue;
    }
    rep.line(name + " valid, nonpositive, hlc");
  }
  for (auto& [name, q] : corrupted) {
    auto a = validate_dg_category(*q);
    if (a.ok)
      rep.fail(name + " not detected");
    else
      rep.line(name + " detected (" + a.axiom + ")");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Closure of twisted complexes under shift and cone; (d + q)^2 = 0 on Tot.

template <class F>
SuiteReport closure_suite(const NamedCategories<F>& cats, std::size_t samples, std::uint64_t seed) {
  SuiteReport rep{"closure"};
  for (std::size_t c = 0; c < cats.size(); ++c) {
    auto& [name, q] = cats[c];
    auto rng = suite_rng(seed, c, 2);
    std::size_t with_q = 0, bad = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      auto tag = name + " sample " + std::to_string(s) + ": ";
      auto x = random_twisted(q, rng, random_shape(rng, 5));
      auto y = random_twisted(q, rng, random_shape(rng, 5));
      if (!x.q.empty()) ++with_q;
      auto f = random_closed_morphism(x, y, rng);
      auto sh = tw_shift(x, rng.range(-2, 2));
      auto cone = tw_cone(f, x, y).cone;
      for (auto* t : {&x, &sh, &cone}) {
        auto v = validate_twisted(*t);
        if (!v.ok) {
          ++bad;
          rep.fail(tag + v.message);
        }
        auto tot = totalize(*t);
        for (std::size_t o = 0; o < q->N(); ++o)
          if (auto r = validate_complex(q->field, tot.values[o]); !r) {
            ++bad;
            rep.fail(tag + "Tot does not square to zero: " + r.message);
          }
      }
    }
    rep.line(name + ": " + std::to_string(samples) + " complexes (" + std::to_string(with_q) + " with nonzero q), " + std::to_string(bad) + " failures");
  }
  return rep;
}

// Tot(cone f) = cone(Tot f) after identifying bases.
template <class F>
SuiteReport tot_cone_suite(const NamedCategories<F>& cats, std::size_t samples, std::uint64_t seed) {
  SuiteReport rep{"tot-cone"};
  for (std::size_t c = 0; c < cats.size(); ++c) {
    auto& [name, q] = cats[c];
    auto rng = suite_rng(seed, c, 3);
    std::size_t nonzero = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      auto x = random_twisted(q, rng, random_shape(rng, 4));
      auto y = random_twisted(q, rng, random_shape(rng, 4));
      auto f = random_closed_morphism(x, y, rng);
      if (!f.is_zero()) ++nonzero;
      if (!is_one_sided(f)) rep.fail(name + " sample " + std::to_string(s) + ": generator produced a non-one-sided morphism");
      if (auto r = compare_tot_cone(f, x, y); !r) rep.fail(name + " sample " + std::to_string(s) + ": " + r.message);
    }
    rep.line(name + ": " + std::to_string(samples) + " morphisms (" + std::to_string(nonzero) + " nonzero)");
  }
  return rep;
}

template <class F>
SuiteReport truncation_suite(const NamedCategories<F>& cats, std::size_t samples, std::uint64_t seed, const std::vector<TwistedComplex<F>>& extra = {}) {
  SuiteReport rep{"truncation"};
  auto run = [&](const TwistedComplex<F>& x, const std::string& tag) {
    auto r = verify_truncation_stabilization(x);
    for (auto& f : r.failures) rep.fail(tag + f);
    return r.ok;
  };
  for (std::size_t c = 0; c < cats.size(); ++c) {
    auto& [name, q] = cats[c];
    auto rng = suite_rng(seed, c, 4);
    std::size_t ok = 0;
    for (std::size_t s = 0; s < samples; ++s) ok += run(random_twisted(q, rng, random_shape(rng, 5)), name + " sample " + std::to_string(s) + ": ");
    rep.line(name + ": " + std::to_string(ok) + "/" + std::to_string(samples) + " stabilize");
  }
  for (std::size_t i = 0; i < extra.size(); ++i)
    rep.line("input " + std::to_string(i) + ": " + (run(extra[i], "input " + std::to_string(i) + ": ") ? "stabilizes" : "fails"));
  return rep;
}

// ---------------------------------------------------------------------------
// One-sided reduction: g one-sided, f - d(alpha) = g, Tot f - Tot g = d Tot alpha.

template <class F>
std::string check_one_sided(const TwMorphism<F>& f, const TwistedComplex<F>& x, const TwistedComplex<F>& y) {
  const auto& k = x.base->field;
  auto r = make_one_sided(f, x, y);
  if (!is_one_sided(r.g)) return "output is not one-sided";
  if (!(tw_add(k, f, tw_differential(r.alpha, x, y), x, y, -1) == r.g)) return "f - d(alpha) != g";
  auto tx = totalize(x), ty = totalize(y);
  auto diff = sub_module_maps(k, totalize_map(f, x, y), totalize_map(r.g, x, y), tx, ty);
  if (!(diff == module_map_differential(k, totalize_map(r.alpha, x, y), tx, ty))) return "Tot(alpha) is not a homotopy from Tot f to Tot g";
  return "";
}

// f = u : X(0) -> X(-1) on X = * at -1, 0 over F4, reduced by alpha = -w.
template <class F>
std::string one_sided_golden(const F& k) {
  auto f4 = share(fixture_f4(k));
  TwistedComplex<F> x;
  x.base = f4;
  x.entries[-1] = {0};
  x.entries[0] = {0};
  x.lo = -1;
  x.hi = 0;
  TwMorphism<F> f;
  Block<F> u{1, 1, {f4->zero(0, 0)}};
  u.cells[0][2] = k.one();
  f.set(0, -1, u);
  auto r = make_one_sided(f, x, x);
  Block<F> minus_w{1, 1, {f4->zero(0, 0)}};
  minus_w.cells[0][1] = k.from_int(-1);
  if (!r.g.is_zero()) return "reduced morphism is not zero";
  if (r.alpha.comp.size() != 1 || !(r.alpha.comp.begin()->first == std::make_pair(0, -1)) || !(r.alpha.comp.begin()->second == minus_w)) return "alpha is not -w at (0, -1)";
  return check_one_sided(f, x, x);
}

template <class F>
SuiteReport one_sided_suite(const CategoryPtr<F>& q, const std::string& name, std::size_t samples, std::uint64_t seed) {
  SuiteReport rep{"one-sided"};
  auto g = one_sided_golden(q->field);
  if (!g.empty())
    rep.fail("golden example: " + g);
  else
    rep.line("golden example: u reduced by alpha = -w");
  auto rng = suite_rng(seed, 0, 5);
  std::size_t found = 0, draws = 0;
  while (found < samples && draws < 20 * samples) {
    ++draws;
    auto x = random_twisted(q, rng, random_shape(rng, 4));
    auto y = random_twisted(q, rng, random_shape(rng, 4));
    auto f = random_closed_non_one_sided(x, y, rng);
    if (!f) continue;
    auto msg = check_one_sided(*f, x, y);
    if (!msg.empty()) rep.fail(name + " sample " + std::to_string(found) + ": " + msg);
    ++found;
  }
  if (found < samples) rep.fail(name + ": only " + std::to_string(found) + " non-one-sided morphisms in " + std::to_string(draws) + " draws");
  rep.line(name + ": " + std::to_string(found) + " reductions from " + std::to_string(draws) + " draws");
  return rep;
}

// ---------------------------------------------------------------------------

template <class F>
SuiteReport quasi_ff_suite(const NamedCategories<F>& cats, std::size_t samples, std::uint64_t seed, int lo = -4, int hi = 4) {
  SuiteReport rep{"quasi-ff"};
  for (std::size_t c = 0; c < cats.size(); ++c) {
    auto& [name, q] = cats[c];
    auto h = check_hlc(q);
    if (!h.ok()) {
      rep.hypothesis_failure = true;
      rep.line(name + ": hypothesis failure: " + h.witness);
      continue;
    }
    auto rng = suite_rng(seed, c, 6);
    std::vector<std::pair<TwistedComplex<F>, TwistedComplex<F>>> pairs;
    for (std::size_t s = 0; s < samples; ++s) {
      auto x = random_twisted(q, rng, random_shape(rng, 4));
      pairs.emplace_back(std::move(x), random_twisted(q, rng, random_shape(rng, 4)));
    }
    auto r = verify_quasi_ff(q, pairs, lo, hi);
    std::size_t nonzero = 0;
    for (auto& row : r.rows) nonzero += row.tw;
    for (auto& m : r.mismatches) rep.fail(name + " " + m);
    rep.line(name + ": " + std::to_string(samples) + " pairs, degrees " + std::to_string(lo) + ".." + std::to_string(hi) + ", total dim " + std::to_string(nonzero) + ", " +
             std::to_string(r.mismatches.size()) + " mismatches");
  }
  return rep;
}

// Golden trace for the simple module over F2 with window 6, over Q.
inline std::string resolution_golden(const std::string& golden_path) {
  RationalField k;
  auto f2 = share(fixture_f2(k));
  auto tr = resolve(simple_module(f2, 0), 6);
  std::ifstream in(golden_path, std::ios::binary);
  if (!in) return "cannot read " + golden_path;
  std::stringstream ss;
  ss << in.rdbuf();
  if (!tr.ok()) return "step verdicts fail";
  if (trace_text(tr) != ss.str()) return "trace differs from " + std::filesystem::path(golden_path).filename().string();
  return "";
}

template <class F>
SuiteReport resolution_suite(const NamedCategories<F>& cats, std::size_t samples, std::uint64_t seed, int window, const std::string& golden_path = "") {
  SuiteReport rep{"resolution"};
  if (!golden_path.empty()) {
    auto g = resolution_golden(golden_path);
    if (!g.empty())
      rep.fail("golden: " + g);
    else
      rep.line("golden: F2 simple, window 6, periodic eps resolution reproduced");
  }
  for (std::size_t c = 0; c < cats.size(); ++c) {
    auto& [name, q] = cats[c];
    auto rng = suite_rng(seed, c, 7);
    std::size_t verdicts = 0, generators = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      auto m = random_hfp_module(q, rng, random_shape(rng, 5));
      try {
        auto tr = resolve(m, window);
        for (auto& st : tr.steps) {
          generators += st.objects.size();
          verdicts += st.verdicts.size();
          for (auto& v : st.verdicts)
            if (!v.ok) rep.fail(name + " sample " + std::to_string(s) + " step " + std::to_string(st.n) + ": H^" + std::to_string(v.degree) + (v.expect_iso ? " not iso" : " not epi"));
          if (!st.soundness) rep.fail(name + " sample " + std::to_string(s) + " step " + std::to_string(st.n) + ": unsound step data");
        }
        for (auto& v : tr.final_verdicts)
          if (!v.ok) rep.fail(name + " sample " + std::to_string(s) + " final: H^" + std::to_string(v.degree) + (v.expect_iso ? " not iso" : " not epi"));
      } catch (const HypothesisFailure& e) {
        rep.hypothesis_failure = true;
        rep.line(name + ": hypothesis failure: " + e.what());
        break;
      }
    }
    rep.line(name + ": " + std::to_string(samples) + " modules, " + std::to_string(generators) + " generators, " + std::to_string(verdicts) + " step verdicts");
  }
  return rep;
}

// ---------------------------------------------------------------------------

inline int comparison_window(const std::string& name) { return name == "F2" ? 6 : 4; }

template <class F>
SuiteReport reconstruction_suite(const NamedCategories<F>& cats, std::size_t samples, std::size_t comparison_samples, std::uint64_t seed,
                                 const std::string& name_ = "reconstruction") {
  SuiteReport rep{name_};
  for (std::size_t c = 0; c < cats.size(); ++c) {
    auto& [name, q] = cats[c];
    auto rng = suite_rng(seed, c, 8);
    int W = comparison_window(name);
    std::size_t ok = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      auto x = random_twisted(q, rng, random_shape(rng, 5));
      auto m = totalize(x);
      auto r = reconstruct(m, W);
      int lo = r.trace.lo() + 2, hi = m.hi() + 1;
      bool same = window_dims(totalize(r.x), lo, hi) == window_dims(m, lo, hi);
      if (!same || !r.ok()) rep.fail(name + " sample " + std::to_string(s) + ": window cohomology of the reconstruction differs");
      ok += same && r.ok();
    }
    if (samples) rep.line(name + ": " + std::to_string(ok) + "/" + std::to_string(samples) + " reconstructions agree (window " + std::to_string(W) + ")");
    if (!comparison_samples) continue;
    std::vector<DgModule<F>> ms;
    for (std::size_t s = 0; s < comparison_samples; ++s) ms.push_back(random_hfp_module(q, rng, random_shape(rng, 3)));
    auto cr = verify_comparison(q, ms, W);
    for (auto& f : cr.failures) rep.fail(name + " comparison " + f);
    rep.line(name + ": comparison on " + std::to_string(comparison_samples) + " modules (window " + std::to_string(W) + ") " + (cr.ok ? "passes" : "fails"));
  }
  return rep;
}

// ---------------------------------------------------------------------------

template <class F>
SuiteReport hocolim_suite(const NamedCategories<F>& cats, std::size_t samples, std::size_t split_samples, std::uint64_t seed, const std::vector<TwistedComplex<F>>& extra = {}) {
  SuiteReport rep{"hocolim"};
  auto run = [&](const TwistedComplex<F>& x, const std::string& tag) {
    bool ok = true;
    auto r = verify_truncation_colimit(x);
    for (auto& f : r.failures) rep.fail(tag + f);
    ok = ok && r.ok;
    auto ts = truncation_sequence(x);
    auto tot = totalize(x);
    HocolimTarget<F> tgt{&tot, ts.to_total};
    auto h = verify_hocolim_cohomology(ts.seq, ts.thresholds, tot.lo() - 1, tot.hi() + 1, &tgt);
    for (auto& f : h.failures) rep.fail(tag + f);
    return ok && h.ok;
  };
  for (std::size_t c = 0; c < cats.size(); ++c) {
    auto& [name, q] = cats[c];
    auto rng = suite_rng(seed, c, 9);
    std::size_t ok = 0;
    for (std::size_t s = 0; s < samples; ++s) ok += run(random_twisted(q, rng, random_shape(rng, 4)), name + " sample " + std::to_string(s) + ": ");
    rep.line(name + ": " + std::to_string(ok) + "/" + std::to_string(samples) + " truncation colimits");
    std::size_t split_ok = 0, twisted = 0;
    for (std::size_t s = 0; s < split_samples; ++s) {
      auto sp = random_split_sample(q, rng, random_shape(rng, 3));
      if (!sp.h.is_zero()) ++twisted;
      try {
        auto sc = split_cone_compare(sp.f, sp.g, sp.sigma, sp.rho, sp.a, sp.b, sp.c);
        auto r = check_split_compare(sc, sp.c);
        if (!r) rep.fail(name + " split " + std::to_string(s) + ": " + r.message);
        split_ok += r.ok;
      } catch (const Error& e) {
        rep.fail(name + " split " + std::to_string(s) + ": " + e.what());
      }
    }
    rep.line(name + ": " + std::to_string(split_ok) + "/" + std::to_string(split_samples) + " split sequences (" + std::to_string(twisted) + " non-split as complexes)");
  }
  for (std::size_t i = 0; i < extra.size(); ++i)
    rep.line("input " + std::to_string(i) + ": " + (run(extra[i], "input " + std::to_string(i) + ": ") ? "ok" : "fails"));
  return rep;
}

// ---------------------------------------------------------------------------

template <class F>
SuiteReport comparison_suite(const NamedCategories<F>& cats, std::size_t samples, std::uint64_t seed) {
  return reconstruction_suite(cats, 0, samples, seed, "comparison");
}

template <class F>
SuiteReport heart_suite(const NamedCategories<F>& cats, std::size_t samples, std::uint64_t seed) {
  SuiteReport rep{"heart"};
  for (std::size_t c = 0; c < cats.size(); ++c) {
    auto& [name, q] = cats[c];
    auto rng = suite_rng(seed, c, 10);
    std::vector<DgModule<F>> ms;
    for (std::size_t s = 0; s < samples; ++s) ms.push_back(random_heart_module(q, rng));
    try {
      auto r = heart_compare(q, ms);
      for (auto& w : r.warnings) rep.line(name + ": warning: " + w);
      for (auto& f : r.failures) rep.fail(name + " " + f);
      rep.line(name + ": " + std::to_string(r.rows.size()) + " hom comparisons");
    } catch (const HypothesisFailure& e) {
      rep.hypothesis_failure = true;
      rep.line(name + ": hypothesis failure: " + e.what());
    }
  }
  return rep;
}

template <class F>
SuiteReport derived_projective_suite(const NamedCategories<F>& cats, std::size_t samples, std::uint64_t seed) {
  SuiteReport rep{"derived-proj"};
  for (std::size_t c = 0; c < cats.size(); ++c) {
    auto& [name, q] = cats[c];
    auto rng = suite_rng(seed, c, 11);
    std::vector<DgModule<F>> ms;
    for (std::size_t s = 0; s < samples; ++s) ms.push_back(random_hfp_module(q, rng, random_shape(rng, 3)));
    try {
      for (std::size_t A = 0; A < q->N(); ++A) {
        auto r = derived_projective_check(q, A, ms);
        for (auto& f : r.failures) rep.fail(name + " yoneda(" + q->objects[A] + ") " + f);
        rep.line(name + ": yoneda(" + q->objects[A] + ") against " + std::to_string(r.rows.size()) + " modules");
      }
    } catch (const HypothesisFailure& e) {
      rep.hypothesis_failure = true;
      rep.line(name + ": hypothesis failure: " + e.what());
    }
  }
  return rep;
}

}  // namespace dgkit
