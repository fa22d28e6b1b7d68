#pragma once

// Standard t-structure on dg-modules as predicates: aisle membership, concentration,
// derived-projective detection, heart comparison and a Karoubian check on H0.

#include <optional>
#include <type_traits>
#include <string>
#include <vector>

#include "dg_module.hpp"

namespace dgkit {

class HypothesisFailure : public Error {
 public:
  using Error::Error;
};

enum class Side { leq, geq };
enum class Verdict { yes, no, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "true";
    case Verdict::no: return "false";
    default: return "inconclusive";
  }
}

struct AisleReport {
  Side side = Side::leq;
  int n = 0;
  int lo = 0, hi = -1;  // window the verdict is based on
  Verdict verdict = Verdict::inconclusive;
  std::optional<int> witness;  // a degree with H^i != 0 on the wrong side
  // membership is read off cohomology, i.e. it relies on non-degeneracy
  static constexpr const char* basis = "cohomology (non-degenerate t-structure)";
};

template <class F>
bool module_h_nonzero(const DgModule<F>& m, int i) {
  for (auto d : module_cohomology_dims(m, i))
    if (d) return true;
  return false;
}

// Window defaults to the support of M, where the verdict is always decided.
// A window that does not reach the relevant end of the support can only refute.
template <class F>
AisleReport aisle_check(const DgModule<F>& m, int n, Side side, std::optional<std::pair<int, int>> window = std::nullopt) {
  AisleReport r;
  r.side = side;
  r.n = n;
  int slo = m.lo(), shi = m.hi();
  auto [lo, hi] = window ? *window : std::pair<int, int>{slo, shi};
  r.lo = lo;
  r.hi = hi;
  if (side == Side::leq) {
    for (int i = std::max(lo, n + 1); i <= hi; ++i)
      if (module_h_nonzero(m, i)) {
        r.witness = i;
        r.verdict = Verdict::no;
        return r;
      }
    r.verdict = (m.empty() || hi >= shi) ? Verdict::yes : Verdict::inconclusive;
  } else {
    for (int i = lo; i <= std::min(hi, n - 1); ++i)
      if (module_h_nonzero(m, i)) {
        r.witness = i;
        r.verdict = Verdict::no;
        return r;
      }
    r.verdict = (m.empty() || lo <= slo) ? Verdict::yes : Verdict::inconclusive;
  }
  return r;
}

template <class F>
bool concentrated_in(const DgModule<F>& m, int n) {
  return aisle_check(m, n, Side::leq).verdict == Verdict::yes && aisle_check(m, n, Side::geq).verdict == Verdict::yes;
}

template <class F>
void require_hlc(const CategoryPtr<F>& q) {
  auto h = check_hlc(q);
  if (!h.ok()) throw HypothesisFailure("hlc violated: " + h.witness);
}

// ---------------------------------------------------------------------------

struct DimRow {
  std::size_t sample = 0;
  std::size_t lhs = 0, rhs = 0;
  bool ok() const { return lhs == rhs; }
};

struct DimReport {
  std::vector<DimRow> rows;
  std::vector<std::string> warnings;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// dim H0 Hom(yoneda(A), M) against dim Hom_{H0-mod}(H0(-, A), H0(M)).
template <class F>
DimReport derived_projective_check(const CategoryPtr<F>& q, std::size_t A, const std::vector<DgModule<F>>& samples) {
  require_hlc(q);
  const auto& k = q->field;
  auto h0 = std::make_shared<const H0Category<F>>(h0_category(*q));
  auto y = yoneda(q, A);
  auto rep = representable_h0(h0, A);
  DimReport out;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    auto& m = samples[s];
    DimRow row{s, 0, 0};
    if (!m.empty()) {
      auto hc = module_hom_complex(y, m, std::pair<int, int>{0, 0});
      row.lhs = cohomology(k, hc.complex, 0).dim();
    }
    row.rhs = h0_module_homs(rep, module_cohomology(m, 0, h0).module).size();
    if (!row.ok()) out.failures.push_back("sample " + std::to_string(s) + ": " + std::to_string(row.lhs) + " != " + std::to_string(row.rhs));
    out.rows.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Karoubian check. An H0 endomorphism algebra is certified local when the trace
// form has a radical of codimension 1 (valid when dim R is invertible in k); then
// 0 and 1 are its only idempotents. Otherwise small prime-field algebras are
// enumerated for nontrivial idempotents; anything else is left as a warning.

struct KaroubiReport {
  bool certified = true;
  std::vector<std::string> warnings;
};

template <class F>
KaroubiReport karoubian_check(const H0Category<F>& h) {
  const auto& k = h.field;
  KaroubiReport out;
  for (std::size_t A = 0; A < h.N(); ++A) {
    std::size_t d = h.dim(A, A);
    if (d <= 1) continue;
    auto mul = [&](const Vec<F>& x, const Vec<F>& y) { return h.compose(A, A, A, x, y); };
    // left multiplication matrices of basis elements
    std::vector<Matrix<F>> L;
    for (std::size_t i = 0; i < d; ++i) {
      Matrix<F> m(d, d);
      for (std::size_t j = 0; j < d; ++j) {
        auto v = mul(unit_vector(k, d, i), unit_vector(k, d, j));
        for (std::size_t r = 0; r < d; ++r) m.set(k, r, j, v[r]);
      }
      L.push_back(std::move(m));
    }
    auto trace = [&](const Matrix<F>& m) {
      auto t = k.zero();
      for (std::size_t i = 0; i < d; ++i) t = k.add(t, m.get(i, i));
      return t;
    };
    Matrix<F> gram(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) gram.set(k, i, j, trace(multiply(k, L[i], L[j])));
    bool invertible_dim = !k.is_zero(k.from_int(static_cast<long long>(d)));
    if (invertible_dim && rank(k, gram) == 1) continue;
    const std::string name = h.objects[A];
    if constexpr (std::is_same_v<F, PrimeField>) {
      double count = 1;
      for (std::size_t i = 0; i < d; ++i) count *= k.modulus();
      if (count <= 200000) {
        Vec<F> e(d);
        bool found = false;
        for (std::size_t it = 0; it < static_cast<std::size_t>(count) && !found; ++it) {
          std::size_t v = it;
          for (std::size_t i = 0; i < d; ++i) {
            e[i] = static_cast<typename F::value_type>(v % k.modulus());
            v /= k.modulus();
          }
          if (vec_is_zero(k, e) || e == h.ids[A]) continue;
          if (mul(e, e) == e) found = true;
        }
        if (found) {
          out.certified = false;
          out.warnings.push_back("End(" + name + ") has a nontrivial idempotent; its splitting is not checked");
        }
        continue;
      }
    }
    out.certified = false;
    out.warnings.push_back("End(" + name + ") could not be certified local");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Heart samples: modules with cohomology concentrated in degree 0.

// Each sample needs an h-projective approximation to compute Hom in the derived
// category; `approx[s]` must map to samples[s] inducing H^i iso for i > lo_s with
// lo_s <= -2 (so that H0 of the hom complex is unaffected).
template <class F>
struct HeartInput {
  std::vector<DgModule<F>> samples;
  std::vector<DgModule<F>> approx;
};

template <class F>
DimReport heart_compare(const CategoryPtr<F>& q, const HeartInput<F>& in) {
  require_hlc(q);
  const auto& k = q->field;
  auto h0 = std::make_shared<const H0Category<F>>(h0_category(*q));
  DimReport out;
  auto kr = karoubian_check(*h0);
  for (auto& w : kr.warnings) out.warnings.push_back(w);
  std::vector<H0Module<F>> heart;
  for (std::size_t s = 0; s < in.samples.size(); ++s) {
    auto& m = in.samples[s];
    if (!concentrated_in(m, 0)) {
      out.failures.push_back("sample " + std::to_string(s) + " is not in the heart");
      heart.emplace_back();
      continue;
    }
    heart.push_back(module_cohomology(m, 0, h0).module);
    if (!fp_presentation(heart.back())) out.failures.push_back("sample " + std::to_string(s) + ": H0 is not finitely presented");
  }
  if (!out.ok()) return out;
  for (std::size_t s = 0; s < in.samples.size(); ++s)
    for (std::size_t t = 0; t < in.samples.size(); ++t) {
      DimRow row{s * in.samples.size() + t, 0, 0};
      auto& p = in.approx[s];
      auto& n = in.samples[t];
      if (!p.empty() && !n.empty()) {
        auto hc = module_hom_complex(p, n, std::pair<int, int>{0, 0});
        row.lhs = cohomology(k, hc.complex, 0).dim();
      }
      row.rhs = h0_module_homs(heart[s], heart[t]).size();
      if (!row.ok()) out.failures.push_back("pair (" + std::to_string(s) + "," + std::to_string(t) + "): " + std::to_string(row.lhs) + " != " + std::to_string(row.rhs));
      out.rows.push_back(row);
    }
  return out;
}

}  // namespace dgkit
