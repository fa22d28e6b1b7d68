#pragma once

#include <gtest/gtest.h>

#include "dgkit/fixtures.hpp"
#include "dgkit/random.hpp"

namespace dgtest {

using dgkit::PrimeField;
using dgkit::RationalField;

inline const PrimeField& f101() {
  static const PrimeField k(101);
  return k;
}
inline const RationalField& qq() {
  static const RationalField k;
  return k;
}

template <class F>
dgkit::CategoryPtr<F> fixture(const F& k, const std::string& name) {
  return dgkit::share(dgkit::fixture_by_name(k, name));
}

template <class F>
dgkit::Vec<F> ints(const F& k, std::initializer_list<long long> xs) {
  dgkit::Vec<F> v;
  for (auto x : xs) v.push_back(k.from_int(x));
  return v;
}

template <class F>
std::vector<std::size_t> h_dims(const dgkit::DgModule<F>& m, std::size_t object, int lo, int hi) {
  std::vector<std::size_t> out;
  for (int i = lo; i <= hi; ++i) out.push_back(dgkit::cohomology(m.field(), m.values[object], i).dim());
  return out;
}

template <class F>
dgkit::Block<F> cell_block(const F& k, const dgkit::DgCategory<F>& q, std::size_t a, std::size_t b, std::initializer_list<std::pair<std::size_t, long long>> terms) {
  dgkit::Block<F> blk{1, 1, {q.zero(a, b)}};
  for (auto [i, c] : terms) blk.cells[0][i] = k.from_int(c);
  return blk;
}

// Two entries of the single object at indices lo < hi with q_lo^hi = x.
template <class F>
dgkit::TwistedComplex<F> two_term(const dgkit::CategoryPtr<F>& q, int lo, int hi, std::initializer_list<std::pair<std::size_t, long long>> x) {
  dgkit::TwistedComplex<F> t;
  t.base = q;
  t.entries[lo] = {0};
  t.entries[hi] = {0};
  t.lo = lo;
  t.hi = hi;
  t.set_q(lo, hi, cell_block(q->field, *q, 0, 0, x));
  return t;
}

// The periodic eps complex: * at 0, -2, ..., -2m with consecutive q = eps.
template <class F>
dgkit::TwistedComplex<F> eps_complex(const dgkit::CategoryPtr<F>& q, int m) {
  dgkit::TwistedComplex<F> t;
  t.base = q;
  for (int j = 0; j <= m; ++j) t.entries[-2 * j] = {0};
  for (int j = 1; j <= m; ++j) t.set_q(-2 * j, -2 * j + 2, cell_block(q->field, *q, 0, 0, {{1, 1}}));
  t.lo = -2 * m;
  t.hi = 0;
  return t;
}

}  // namespace dgtest
