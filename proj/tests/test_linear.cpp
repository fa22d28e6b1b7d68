#include <gtest/gtest.h>

#include "dgkit/graded_complex.hpp"

using namespace dgkit;

namespace {

template <class F>
Matrix<F> mat(const F& k, std::vector<std::vector<long long>> rows, std::size_t cols) {
  Matrix<F> m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m.set(k, r, c, k.from_int(rows[r][c]));
  return m;
}

template <class F>
Matrix<F> random_matrix(const F& k, Rng& rng, std::size_t r, std::size_t c, int density) {
  Matrix<F> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (rng.below(100) < static_cast<std::uint64_t>(density)) m.set(k, i, j, k.random(rng));
  return m;
}

// rank by brute force over F_2: count solutions of m v = 0
std::size_t rank_f2_bruteforce(const Matrix<PrimeField>& m) {
  std::size_t kernel = 0;
  for (std::size_t bits = 0; bits < (1u << m.cols()); ++bits) {
    bool zero = true;
    for (std::size_t r = 0; r < m.rows() && zero; ++r) {
      unsigned s = 0;
      for (auto& [c, x] : m.row(r)) s ^= (x & ((bits >> c) & 1u));
      zero = (s == 0);
    }
    kernel += zero;
  }
  std::size_t dim = 0;
  while ((1u << dim) < kernel) ++dim;
  return m.cols() - dim;
}

}  // namespace

TEST(Field, PrimeArithmetic) {
  PrimeField k(101);
  EXPECT_EQ(k.from_int(-1), 100u);
  EXPECT_EQ(k.mul(k.inv(7), 7), 1u);
  EXPECT_EQ(k.parse("1/2"), k.inv(2));
  EXPECT_THROW(PrimeField(100), Error);
  EXPECT_THROW(k.inv(0), Error);
}

TEST(Field, RationalCanonicalForm) {
  RationalField q;
  auto x = q.parse("6/-4");
  EXPECT_EQ(q.to_string(x), "-3/2");
  EXPECT_TRUE(q.valid(x));
  EXPECT_EQ(q.to_string(q.inv(x)), "-2/3");
  EXPECT_THROW(q.parse("abc"), Error);
}

TEST(Field, SpecParsing) {
  EXPECT_EQ(FieldSpec::parse("Q").kind, FieldKind::rational);
  EXPECT_EQ(FieldSpec::parse("F_101"), FieldSpec::prime(101));
  EXPECT_EQ(FieldSpec::parse("F_101").name(), "F_101");
}

TEST(Matrix, KernelExamples) {
  PrimeField k(101);
  EXPECT_TRUE(kernel_basis(k, Matrix<PrimeField>::identity(k, 2)).empty());
  auto z = kernel_basis(k, Matrix<PrimeField>(2, 3));
  ASSERT_EQ(z.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(z[i], unit_vector(k, 3, i));
  auto ker = kernel_basis(k, mat(k, {{1, 1}, {1, 1}}, 2));
  ASSERT_EQ(ker.size(), 1u);
  EXPECT_EQ(ker[0][0], k.neg(ker[0][1]));
  EXPECT_FALSE(k.is_zero(ker[0][0]));
}

TEST(Matrix, SolveExamples) {
  RationalField q;
  auto v = solve_particular(q, mat(q, {{2}}, 1), Vec<RationalField>{q.one()});
  ASSERT_TRUE(v);
  EXPECT_EQ(q.to_string((*v)[0]), "1/2");
  Vec<RationalField> b{q.from_int(3), q.parse("-5/7")};
  EXPECT_EQ(*solve_particular(q, Matrix<RationalField>::identity(q, 2), b), b);
  EXPECT_FALSE(solve_particular(q, Matrix<RationalField>(2, 2), b));
}

TEST(Matrix, QuotientExamples) {
  PrimeField k(101);
  std::vector<Vec<PrimeField>> full{unit_vector(k, 2, 0), unit_vector(k, 2, 1)};
  EXPECT_TRUE(quotient_representatives(k, full, 2).empty());
  EXPECT_EQ(quotient_representatives(k, {}, 2).size(), 2u);
  auto reps = quotient_representatives(k, {Vec<PrimeField>{1, 1}}, 2);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(rank_of_vectors(k, {Vec<PrimeField>{1, 1}, reps[0]}, 2), 2u);
}

TEST(Matrix, RandomKernelSolveProperties) {
  PrimeField k(101);
  RationalField q;
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    std::size_t r = 1 + rng.below(9), c = 1 + rng.below(9);
    auto m = random_matrix(k, rng, r, c, 40);
    auto ker = kernel_basis(k, m);
    EXPECT_EQ(ker.size() + rank(k, m), c);
    for (auto& v : ker) EXPECT_TRUE(vec_is_zero(k, apply(k, m, v)));
    Vec<PrimeField> x(c);
    for (auto& e : x) e = k.random(rng);
    auto b = apply(k, m, x);
    auto sol = solve_particular(k, m, b);
    ASSERT_TRUE(sol);
    EXPECT_EQ(apply(k, m, *sol), b);
    for (auto& e : *sol) EXPECT_TRUE(k.valid(e));

    auto mq = random_matrix(q, rng, r, c, 50);
    Vec<RationalField> xq(c);
    for (auto& e : xq) e = q.random(rng);
    auto bq = apply(q, mq, xq);
    auto sq = solve_particular(q, mq, bq);
    ASSERT_TRUE(sq);
    EXPECT_EQ(apply(q, mq, *sq), bq);
    for (auto& e : *sq) EXPECT_TRUE(q.valid(e));
  }
}

TEST(Matrix, DenseAndSparseRrefAgree) {
  PrimeField k(101);
  RationalField q;
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    std::size_t r = 1 + rng.below(30), c = 1 + rng.below(30);
    auto m = random_matrix(k, rng, r, c, 15);
    EXPECT_EQ(rref(k, m, RrefMethod::dense), rref(k, m, RrefMethod::sparse));
    auto mq = random_matrix(q, rng, r % 8 + 1, c % 8 + 1, 40);
    EXPECT_EQ(rref(q, mq, RrefMethod::dense), rref(q, mq, RrefMethod::sparse));
  }
  // large enough to take the sparse path automatically
  auto big = random_matrix(k, rng, 90, 80, 5);
  EXPECT_EQ(rref(k, big), rref(k, big, RrefMethod::dense));
}

TEST(Matrix, RankMatchesBruteForceOverF2) {
  PrimeField k(2);
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    auto m = random_matrix(k, rng, 1 + rng.below(6), 1 + rng.below(8), 50);
    EXPECT_EQ(rank(k, m), rank_f2_bruteforce(m));
  }
}

// ---------------------------------------------------------------------------

namespace {

using K = PrimeField;

Complex<K> two_term(const K& k, long long coeff, int lo) {
  Complex<K> c;
  c.set_dim(lo, 1);
  c.set_dim(lo + 1, 1);
  c.set_diff(lo, mat(k, {{coeff}}, 1));
  return c;
}

Complex<K> random_complex(const K& k, Rng& rng, int lo, int hi) {
  // d = B A with A of rank r, built as composites so that d^2 = 0
  Complex<K> c;
  for (int n = lo; n <= hi; ++n) c.set_dim(n, rng.below(4));
  for (int n = lo; n < hi; ++n) {
    if (!c.dim(n) || !c.dim(n + 1)) continue;
    auto prev = c.diff(n - 1);
    // choose d^n vanishing on the image of d^{n-1}: rows in the left kernel of prev
    auto ker = kernel_basis(k, transpose(prev));
    Matrix<K> m(c.dim(n + 1), c.dim(n));
    for (std::size_t r = 0; r < m.rows(); ++r) {
      Vec<K> row(c.dim(n));
      for (auto& v : ker) row = vec_add(k, row, vec_scale(k, k.random(rng), v));
      for (std::size_t j = 0; j < row.size(); ++j) m.set(k, r, j, row[j]);
    }
    c.set_diff(n, m);
  }
  return c;
}

GradedMap<K> random_closed_map(const K& k, Rng& rng, const Complex<K>& a, const Complex<K>& b) {
  auto h = hom_complex(k, a, b);
  auto ker = kernel_basis(k, h.diff(0));
  Vec<K> v(h.dim(0));
  for (auto& z : ker) v = vec_add(k, v, vec_scale(k, k.random(rng), z));
  return hom_decode(k, v, 0, a, b);
}

}  // namespace

TEST(Complex, ValidateExamples) {
  K k(101);
  EXPECT_TRUE(validate_complex(k, two_term(k, 0, 0)));
  Complex<K> bad;
  for (int n = 0; n < 3; ++n) bad.set_dim(n, 1);
  bad.set_diff(0, Matrix<K>::identity(k, 1));
  bad.set_diff(1, Matrix<K>::identity(k, 1));
  auto r = validate_complex(k, bad);
  EXPECT_FALSE(r);
  EXPECT_NE(r.message.find("degree 0"), std::string::npos);
}

TEST(Complex, ShiftExamples) {
  K k(101);
  auto c = two_term(k, 1, 0);
  EXPECT_EQ(shift(k, c, 0), c);
  auto s = shift(k, c, 1);
  EXPECT_EQ(s.dim(-1), 1u);
  EXPECT_EQ(s.diff(-1).get(0, 0), k.from_int(-1));
  EXPECT_EQ(shift(k, s, -1), c);
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto x = random_complex(k, rng, -2, 2);
    int m = rng.range(-3, 3), n = rng.range(-3, 3);
    EXPECT_EQ(shift(k, shift(k, x, m), n), shift(k, x, m + n));
  }
}

TEST(Complex, ConeExamples) {
  K k(101);
  auto a = unit_complex<K>(0);
  auto id = identity_map(k, a);
  auto cid = cone(k, id, a, a);
  EXPECT_TRUE(validate_complex(k, cid.cone));
  for (int n = -2; n <= 2; ++n) EXPECT_EQ(cohomology(k, cid.cone, n).dim(), 0u);
  GradedMap<K> zero;
  auto c0 = cone(k, zero, a, a);
  EXPECT_EQ(cohomology(k, c0.cone, 0).dim(), 1u);
  EXPECT_EQ(cohomology(k, c0.cone, -1).dim(), 1u);
  GradedMap<K> notclosed;
  notclosed.degree = 1;
  EXPECT_THROW(cone(k, notclosed, a, a), Error);
}

TEST(Complex, ConeRelationsAndLongExactSequence) {
  K k(101);
  Rng rng(17);
  for (int t = 0; t < 60; ++t) {
    auto a = random_complex(k, rng, -2, 2), b = random_complex(k, rng, -2, 2);
    auto f = random_closed_map(k, rng, a, b);
    auto c = cone(k, f, a, b);
    ASSERT_TRUE(validate_complex(k, c.cone));
    const auto& C = c.cone;
    const auto& A1 = c.a_shift;
    EXPECT_TRUE(differential(k, c.j, b, C).is_zero());
    EXPECT_TRUE(differential(k, c.p, C, A1).is_zero());
    auto fs = compose(k, f, c.sigma, A1, a, b);
    EXPECT_EQ(differential(k, c.i, A1, C), compose(k, c.j, fs, A1, b, C));
    auto fsp = compose(k, fs, c.p, C, A1, b);
    EXPECT_EQ(differential(k, c.s, C, b), scale_map(k, k.from_int(-1), fsp));
    for (int n = -4; n <= 3; ++n) {
      auto hn = induced_map(k, f, a, b, n);
      auto hn1 = induced_map(k, f, a, b, n + 1);
      std::size_t coker = cohomology(k, b, n).dim() - (hn.rows() && hn.cols() ? rank(k, hn) : 0);
      std::size_t ker = cohomology(k, a, n + 1).dim() - (hn1.rows() && hn1.cols() ? rank(k, hn1) : 0);
      EXPECT_EQ(cohomology(k, C, n).dim(), coker + ker);
    }
  }
}

TEST(Complex, HomComplexExamples) {
  K k(101);
  auto a = unit_complex<K>(0);
  auto h = hom_complex(k, a, a);
  EXPECT_EQ(h.dims, (std::map<int, std::size_t>{{0, 1}}));
  EXPECT_TRUE(h.d.empty());
  auto h1 = hom_complex(k, a, unit_complex<K>(1));
  EXPECT_EQ(h1.dims, (std::map<int, std::size_t>{{1, 1}}));
}

// Closed degree-0 elements of the hom complex are exactly the chain maps,
// enumerated by brute force over F_2 for all 2-term complexes k^a -> k^b.
TEST(Complex, ChainMapsBruteForceOverF2) {
  K k(2);
  Rng rng(23);
  for (int t = 0; t < 30; ++t) {
    Complex<K> a, b;
    a.set_dim(0, 1 + rng.below(2));
    a.set_dim(1, 1 + rng.below(2));
    b.set_dim(0, 1 + rng.below(2));
    b.set_dim(1, 1 + rng.below(2));
    a.set_diff(0, random_matrix(k, rng, a.dim(1), a.dim(0), 50));
    b.set_diff(0, random_matrix(k, rng, b.dim(1), b.dim(0), 50));
    auto h = hom_complex(k, a, b);
    std::size_t n0 = h.dim(0);
    std::size_t count = 0;
    for (std::size_t bits = 0; bits < (1u << n0); ++bits) {
      Vec<K> v(n0);
      for (std::size_t i = 0; i < n0; ++i) v[i] = (bits >> i) & 1u;
      auto f = hom_decode(k, v, 0, a, b);
      // chain map condition: d_b f0 = f1 d_a
      auto l = multiply(k, b.diff(0), component(f, a, b, 0));
      auto r = multiply(k, component(f, a, b, 1), a.diff(0));
      count += (l == r);
    }
    std::size_t cocycles = kernel_basis(k, h.diff(0)).size();
    EXPECT_EQ(count, std::size_t(1) << cocycles);
  }
}

TEST(Complex, CohomologyExamples) {
  K k(101);
  Complex<K> zero;
  EXPECT_EQ(cohomology(k, zero, 0).dim(), 0u);
  auto acyc = two_term(k, 1, -1);
  EXPECT_EQ(cohomology(k, acyc, -1).dim(), 0u);
  EXPECT_EQ(cohomology(k, acyc, 0).dim(), 0u);
  Complex<K> ext;
  ext.set_dim(0, 1);
  ext.set_dim(-1, 1);
  EXPECT_EQ(cohomology(k, ext, 0).dim(), 1u);
  EXPECT_EQ(cohomology(k, ext, -1).dim(), 1u);
}

TEST(Complex, NullHomotopyExamples) {
  K k(101);
  auto a = unit_complex<K>(0);
  EXPECT_FALSE(null_homotopy_witness(k, identity_map(k, a), a, a));
  GradedMap<K> zero;
  auto h0 = null_homotopy_witness(k, zero, a, a);
  ASSERT_TRUE(h0);
  EXPECT_TRUE(h0->is_zero());
  auto c = two_term(k, 1, 0);
  auto h = null_homotopy_witness(k, identity_map(k, c), c, c);
  ASSERT_TRUE(h);
  EXPECT_EQ(differential(k, *h, c, c), identity_map(k, c));
}

TEST(Complex, CoboundariesAreNullHomotopic) {
  K k(101);
  Rng rng(29);
  for (int t = 0; t < 40; ++t) {
    auto a = random_complex(k, rng, -1, 2), b = random_complex(k, rng, -1, 2);
    auto h = hom_complex(k, a, b);
    ASSERT_TRUE(validate_complex(k, h));
    int p = rng.range(-2, 1);
    Vec<K> x(h.dim(p - 1));
    for (auto& e : x) e = k.random(rng);
    auto g = hom_decode(k, x, p - 1, a, b);
    auto f = differential(k, g, a, b);
    EXPECT_EQ(hom_encode(k, f, a, b), apply(k, h.diff(p - 1), x));
    auto w = null_homotopy_witness(k, f, a, b);
    ASSERT_TRUE(w);
    EXPECT_EQ(differential(k, *w, a, b), f);
    // a closed map is null-homotopic iff it vanishes in cohomology of the hom complex
    auto z = random_closed_map(k, rng, a, b);
    auto hc = cohomology(k, h, 0);
    bool zero_class = hc.dim() == 0 || classify(k, hc, {hom_encode(k, z, a, b)}).is_zero();
    EXPECT_EQ(zero_class, null_homotopy_witness(k, z, a, b).has_value());
  }
}
