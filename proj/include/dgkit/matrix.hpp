#pragma once

// Sparse matrices over an exact field, plus the elimination kernels
// (rref, kernel, solve, quotient) that everything else reduces to.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"

namespace dgkit {

template <class F>
using Vec = std::vector<typename F::value_type>;

template <class F>
class Matrix {
 public:
  using T = typename F::value_type;
  using Entry = std::pair<std::size_t, T>;
  using Row = std::vector<Entry>;  // sorted by column, no zeros

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  static Matrix identity(const F& k, std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i].push_back({i, k.one()});
    return m;
  }
  static Matrix scalar(const F& k, std::size_t n, const T& c) {
    Matrix m(n, n);
    if (!k.is_zero(c))
      for (std::size_t i = 0; i < n; ++i) m.data_[i].push_back({i, c});
    return m;
  }
  static Matrix from_dense(const F& k, const std::vector<Vec<F>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (!k.is_zero(rows[r][c])) m.data_[r].push_back({c, rows[r][c]});
    return m;
  }
  // Columns given as dense vectors of length `rows`.
  static Matrix from_columns(const F& k, const std::vector<Vec<F>>& columns, std::size_t rows) {
    Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
      for (std::size_t r = 0; r < rows; ++r)
        if (!k.is_zero(columns[c][r])) m.data_[r].push_back({c, columns[c][r]});
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Row& row(std::size_t r) const { return data_[r]; }
  Row& row_mut(std::size_t r) { return data_[r]; }

  T get(std::size_t r, std::size_t c) const {
    const Row& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::size_t x) { return e.first < x; });
    if (it != row.end() && it->first == c) return it->second;
    return T{};
  }

  void set(const F& k, std::size_t r, std::size_t c, const T& v) {
    if (r >= rows_ || c >= cols_) throw Error("matrix index out of range");
    Row& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::size_t x) { return e.first < x; });
    if (it != row.end() && it->first == c) {
      if (k.is_zero(v))
        row.erase(it);
      else
        it->second = v;
    } else if (!k.is_zero(v)) {
      row.insert(it, {c, v});
    }
  }

  void add_to(const F& k, std::size_t r, std::size_t c, const T& v) {
    if (k.is_zero(v)) return;
    set(k, r, c, k.add(get(r, c), v));
  }

  bool is_zero() const {
    for (const Row& r : data_)
      if (!r.empty()) return false;
    return true;
  }

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const Row& r : data_) n += r.size();
    return n;
  }

  Vec<F> column(std::size_t c) const {
    Vec<F> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = get(r, c);
    return v;
  }

  std::vector<Vec<F>> dense() const {
    std::vector<Vec<F>> out(rows_, Vec<F>(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
      for (const auto& [c, v] : data_[r]) out[r][c] = v;
    return out;
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Row> data_;
};

// ---------------------------------------------------------------------------
// Arithmetic

template <class F>
Matrix<F> multiply(const F& k, const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() != b.rows()) throw Error("multiply: shape mismatch");
  Matrix<F> out(a.rows(), b.cols());
  Vec<F> acc(b.cols());
  std::vector<char> touched(b.cols(), 0);
  std::vector<std::size_t> cols;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    cols.clear();
    for (const auto& [m, av] : a.row(r))
      for (const auto& [c, bv] : b.row(m)) {
        if (!touched[c]) {
          touched[c] = 1;
          cols.push_back(c);
          acc[c] = k.mul(av, bv);
        } else {
          acc[c] = k.add(acc[c], k.mul(av, bv));
        }
      }
    std::sort(cols.begin(), cols.end());
    auto& row = out.row_mut(r);
    for (std::size_t c : cols) {
      if (!k.is_zero(acc[c])) row.push_back({c, acc[c]});
      touched[c] = 0;
      acc[c] = typename F::value_type{};
    }
  }
  return out;
}

template <class F>
Vec<F> apply(const F& k, const Matrix<F>& a, const Vec<F>& v) {
  if (a.cols() != v.size()) throw Error("apply: shape mismatch");
  Vec<F> out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    typename F::value_type s{};
    for (const auto& [c, x] : a.row(r))
      if (!k.is_zero(v[c])) s = k.add(s, k.mul(x, v[c]));
    out[r] = s;
  }
  return out;
}

template <class F>
Matrix<F> scale(const F& k, const typename F::value_type& c, const Matrix<F>& a) {
  Matrix<F> out(a.rows(), a.cols());
  if (k.is_zero(c)) return out;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (const auto& [col, v] : a.row(r)) out.row_mut(r).push_back({col, k.mul(c, v)});
  return out;
}

template <class F>
Matrix<F> scale_sign(const F& k, int sign, const Matrix<F>& a) {
  if (sign > 0) return a;
  Matrix<F> out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (const auto& [col, v] : a.row(r)) out.row_mut(r).push_back({col, k.neg(v)});
  return out;
}

template <class F>
Matrix<F> add(const F& k, const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("add: shape mismatch");
  Matrix<F> out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto& x = a.row(r);
    const auto& y = b.row(r);
    auto& o = out.row_mut(r);
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
        o.push_back(x[i++]);
      } else if (i == x.size() || y[j].first < x[i].first) {
        o.push_back(y[j++]);
      } else {
        auto s = k.add(x[i].second, y[j].second);
        if (!k.is_zero(s)) o.push_back({x[i].first, s});
        ++i;
        ++j;
      }
    }
  }
  return out;
}

template <class F>
Matrix<F> sub(const F& k, const Matrix<F>& a, const Matrix<F>& b) {
  return add(k, a, scale_sign(k, -1, b));
}

template <class F>
Matrix<F> transpose(const Matrix<F>& a) {
  Matrix<F> out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (const auto& [c, v] : a.row(r)) out.row_mut(c).push_back({r, v});
  return out;
}

// dst[r0.., c0..] += src
template <class F>
void add_block(const F& k, Matrix<F>& dst, std::size_t r0, std::size_t c0, const Matrix<F>& src) {
  if (r0 + src.rows() > dst.rows() || c0 + src.cols() > dst.cols()) throw Error("add_block: out of range");
  for (std::size_t r = 0; r < src.rows(); ++r)
    for (const auto& [c, v] : src.row(r)) dst.add_to(k, r0 + r, c0 + c, v);
}

template <class F>
Matrix<F> submatrix(const F& k, const Matrix<F>& a, std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) {
  Matrix<F> out(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (const auto& [c, v] : a.row(r0 + r))
      if (c >= c0 && c < c0 + nc) out.row_mut(r).push_back({c - c0, v});
  (void)k;
  return out;
}

template <class F>
Matrix<F> vstack(const F& k, const std::vector<Matrix<F>>& parts, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& p : parts) rows += p.rows();
  Matrix<F> out(rows, cols);
  std::size_t r0 = 0;
  for (const auto& p : parts) {
    add_block(k, out, r0, 0, p);
    r0 += p.rows();
  }
  return out;
}

template <class F>
Matrix<F> hstack(const F& k, const std::vector<Matrix<F>>& parts, std::size_t rows) {
  std::size_t cols = 0;
  for (const auto& p : parts) cols += p.cols();
  Matrix<F> out(rows, cols);
  std::size_t c0 = 0;
  for (const auto& p : parts) {
    add_block(k, out, 0, c0, p);
    c0 += p.cols();
  }
  return out;
}

template <class F>
bool vec_is_zero(const F& k, const Vec<F>& v) {
  for (const auto& x : v)
    if (!k.is_zero(x)) return false;
  return true;
}

template <class F>
Vec<F> vec_add(const F& k, const Vec<F>& a, const Vec<F>& b) {
  Vec<F> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = k.add(a[i], b[i]);
  return out;
}

template <class F>
Vec<F> vec_sub(const F& k, const Vec<F>& a, const Vec<F>& b) {
  Vec<F> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = k.sub(a[i], b[i]);
  return out;
}

template <class F>
Vec<F> vec_scale(const F& k, const typename F::value_type& c, const Vec<F>& a) {
  Vec<F> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = k.mul(c, a[i]);
  return out;
}

template <class F>
Vec<F> unit_vector(const F& k, std::size_t n, std::size_t i) {
  Vec<F> v(n);
  v[i] = k.one();
  return v;
}

// ---------------------------------------------------------------------------
// Elimination

template <class F>
struct Rref {
  using Row = typename Matrix<F>::Row;
  std::size_t cols = 0;
  std::vector<Row> rows;             // nonzero rows, pivot entry 1, ordered by pivot
  std::vector<std::size_t> pivots;   // pivot column of each row
  std::size_t rank() const { return pivots.size(); }
  bool operator==(const Rref&) const = default;
};

inline constexpr std::size_t kDenseThreshold = 64 * 64;

namespace detail {

template <class F>
Rref<F> rref_dense(const F& k, const Matrix<F>& m) {
  using T = typename F::value_type;
  auto a = m.dense();
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t p = r;
    while (p < R && k.is_zero(a[p][c])) ++p;
    if (p == R) continue;
    std::swap(a[p], a[r]);
    T inv = k.inv(a[r][c]);
    for (std::size_t j = c; j < C; ++j) a[r][j] = k.mul(a[r][j], inv);
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || k.is_zero(a[i][c])) continue;
      T f = a[i][c];
      for (std::size_t j = c; j < C; ++j)
        if (!k.is_zero(a[r][j])) a[i][j] = k.sub(a[i][j], k.mul(f, a[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  Rref<F> out;
  out.cols = C;
  out.pivots = pivots;
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    typename Matrix<F>::Row row;
    for (std::size_t j = 0; j < C; ++j)
      if (!k.is_zero(a[i][j])) row.push_back({j, a[i][j]});
    out.rows.push_back(std::move(row));
  }
  return out;
}

// row -= f * pivot_row
template <class F>
void axpy_row(const F& k, typename Matrix<F>::Row& row, const typename F::value_type& f, const typename Matrix<F>::Row& piv) {
  typename Matrix<F>::Row out;
  out.reserve(row.size() + piv.size());
  std::size_t i = 0, j = 0;
  while (i < row.size() || j < piv.size()) {
    if (j == piv.size() || (i < row.size() && row[i].first < piv[j].first)) {
      out.push_back(row[i++]);
    } else if (i == row.size() || piv[j].first < row[i].first) {
      out.push_back({piv[j].first, k.neg(k.mul(f, piv[j].second))});
      ++j;
    } else {
      auto v = k.sub(row[i].second, k.mul(f, piv[j].second));
      if (!k.is_zero(v)) out.push_back({row[i].first, v});
      ++i;
      ++j;
    }
  }
  row.swap(out);
}

// Incremental fully-reduced echelon form: every inserted row is reduced
// against existing pivots; a new pivot is cleared from all earlier rows.
template <class F>
class Echelon {
 public:
  using Row = typename Matrix<F>::Row;
  Echelon(const F& k, std::size_t cols) : k_(k), cols_(cols), pivot_row_(cols, npos) {}

  // Returns true iff the row was independent of what is already present.
  bool insert(Row row) {
    reduce(row);
    if (row.empty()) return false;
    auto inv = k_.inv(row.front().second);
    for (auto& e : row) e.second = k_.mul(e.second, inv);
    std::size_t pc = row.front().first;
    for (auto& other : rows_) {
      auto v = find(other, pc);
      if (v) axpy_row(k_, other, *v, row);
    }
    pivot_row_[pc] = rows_.size();
    rows_.push_back(std::move(row));
    return true;
  }

  void reduce(Row& row) const {
    // Pivot rows are fully reduced, so one left-to-right sweep suffices.
    std::size_t idx = 0;
    while (idx < row.size()) {
      std::size_t c = row[idx].first;
      std::size_t pr = pivot_row_[c];
      if (pr == npos) {
        ++idx;
        continue;
      }
      auto f = row[idx].second;
      axpy_row(k_, row, f, rows_[pr]);  // clears position idx, leaves earlier entries alone
    }
  }

  Rref<F> finish() const {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows_[a].front().first < rows_[b].front().first; });
    Rref<F> out;
    out.cols = cols_;
    for (std::size_t i : order) {
      out.pivots.push_back(rows_[i].front().first);
      out.rows.push_back(rows_[i]);
    }
    return out;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  static std::optional<typename F::value_type> find(const Row& row, std::size_t c) {
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::size_t x) { return e.first < x; });
    if (it != row.end() && it->first == c) return it->second;
    return std::nullopt;
  }

  const F& k_;
  std::size_t cols_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivot_row_;
};

template <class F>
Rref<F> rref_sparse(const F& k, const Matrix<F>& m) {
  Echelon<F> e(k, m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) e.insert(m.row(r));
  return e.finish();
}

}  // namespace detail

enum class RrefMethod { automatic, dense, sparse };

template <class F>
Rref<F> rref(const F& k, const Matrix<F>& m, RrefMethod method = RrefMethod::automatic) {
  if (method == RrefMethod::dense || (method == RrefMethod::automatic && m.rows() * m.cols() <= kDenseThreshold))
    return detail::rref_dense(k, m);
  return detail::rref_sparse(k, m);
}

template <class F>
std::size_t rank(const F& k, const Matrix<F>& m) {
  return rref(k, m).rank();
}

template <class F>
std::vector<Vec<F>> kernel_from_rref(const F& k, const Rref<F>& e) {
  std::vector<char> is_pivot(e.cols, 0);
  for (auto p : e.pivots) is_pivot[p] = 1;
  std::vector<Vec<F>> out;
  for (std::size_t f = 0; f < e.cols; ++f) {
    if (is_pivot[f]) continue;
    Vec<F> v(e.cols);
    v[f] = k.one();
    for (std::size_t i = 0; i < e.rows.size(); ++i)
      for (const auto& [c, x] : e.rows[i])
        if (c == f) v[e.pivots[i]] = k.neg(x);
    out.push_back(std::move(v));
  }
  return out;
}

template <class F>
std::vector<Vec<F>> kernel_basis(const F& k, const Matrix<F>& m) {
  return kernel_from_rref(k, rref(k, m));
}

// Solves m * X = B column by column; entry c is nullopt iff column c of B
// is not in the image of m.
template <class F>
std::vector<std::optional<Vec<F>>> solve_columns(const F& k, const Matrix<F>& m, const Matrix<F>& b) {
  if (b.rows() != m.rows()) throw Error("solve: right-hand side has wrong length");
  const std::size_t n = m.cols();
  auto e = rref(k, hstack(k, {m, b}, m.rows()));
  std::vector<std::optional<Vec<F>>> out(b.cols());
  std::vector<char> bad(b.cols(), 0);
  for (std::size_t i = 0; i < e.rows.size(); ++i)
    if (e.pivots[i] >= n) {
      for (const auto& [c, x] : e.rows[i])
        if (c >= n) bad[c - n] = 1;
    }
  for (std::size_t j = 0; j < b.cols(); ++j) {
    if (bad[j]) continue;
    Vec<F> v(n);
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
      if (e.pivots[i] >= n) break;
      for (const auto& [c, x] : e.rows[i])
        if (c == n + j) v[e.pivots[i]] = x;
    }
    out[j] = std::move(v);
  }
  return out;
}

template <class F>
std::optional<Vec<F>> solve_particular(const F& k, const Matrix<F>& m, const Vec<F>& b) {
  if (b.size() != m.rows()) throw Error("solve: right-hand side has wrong length");
  return solve_columns(k, m, Matrix<F>::from_columns(k, {b}, m.rows())).front();
}

template <class F>
std::size_t rank_of_vectors(const F& k, const std::vector<Vec<F>>& vs, std::size_t dim) {
  return rref(k, Matrix<F>::from_dense(k, vs, dim)).rank();
}

// Unit vectors e_c for the non-pivot columns of span(sub): they project to a
// basis of the quotient.
template <class F>
std::vector<Vec<F>> quotient_representatives(const F& k, const std::vector<Vec<F>>& sub, std::size_t ambient_dim) {
  for (const auto& v : sub)
    if (v.size() != ambient_dim) throw Error("quotient_representatives: vector length mismatch");
  auto e = rref(k, Matrix<F>::from_dense(k, sub, ambient_dim));
  std::vector<char> is_pivot(ambient_dim, 0);
  for (auto p : e.pivots) is_pivot[p] = 1;
  std::vector<Vec<F>> out;
  for (std::size_t c = 0; c < ambient_dim; ++c)
    if (!is_pivot[c]) out.push_back(unit_vector(k, ambient_dim, c));
  return out;
}

// Indices of `candidates` forming a basis of span(sub + candidates) modulo span(sub),
// chosen greedily in order.
template <class F>
std::vector<std::size_t> extend_basis(const F& k, const std::vector<Vec<F>>& sub, const std::vector<Vec<F>>& candidates, std::size_t dim) {
  detail::Echelon<F> e(k, dim);
  auto to_row = [&](const Vec<F>& v) {
    typename Matrix<F>::Row row;
    for (std::size_t i = 0; i < dim; ++i)
      if (!k.is_zero(v[i])) row.push_back({i, v[i]});
    return row;
  };
  for (const auto& v : sub) e.insert(to_row(v));
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (e.insert(to_row(candidates[i]))) chosen.push_back(i);
  return chosen;
}

template <class F>
std::string to_string(const F& k, const Matrix<F>& m) {
  std::string s;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    s += '[';
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) s += ' ';
      s += k.to_string(m.get(r, c));
    }
    s += "]\n";
  }
  return s;
}

}  // namespace dgkit
