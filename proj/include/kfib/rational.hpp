#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kfib/int_matrix.hpp"
#include "kfib/integers.hpp"

namespace kfib {

/// Dense matrix over Q. Only what the obstruction computations need:
/// reduced echelon form, solve, kernel, rank, inverse.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

  static RatMatrix from_int(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) r.at(i, j) = Rat(m.at(i, j));
    return r;
  }

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rat& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rat& at(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  bool operator==(const RatMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  RatMatrix operator*(const RatMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("RatMatrix: mul shape");
    RatMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        if (at(i, k) == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          p.at(i, j) += at(i, k) * o.at(k, j);
      }
    return p;
  }

  RatMatrix operator-(const RatMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("RatMatrix: sub shape");
    RatMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      s.data_[i] = data_[i] - o.data_[i];
    return s;
  }

  bool is_zero() const {
    for (const Rat& v : data_)
      if (v != 0) return false;
    return true;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Rat> data_;
};

struct Rref {
  RatMatrix mat;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
};

/// Reduced row echelon form; first nonzero entry of each column is the pivot
/// (exact arithmetic needs no magnitude pivoting), so the result is
/// deterministic.
inline Rref rref(RatMatrix m) {
  Rref out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m.at(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j)
        std::swap(m.at(p, j), m.at(r, j));
    Rat inv = m.at(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(r, j) /= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      Rat f = m.at(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j)
        m.at(i, j) -= f * m.at(r, j);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rank = r;
  out.mat = std::move(m);
  return out;
}

inline std::size_t rational_rank(const IntMatrix& m) {
  return rref(RatMatrix::from_int(m)).rank;
}

/// Particular solution of A x = b over Q (free variables set to 0), or
/// nullopt when inconsistent.
inline std::optional<RatVec> rational_solve(const RatMatrix& a,
                                            const RatVec& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("rational_solve");
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols()) = b[i];
  }
  Rref e = rref(std::move(aug));
  for (std::size_t k = 0; k < e.pivot_cols.size(); ++k)
    if (e.pivot_cols[k] == a.cols()) return std::nullopt;
  RatVec x(a.cols(), Rat(0));
  for (std::size_t k = 0; k < e.pivot_cols.size(); ++k)
    x[e.pivot_cols[k]] = e.mat.at(k, a.cols());
  return x;
}

inline std::optional<RatVec> rational_solve(const IntMatrix& a,
                                            const IntVec& b) {
  RatVec br(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) br[i] = Rat(b[i]);
  return rational_solve(RatMatrix::from_int(a), br);
}

namespace detail {
// Clear denominators and divide by the content; first nonzero entry positive.
inline IntVec primitive_scale(const RatVec& v) {
  Int l(1);
  for (const Rat& x : v) l = lcm_int(l, Int(x.get_den()));
  IntVec w(v.size());
  Int g(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat scaled = v[i] * Rat(l);
    w[i] = Int(scaled.get_num());  // denominator is 1 after scaling
    g = gcd_int(g, w[i]);
  }
  if (g > 1)
    for (Int& x : w) x /= g;
  for (const Int& x : w) {
    if (x == 0) continue;
    if (x < 0)
      for (Int& y : w) y = -y;
    break;
  }
  return w;
}
}  // namespace detail

/// Basis of the rational kernel of A, one primitive integer vector per free
/// column of the RREF (first nonzero entry positive).
inline std::vector<IntVec> rational_kernel(const IntMatrix& a) {
  Rref e = rref(RatMatrix::from_int(a));
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
  std::vector<IntVec> basis;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (is_pivot[c]) continue;
    RatVec v(a.cols(), Rat(0));
    v[c] = 1;
    for (std::size_t k = 0; k < e.pivot_cols.size(); ++k)
      v[e.pivot_cols[k]] = -e.mat.at(k, c);
    basis.push_back(detail::primitive_scale(v));
  }
  return basis;
}

/// Exact inverse; nullopt when singular.
inline std::optional<RatMatrix> rational_inverse(const RatMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: not square");
  std::size_t n = a.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, n + i) = 1;
  }
  Rref e = rref(std::move(aug));
  if (e.rank < n || e.pivot_cols[n - 1] != n - 1) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = e.mat.at(i, n + j);
  return inv;
}

/// Integer inverse of a unimodular matrix; nullopt if not unimodular.
inline std::optional<IntMatrix> unimodular_inverse(const IntMatrix& a) {
  auto inv = rational_inverse(RatMatrix::from_int(a));
  if (!inv) return std::nullopt;
  IntMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Rat& v = inv->at(i, j);
      if (v.get_den() != 1) return std::nullopt;
      out.at(i, j) = Int(v.get_num());
    }
  return out;
}

}  // namespace kfib
