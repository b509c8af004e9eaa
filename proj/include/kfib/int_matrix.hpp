#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kfib/integers.hpp"

namespace kfib {

/// Dense integer matrix with exact (arbitrary precision) entries.
/// 0xN and Nx0 shapes are legal; they occur naturally as relator exponent
/// matrices of free presentations.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}

  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}

  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw std::invalid_argument("IntMatrix: entry count != rows*cols");
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<IntVec>& rows) {
    if (rows.empty()) return IntMatrix(0, 0);
    IntMatrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_)
        throw std::invalid_argument("IntMatrix::from_rows: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  IntVec row(std::size_t i) const {
    IntVec r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
  }

  IntVec col(std::size_t j) const {
    IntVec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const Int& v : data_)
      if (v != 0) return false;
    return true;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix: mul shape");
    IntMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& a = at(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          p.at(i, j) += a * o.at(k, j);
      }
    return p;
  }

  IntVec operator*(const IntVec& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("IntMatrix: mul shape");
    IntVec r(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
    return r;
  }

  IntMatrix operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("IntMatrix: add shape");
    IntMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      s.data_[i] = data_[i] + o.data_[i];
    return s;
  }

  IntMatrix operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("IntMatrix: sub shape");
    IntMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      s.data_[i] = data_[i] - o.data_[i];
    return s;
  }

  // Stacks blocks vertically; all blocks must share a column count.
  static IntMatrix vstack(const std::vector<IntMatrix>& blocks,
                          std::size_t cols) {
    std::size_t total = 0;
    for (const auto& b : blocks) {
      if (b.cols() != cols) throw std::invalid_argument("vstack: cols differ");
      total += b.rows();
    }
    IntMatrix m(total, cols);
    std::size_t r = 0;
    for (const auto& b : blocks)
      for (std::size_t i = 0; i < b.rows(); ++i, ++r)
        for (std::size_t j = 0; j < cols; ++j) m.at(r, j) = b.at(i, j);
    return m;
  }

  // Fraction-free determinant (Bareiss). Square matrices only.
  Int det() const {
    if (rows_ != cols_) throw std::invalid_argument("det: not square");
    std::size_t n = rows_;
    if (n == 0) return Int(1);
    IntMatrix a = *this;
    Int prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (a.at(k, k) == 0) {
        std::size_t p = k + 1;
        while (p < n && a.at(p, k) == 0) ++p;
        if (p == n) return Int(0);
        for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j) {
          Int v = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
          a.at(i, j) = v / prev;  // exact by Bareiss
        }
      prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : Int(-a.at(n - 1, n - 1));
  }

  // Text format: first line "rows cols", then row-major whitespace-separated
  // integers.
  static IntMatrix parse(std::istream& in) {
    long r = -1, c = -1;
    if (!(in >> r >> c) || r < 0 || c < 0)
      throw std::invalid_argument("matrix: expected header 'rows cols'");
    IntMatrix m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j) {
        std::string tok;
        if (!(in >> tok))
          throw std::invalid_argument("matrix: too few entries");
        try {
          m.at(i, j) = Int(tok);
        } catch (const std::invalid_argument&) {
          throw std::invalid_argument("matrix: bad integer '" + tok + "'");
        }
      }
    return m;
  }

  static IntMatrix parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  void print(std::ostream& out) const {
    out << rows_ << ' ' << cols_ << '\n';
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) out << ' ';
        out << at(i, j);
      }
      out << '\n';
    }
  }

  std::string to_text() const {
    std::ostringstream out;
    print(out);
    return out.str();
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> data_;
};

inline IntVec operator-(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec sub: size");
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline IntVec operator+(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec add: size");
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline IntVec operator*(const Int& c, const IntVec& v) {
  IntVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
  return r;
}

inline bool is_zero_vec(const IntVec& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace kfib
