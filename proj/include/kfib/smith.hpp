#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kfib/int_matrix.hpp"
#include "kfib/integers.hpp"

namespace kfib {

/// U * A * V = S with U, V unimodular and S diagonal, d1 | d2 | ... , zeros
/// trailing. Every abelianization and cohomology rank in the library reduces
/// to this decomposition.
struct SmithDecomposition {
  IntMatrix u;  // rows() x rows() of the source
  IntMatrix s;  // same shape as the source
  IntMatrix v;  // cols() x cols() of the source
  std::vector<Int> invariant_factors;  // nonnegative, divisibility chain

  std::size_t rank() const {
    std::size_t r = 0;
    for (const Int& d : invariant_factors)
      if (d != 0) ++r;
    return r;
  }
};

namespace detail {

// Pivot rule: smallest nonzero |entry| in the trailing submatrix, ties by
// row-major position. Fixed so decompositions are reproducible.
inline bool find_pivot(const IntMatrix& s, std::size_t t, std::size_t& pi,
                       std::size_t& pj) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < s.rows(); ++i)
    for (std::size_t j = t; j < s.cols(); ++j) {
      const Int& e = s.at(i, j);
      if (e == 0) continue;
      Int a = abs_int(e);
      if (!found || a < best) {
        found = true;
        best = a;
        pi = i;
        pj = j;
      }
    }
  return found;
}

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}

inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
}

// row a -= q * row b
inline void add_row(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
  if (q == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m.at(a, j) -= q * m.at(b, j);
}

inline void add_col(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
  if (q == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m.at(i, a) -= q * m.at(i, b);
}

inline void negate_row(IntMatrix& m, std::size_t a) {
  for (std::size_t j = 0; j < m.cols(); ++j) m.at(a, j) = -m.at(a, j);
}

}  // namespace detail

inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithDecomposition d;
  d.u = IntMatrix::identity(m);
  d.v = IntMatrix::identity(n);
  d.s = a;
  IntMatrix& s = d.s;

  const std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    std::size_t pi = t, pj = t;
    if (!detail::find_pivot(s, t, pi, pj)) break;  // trailing block is zero
    detail::swap_rows(s, t, pi);
    detail::swap_rows(d.u, t, pi);
    detail::swap_cols(s, t, pj);
    detail::swap_cols(d.v, t, pj);

    for (;;) {
      // Clear column t below the pivot, then row t right of it. Each pass
      // strictly shrinks |pivot| or terminates, so this loop is finite.
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (s.at(i, t) == 0) continue;
        Int q = trunc_div(s.at(i, t), s.at(t, t));
        detail::add_row(s, i, t, q);
        detail::add_row(d.u, i, t, q);
        if (s.at(i, t) != 0) dirty = true;  // remainder survives
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (s.at(t, j) == 0) continue;
        Int q = trunc_div(s.at(t, j), s.at(t, t));
        detail::add_col(s, j, t, q);
        detail::add_col(d.v, j, t, q);
        if (s.at(t, j) != 0) dirty = true;
      }
      if (dirty) {
        std::size_t pi2 = t, pj2 = t;
        detail::find_pivot(s, t, pi2, pj2);
        detail::swap_rows(s, t, pi2);
        detail::swap_rows(d.u, t, pi2);
        detail::swap_cols(s, t, pj2);
        detail::swap_cols(d.v, t, pj2);
        continue;
      }
      // Pivot is lone. Enforce divisibility of the trailing block.
      bool fixed = true;
      for (std::size_t i = t + 1; i < m && fixed; ++i)
        for (std::size_t j = t + 1; j < n && fixed; ++j)
          if (!divides(s.at(t, t), s.at(i, j))) {
            detail::add_row(s, t, i, Int(-1));  // fold row i into row t
            detail::add_row(d.u, t, i, Int(-1));
            fixed = false;
          }
      if (fixed) break;
    }

    if (s.at(t, t) < 0) {
      detail::negate_row(s, t);
      detail::negate_row(d.u, t);
    }
  }

  d.invariant_factors.resize(steps);
  for (std::size_t t = 0; t < steps; ++t) d.invariant_factors[t] = s.at(t, t);
  return d;
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`:
/// zero rows dropped, pivots positive with increasing column index, entries
/// above each pivot reduced into [0, pivot). Canonical, so equal lattices
/// compare equal.
inline IntMatrix hermite_rows(const IntMatrix& m) {
  std::size_t rows = m.rows(), cols = m.cols();
  IntMatrix h = m;
  std::size_t r = 0;  // next pivot row
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    // gcd-fold all entries of column c in rows >= r into row r
    std::size_t nz = r;
    while (nz < rows && h.at(nz, c) == 0) ++nz;
    if (nz == rows) continue;
    detail::swap_rows(h, r, nz);
    for (std::size_t i = r + 1; i < rows; ++i) {
      while (h.at(i, c) != 0) {
        Int q = trunc_div(h.at(r, c), h.at(i, c));
        detail::add_row(h, r, i, q);
        if (h.at(r, c) == 0) {
          detail::swap_rows(h, r, i);
          break;
        }
        q = trunc_div(h.at(i, c), h.at(r, c));
        detail::add_row(h, i, r, q);
      }
    }
    if (h.at(r, c) < 0) detail::negate_row(h, r);
    for (std::size_t i = 0; i < r; ++i) {
      Int q = floor_div(h.at(i, c), h.at(r, c));
      detail::add_row(h, i, r, q);
    }
    ++r;
  }
  std::vector<IntVec> keep;
  for (std::size_t i = 0; i < r; ++i) keep.push_back(h.row(i));
  if (keep.empty()) return IntMatrix(0, cols);
  IntMatrix out(keep.size(), cols);
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) out.at(i, j) = keep[i][j];
  return out;
}

/// Basis of {y : A y = 0} over Z, returned as Hermite-reduced rows.
/// Integer kernels are saturated, so this basis also spans the rational
/// kernel.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  SmithDecomposition d = smith_normal_form(a);
  std::size_t rank = d.rank();
  std::size_t n = a.cols();
  if (rank == n) return IntMatrix(0, n);
  IntMatrix basis(n - rank, n);
  for (std::size_t k = rank; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) basis.at(k - rank, i) = d.v.at(i, k);
  return hermite_rows(basis);
}

struct IntegerSolution {
  IntVec particular;
  IntMatrix kernel;  // Hermite-reduced rows spanning {y : A y = 0}
};

/// Exact solution of A x = b over Z, or nullopt when none exists.
inline std::optional<IntegerSolution> integer_solve(const IntMatrix& a,
                                                    const IntVec& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("integer_solve: size");
  SmithDecomposition d = smith_normal_form(a);
  IntVec c = d.u * b;
  std::size_t n = a.cols(), m = a.rows();
  IntVec y(n, Int(0));
  std::size_t steps = std::min(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const Int di = i < steps ? d.invariant_factors[i] : Int(0);
    if (di == 0) {
      if (c[i] != 0) return std::nullopt;
    } else {
      if (!divides(di, c[i])) return std::nullopt;
      y[i] = c[i] / di;
    }
  }
  IntegerSolution sol;
  sol.particular = d.v * y;
  sol.kernel = integer_kernel(a);
  return sol;
}

/// Coordinates of `v` in the row lattice of a Hermite basis `h`; nullopt when
/// v is not an integer combination.
inline std::optional<IntVec> hermite_coordinates(const IntMatrix& h,
                                                 const IntVec& v) {
  if (v.size() != h.cols()) throw std::invalid_argument("coords: size");
  IntVec rem = v;
  IntVec coef(h.rows(), Int(0));
  for (std::size_t i = 0; i < h.rows(); ++i) {
    std::size_t p = 0;
    while (p < h.cols() && h.at(i, p) == 0) ++p;
    if (p == h.cols()) continue;
    // rows below can no longer touch columns left of p
    for (std::size_t j = 0; j < p; ++j)
      if (rem[j] != 0) return std::nullopt;
    if (!divides(h.at(i, p), rem[p])) return std::nullopt;
    Int q = rem[p] / h.at(i, p);
    coef[i] = q;
    for (std::size_t j = 0; j < h.cols(); ++j) rem[j] -= q * h.at(i, j);
  }
  if (!is_zero_vec(rem)) return std::nullopt;
  return coef;
}

struct AbelianInvariants {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;  // factors > 1, divisibility chain

  bool operator==(const AbelianInvariants& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }
};

/// Invariants of Z^n / (row lattice of `relations`).
inline AbelianInvariants quotient_invariants(std::size_t n,
                                             const IntMatrix& relations) {
  AbelianInvariants inv;
  if (relations.rows() == 0) {
    inv.free_rank = n;
    return inv;
  }
  SmithDecomposition d = smith_normal_form(relations);
  std::size_t rank = d.rank();
  inv.free_rank = n - rank;
  for (const Int& f : d.invariant_factors)
    if (f > 1) inv.torsion.push_back(f);
  return inv;
}

/// Invariants of (row lattice of z) / (row lattice of b), with b contained in
/// the saturated lattice spanned by z's Hermite rows.
inline AbelianInvariants lattice_quotient_invariants(const IntMatrix& z,
                                                     const IntMatrix& b) {
  IntMatrix coords(b.rows(), z.rows());
  for (std::size_t i = 0; i < b.rows(); ++i) {
    auto c = hermite_coordinates(z, b.row(i));
    if (!c)
      throw std::invalid_argument(
          "lattice_quotient_invariants: subgroup not inside lattice");
    for (std::size_t j = 0; j < z.rows(); ++j) coords.at(i, j) = (*c)[j];
  }
  return quotient_invariants(z.rows(), coords);
}

}  // namespace kfib
