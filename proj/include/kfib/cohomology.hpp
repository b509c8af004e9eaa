#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kfib/group_ring.hpp"
#include "kfib/homomorphism.hpp"
#include "kfib/int_matrix.hpp"
#include "kfib/presentation.hpp"
#include "kfib/rational.hpp"
#include "kfib/smith.hpp"
#include "kfib/word.hpp"

namespace kfib {

/// Basis of H^1(G, Z) = Hom(G, Z): the integer kernel of the relator
/// exponent matrix, Hermite-reduced, one class per row. For free and surface
/// presentations this is the full dual basis of the generators.
inline IntMatrix h1_basis(const Presentation& p) {
  return integer_kernel(p.relator_exponent_matrix());
}

inline Int evaluate_class(const IntVec& cls, const Word& w) {
  Int v(0);
  for (Letter l : w) {
    std::size_t j = generator_index(l);
    if (j >= cls.size()) throw std::invalid_argument("evaluate_class: rank");
    v += l > 0 ? cls[j] : Int(-cls[j]);
  }
  return v;
}

/// Matrix of the cup product pairing H^1 x H^1 -> H^2 in the h1_basis.
struct SkewForm {
  IntMatrix matrix;

  explicit SkewForm(IntMatrix m) : matrix(std::move(m)) {
    if (matrix.rows() != matrix.cols())
      throw std::invalid_argument("SkewForm: not square");
    for (std::size_t i = 0; i < matrix.rows(); ++i)
      for (std::size_t j = 0; j < matrix.cols(); ++j)
        if (matrix.at(i, j) != -matrix.at(j, i))
          throw std::invalid_argument("SkewForm: not antisymmetric");
  }

  std::size_t size() const { return matrix.rows(); }
  std::size_t rank() const { return rational_rank(matrix); }
};

namespace detail {

// Value of (phi cup psi) on the relator 2-cell: sum over letters of
// sign * phi(prefix) * psi(generator), where for an inverse letter the
// prefix includes that letter itself. Derived by lifting the 2-cell to the
// bar resolution through the Fox expansion of its boundary.
inline Int cup_on_relator(const IntVec& phi, const IntVec& psi,
                          const Word& relator) {
  Int total(0);
  IntVec prefix_exp(phi.size(), Int(0));  // exponent vector of the prefix
  auto phi_of_prefix = [&]() {
    Int v(0);
    for (std::size_t j = 0; j < phi.size(); ++j) v += phi[j] * prefix_exp[j];
    return v;
  };
  for (Letter l : relator) {
    std::size_t j = generator_index(l);
    if (l > 0) {
      total += phi_of_prefix() * psi[j];
      prefix_exp[j] += 1;
    } else {
      prefix_exp[j] -= 1;  // inverse-letter correction: shift first
      total -= phi_of_prefix() * psi[j];
    }
  }
  return total;
}

}  // namespace detail

/// Cup product form of an aspherical presentation, evaluated on the relator
/// 2-cell. Asphericity is a caller declaration (detection is undecidable);
/// surface and free presentations qualify. Free presentations give the zero
/// form (H^2 = 0). Exactly one relator with vanishing exponent sums is
/// required otherwise: that is the case where the relator cell is a 2-cycle
/// with trivial coefficients, making the pairing class-level and exactly
/// antisymmetric. Sign convention: a1 cup b1 = +1 on surface presentations.
inline SkewForm cup_form(const Presentation& p, bool declared_aspherical) {
  if (!declared_aspherical)
    throw std::invalid_argument("cup_form: presentation not declared aspherical");
  IntMatrix basis = h1_basis(p);
  std::size_t b = basis.rows();
  if (p.is_free()) return SkewForm(IntMatrix(b, b));
  if (p.relators().size() != 1)
    throw std::invalid_argument(
        "cup_form: need a free presentation or a single relator");
  const Word& r = p.relators()[0];
  auto ex = exponent_vector(r, p.rank());
  for (long e : ex)
    if (e != 0)
      throw std::invalid_argument(
          "cup_form: relator must have zero exponent sums");
  IntMatrix j(b, b);
  for (std::size_t pq = 0; pq < b; ++pq)
    for (std::size_t q = 0; q < b; ++q)
      j.at(pq, q) = detail::cup_on_relator(basis.row(pq), basis.row(q), r);
  return SkewForm(std::move(j));
}

/// V's rows are the subspace basis; isotropy means V J V^T = 0.
inline bool is_isotropic(const SkewForm& j, const IntMatrix& v) {
  if (v.cols() != j.size())
    throw std::invalid_argument("is_isotropic: dimension mismatch");
  return (v * j.matrix * v.transpose()).is_zero();
}

/// Maximal isotropic subspaces of a skew form of rank 2k on a b-dimensional
/// space have dimension b - k (radical plus a Lagrangian of the symplectic
/// part).
inline bool is_maximal_isotropic(const SkewForm& j, const IntMatrix& v) {
  if (!is_isotropic(j, v)) return false;
  std::size_t form_rank = j.rank();
  return rational_rank(v) == j.size() - form_rank / 2;
}

/// Image of h^* : H^1(target) -> H^1(source) as Hermite-reduced rows: each
/// target class composes with the abelianized matrix.
inline IntMatrix pullback_h1(const GroupHom& h) {
  IntMatrix tgt = h1_basis(h.target);
  IntMatrix ab = h.abelianized_matrix();  // tgt.rank x src.rank
  IntMatrix rows(tgt.rows(), h.source.rank());
  for (std::size_t i = 0; i < tgt.rows(); ++i) {
    IntVec cls = tgt.row(i);
    for (std::size_t s = 0; s < h.source.rank(); ++s) {
      Int v(0);
      for (std::size_t t = 0; t < h.target.rank(); ++t)
        v += cls[t] * ab.at(t, s);
      rows.at(i, s) = v;
    }
  }
  return hermite_rows(rows);
}

/// H^1 with coefficients in a module given by one action matrix per
/// generator. Cocycles are the integer kernel of the stacked Fox-derivative
/// system; coboundaries are spanned by v -> ((rho(x_j) - I)v)_j.
struct TwistedH1 {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;
  // Basis of Z^1: each cocycle assigns one module vector per generator.
  std::vector<std::vector<IntVec>> cocycle_basis;
  std::size_t cocycle_rank = 0;
};

inline TwistedH1 twisted_h1(const Presentation& p,
                            const std::vector<IntMatrix>& actions) {
  const std::size_t n = p.rank();
  if (actions.size() != n)
    throw std::invalid_argument("twisted_h1: one action matrix per generator");
  if (n == 0) throw std::invalid_argument("twisted_h1: empty presentation");
  const std::size_t d = actions[0].rows();
  std::vector<IntMatrix> inverses;
  for (const IntMatrix& a : actions) {
    if (a.rows() != d || a.cols() != d)
      throw std::invalid_argument("twisted_h1: action matrices must be d x d");
    auto inv = unimodular_inverse(a);
    if (!inv)
      throw std::invalid_argument("twisted_h1: action matrix not unimodular");
    inverses.push_back(*inv);
  }
  auto act_word = [&](const Word& w) {
    IntMatrix m = IntMatrix::identity(d);
    for (Letter l : w)
      m = m * (l > 0 ? actions[generator_index(l)]
                     : inverses[generator_index(l)]);
    return m;
  };
  for (const Word& r : p.relators())
    if (act_word(r) != IntMatrix::identity(d))
      throw std::invalid_argument(
          "twisted_h1: relator acts nontrivially, invalid module");

  // Z^1: one block row of Fox matrices per relator.
  IntMatrix fox(p.relators().size() * d, n * d);
  for (std::size_t ri = 0; ri < p.relators().size(); ++ri)
    for (std::size_t j = 0; j < n; ++j) {
      IntMatrix blk = evaluate_group_ring(fox_derivative(p.relators()[ri], j),
                                          actions, inverses, d);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t bcol = 0; bcol < d; ++bcol)
          fox.at(ri * d + a, j * d + bcol) = blk.at(a, bcol);
    }
  IntMatrix z = p.relators().empty() ? IntMatrix::identity(n * d)
                                     : integer_kernel(fox);

  // B^1: image of w -> ((A_j - I)w)_j, one generating row per lattice basis
  // vector of the module.
  IntMatrix b(d, n * d);
  for (std::size_t t = 0; t < d; ++t)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < d; ++a) {
        Int v = actions[j].at(a, t) - (a == t ? Int(1) : Int(0));
        b.at(t, j * d + a) = v;
      }

  TwistedH1 out;
  AbelianInvariants inv = lattice_quotient_invariants(z, b);
  out.free_rank = inv.free_rank;
  out.torsion = inv.torsion;
  out.cocycle_rank = z.rows();
  for (std::size_t i = 0; i < z.rows(); ++i) {
    std::vector<IntVec> c(n, IntVec(d));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < d; ++a) c[j][a] = z.at(i, j * d + a);
    out.cocycle_basis.push_back(std::move(c));
  }
  return out;
}

}  // namespace kfib
