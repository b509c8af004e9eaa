#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kfib/int_matrix.hpp"
#include "kfib/presentation.hpp"
#include "kfib/rational.hpp"
#include "kfib/smith.hpp"
#include "kfib/word.hpp"

namespace kfib {

enum class PiKind { free_group, surface_group };

/// The acting group: F_g or Pi_g. Characters are the generator duals, so
/// b = g in the free case and b = 2g in the surface case, and
/// phi_j(x_i) = delta_ij in both.
struct PiSpec {
  PiKind kind;
  std::size_t g;

  PiSpec(PiKind k, std::size_t genus) : kind(k), g(genus) {
    if (g < 1) throw std::invalid_argument("PiSpec: need g >= 1");
  }

  std::size_t character_count() const {
    return kind == PiKind::free_group ? g : 2 * g;
  }
  std::size_t generator_count() const { return character_count(); }

  Presentation presentation() const {
    return kind == PiKind::free_group ? free_presentation(g)
                                      : surface_presentation(g);
  }

  std::string name() const {
    return (kind == PiKind::free_group ? "free:" : "surface:") +
           std::to_string(g);
  }
};

inline PiSpec parse_pi_spec(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("group spec: expected surface:g or free:g");
  std::string kind = text.substr(0, colon);
  long g = 0;
  try {
    g = std::stol(text.substr(colon + 1));
  } catch (...) {
    throw std::invalid_argument("group spec: bad genus");
  }
  if (g < 1) throw std::invalid_argument("group spec: need g >= 1");
  if (kind == "surface") return PiSpec(PiKind::surface_group, g);
  if (kind == "free") return PiSpec(PiKind::free_group, g);
  throw std::invalid_argument("group spec: expected surface:g or free:g");
}

/// A Pi-module: free lattice Z^d with one unimodular action matrix per
/// generator. The lattice stands for H^1(H, Z) of the extension kernel,
/// which is torsion free, hence the unimodularity requirement.
struct PiModule {
  std::size_t dim = 0;
  std::vector<IntMatrix> actions;
  std::vector<IntMatrix> inverses;  // filled by validate()

  PiModule(std::size_t d, std::vector<IntMatrix> acts)
      : dim(d), actions(std::move(acts)) {}

  void validate(const PiSpec& spec) {
    if (actions.size() != spec.generator_count())
      throw std::invalid_argument(
          "module: need one action matrix per generator (" +
          std::to_string(spec.generator_count()) + " for " + spec.name() + ")");
    inverses.clear();
    for (const IntMatrix& a : actions) {
      if (a.rows() != dim || a.cols() != dim)
        throw std::invalid_argument("module: action matrices must be dim x dim");
      auto inv = unimodular_inverse(a);
      if (!inv)
        throw std::invalid_argument(
            "module: action matrix not unimodular (|det| must be 1)");
      inverses.push_back(*inv);
    }
    if (spec.kind == PiKind::surface_group) {
      IntMatrix rel = act_word(spec.presentation().relators()[0]);
      if (rel != IntMatrix::identity(dim))
        throw std::invalid_argument(
            "module: surface relator does not act as the identity");
    }
  }

  IntMatrix act_word(const Word& w) const {
    IntMatrix m = IntMatrix::identity(dim);
    for (Letter l : w)
      m = m * (l > 0 ? actions[generator_index(l)]
                     : inverses[generator_index(l)]);
    return m;
  }
};

inline PiModule validated_module(const PiSpec& spec, std::size_t dim,
                                 std::vector<IntMatrix> actions) {
  PiModule m(dim, std::move(actions));
  m.validate(spec);
  return m;
}

/// Hermite basis (rows) of the invariant sublattice M^Pi, the simultaneous
/// fixed lattice of all generator actions.
inline IntMatrix invariants(const PiSpec& spec, const PiModule& m) {
  (void)spec;  // module shape is already tied to the group by validate()
  std::vector<IntMatrix> blocks;
  for (const IntMatrix& a : m.actions)
    blocks.push_back(a - IntMatrix::identity(m.dim));
  return integer_kernel(IntMatrix::vstack(blocks, m.dim));
}

namespace detail {

// Stacked system for one character j: (A_i - I) v = delta_ij * u for all i.
inline IntMatrix stacked_action_matrix(const PiModule& m) {
  std::vector<IntMatrix> blocks;
  for (const IntMatrix& a : m.actions)
    blocks.push_back(a - IntMatrix::identity(m.dim));
  return IntMatrix::vstack(blocks, m.dim);
}

inline IntVec stacked_rhs(const PiModule& m, std::size_t j, const IntVec& u) {
  IntVec rhs(m.actions.size() * m.dim, Int(0));
  for (std::size_t a = 0; a < m.dim; ++a) rhs[j * m.dim + a] = u[a];
  return rhs;
}

}  // namespace detail

/// The degenerate invariants D: all u in M^Pi such that cup product with u
/// kills every character, i.e. for each j some v_j solves
/// (A_i - I) v_j = phi_j(x_i) u. Decided over Q (the condition is
/// scaling-invariant) and returned as the Hermite basis of the integral
/// saturation: the lattice of all integer points in the rational span.
///
/// For invariant u the map gamma -> phi_j(gamma) u is automatically a
/// cocycle, so the generator equations are the whole condition.
inline IntMatrix degenerate_invariants(const PiSpec& spec, const PiModule& m) {
  IntMatrix inv = invariants(spec, m);
  const std::size_t s = inv.rows();
  const std::size_t d = m.dim;
  const std::size_t b = spec.character_count();
  if (s == 0) return IntMatrix(0, d);

  // One rational feasibility system in (c, v_1..v_b), u = inv^T c:
  //   (A_i - I) v_j - delta_ij inv^T c = 0  for all i, j.
  // The c-block of its kernel projects onto exactly the degenerate u's.
  const std::size_t cols = s + b * d;
  IntMatrix sys(b * b * d, cols);
  for (std::size_t j = 0; j < b; ++j)
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t row = 0; row < d; ++row) {
        std::size_t r = (j * b + i) * d + row;
        for (std::size_t col = 0; col < d; ++col) {
          Int v = m.actions[i].at(row, col) - (row == col ? Int(1) : Int(0));
          sys.at(r, s + j * d + col) = v;
        }
        if (i == j)
          for (std::size_t k = 0; k < s; ++k)
            sys.at(r, k) = -inv.at(k, row);
      }

  std::vector<IntVec> kernel = rational_kernel(sys);
  std::vector<IntVec> us;
  for (const IntVec& vec : kernel) {
    IntVec u(d, Int(0));
    for (std::size_t k = 0; k < s; ++k)
      for (std::size_t a = 0; a < d; ++a) u[a] += vec[k] * inv.at(k, a);
    if (!is_zero_vec(u)) us.push_back(u);
  }
  if (us.empty()) return IntMatrix(0, d);

  // Integral saturation of span_Q(us): the integer kernel of the rational
  // annihilator is saturated by construction.
  IntMatrix span = IntMatrix::from_rows(us);
  std::vector<IntVec> ann = rational_kernel(span);
  if (ann.empty()) return hermite_rows(IntMatrix::identity(d));
  return integer_kernel(IntMatrix::from_rows(ann));
}

/// Witness data for a bad monodromy module sitting inside M: a free rank
/// b+1 sublattice with basis u, v_1..v_b on which each generator x_i acts by
/// u -> u, v_j -> v_j + delta_ij u.
struct BadModuleWitness {
  PiSpec spec;
  IntVec u;
  std::vector<IntVec> vs;
};

/// All witness invariants, checked exactly: equations (1) and (2) on every
/// generator, and Z-linear independence of u, v_1..v_b.
inline bool verify_witness(const PiModule& m, const BadModuleWitness& w) {
  const std::size_t b = w.spec.character_count();
  if (m.actions.size() != b) return false;  // module/spec mismatch
  if (w.vs.size() != b || w.u.size() != m.dim) return false;
  if (is_zero_vec(w.u)) return false;
  for (std::size_t i = 0; i < b; ++i) {
    if (m.actions[i] * w.u != w.u) return false;  // (2)
    for (std::size_t j = 0; j < b; ++j) {
      IntVec expect = w.vs[j];
      if (i == j) expect = expect + w.u;
      if (m.actions[i] * w.vs[j] != expect) return false;  // (1)
    }
  }
  IntMatrix stack(b + 1, m.dim);
  for (std::size_t a = 0; a < m.dim; ++a) stack.at(0, a) = w.u[a];
  for (std::size_t j = 0; j < b; ++j)
    for (std::size_t a = 0; a < m.dim; ++a) stack.at(j + 1, a) = w.vs[j][a];
  return rational_rank(stack) == b + 1;
}

/// The built-in bad monodromy module of rank b+1 together with its witness:
/// coordinates (u, v_1, ..., v_b), A_i = I + E_{0,i}. The shears commute, so
/// for the surface kind the relator (a product of commutators) acts as the
/// identity automatically.
inline std::pair<PiModule, BadModuleWitness> build_bad_module(
    const PiSpec& spec) {
  const std::size_t b = spec.character_count();
  const std::size_t d = b + 1;
  std::vector<IntMatrix> actions;
  for (std::size_t i = 0; i < b; ++i) {
    IntMatrix a = IntMatrix::identity(d);
    a.at(0, i + 1) = 1;
    actions.push_back(a);
  }
  PiModule m = validated_module(spec, d, std::move(actions));
  BadModuleWitness w{spec, IntVec(d, Int(0)), {}};  // filled below
  w.u[0] = 1;
  for (std::size_t j = 0; j < b; ++j) {
    IntVec v(d, Int(0));
    v[j + 1] = 1;
    w.vs.push_back(v);
  }
  if (!verify_witness(m, w))
    throw std::logic_error("build_bad_module: witness failed verification");
  return {std::move(m), std::move(w)};
}

/// Extracts a bad monodromy submodule when one exists (iff D != 0):
/// u = the Hermite-first basis vector of D, scaled by the minimal positive
/// integer making every generator system integrally solvable; v_j = the
/// deterministic particular solutions.
inline std::optional<BadModuleWitness> extract_bad_submodule(
    const PiSpec& spec, const PiModule& m) {
  IntMatrix d_basis = degenerate_invariants(spec, m);
  if (d_basis.rows() == 0) return std::nullopt;
  const std::size_t b = spec.character_count();
  const std::size_t d = m.dim;
  IntVec u0 = d_basis.row(0);

  IntMatrix stack = detail::stacked_action_matrix(m);
  // Minimal lambda per character: the set {lambda : lambda * rhs_j is in the
  // integral image} is an ideal; its generator is the gcd of the
  // lambda-coordinates of the kernel of [stack | -rhs_j].
  Int lambda(1);
  for (std::size_t j = 0; j < b; ++j) {
    IntVec rhs = detail::stacked_rhs(m, j, u0);
    IntMatrix aug(stack.rows(), d + 1);
    for (std::size_t r = 0; r < stack.rows(); ++r) {
      for (std::size_t c = 0; c < d; ++c) aug.at(r, c) = stack.at(r, c);
      aug.at(r, d) = -rhs[r];
    }
    IntMatrix ker = integer_kernel(aug);
    Int gj(0);
    for (std::size_t r = 0; r < ker.rows(); ++r)
      gj = gcd_int(gj, ker.at(r, d));
    if (gj == 0)
      throw std::logic_error(
          "extract_bad_submodule: rational solvability without integral scaling");
    lambda = lcm_int(lambda, gj);
  }

  BadModuleWitness w{spec, lambda * u0, {}};
  for (std::size_t j = 0; j < b; ++j) {
    auto sol = integer_solve(stack, detail::stacked_rhs(m, j, w.u));
    if (!sol)
      throw std::logic_error("extract_bad_submodule: scaled system unsolvable");
    w.vs.push_back(sol->particular);
  }
  if (!verify_witness(m, w))
    throw std::logic_error("extract_bad_submodule: witness failed verification");
  return w;
}

/// Rational projection P with image M^Pi (x) Q, identity on it, commuting
/// with every generator action; ker P is then an invariant complement.
/// Absence is a valid answer. With M^Pi = 0 the zero projection works.
inline std::optional<RatMatrix> find_invariant_splitting(const PiSpec& spec,
                                                         const PiModule& m) {
  IntMatrix inv = invariants(spec, m);
  const std::size_t s = inv.rows();
  const std::size_t d = m.dim;
  if (s == 0) return RatMatrix(d, d);  // zero projection

  // P = Bc X with Bc = inv^T (d x s), X unknown (s x d):
  //   Bc X (A_i - I) = 0  for all i,  and  Bc X Bc = Bc.
  // (A_i Bc = Bc since the basis is invariant, so this is full commutation.)
  const std::size_t unknowns = s * d;
  const std::size_t b = spec.generator_count();
  IntMatrix sys(b * d * d + d * s, unknowns);
  IntVec rhs(sys.rows(), Int(0));
  std::size_t r = 0;
  for (std::size_t i = 0; i < b; ++i) {
    IntMatrix shifted = m.actions[i] - IntMatrix::identity(d);
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q, ++r)
        for (std::size_t k = 0; k < s; ++k)
          for (std::size_t l = 0; l < d; ++l)
            sys.at(r, k * d + l) += inv.at(k, p) * shifted.at(l, q);
  }
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t t = 0; t < s; ++t, ++r) {
      for (std::size_t k = 0; k < s; ++k)
        for (std::size_t l = 0; l < d; ++l)
          sys.at(r, k * d + l) += inv.at(k, p) * inv.at(t, l);
      rhs[r] = inv.at(t, p);
    }

  auto x = rational_solve(sys, rhs);
  if (!x) return std::nullopt;
  RatMatrix proj(d, d);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      Rat v(0);
      for (std::size_t k = 0; k < s; ++k)
        v += Rat(inv.at(k, p)) * (*x)[k * d + q];
      proj.at(p, q) = v;
    }
  return proj;
}

/// Full obstruction report for a monodromy module.
struct KahlerVerdict {
  PiSpec spec;
  std::size_t invariant_rank = 0;
  std::size_t degenerate_rank = 0;
  bool obstructed = false;
  std::optional<BadModuleWitness> witness;
  std::optional<RatMatrix> splitting;
  std::vector<std::string> notes;
};

/// Cor 7.3-style verdict: obstructed iff the degenerate invariants are
/// nonzero. For the surface kind this excludes compact Kaehler realizability;
/// the free kind carries the quasi-projective monodromy-restriction reading
/// and is labeled as such. A module can never be both obstructed and split.
inline KahlerVerdict kahler_verdict(const PiSpec& spec, const PiModule& m) {
  KahlerVerdict v{spec, 0, 0, false, std::nullopt, std::nullopt, {}};
  IntMatrix inv = invariants(spec, m);
  IntMatrix deg = degenerate_invariants(spec, m);
  v.invariant_rank = inv.rows();
  v.degenerate_rank = deg.rows();
  v.obstructed = deg.rows() > 0;
  if (v.obstructed) v.witness = extract_bad_submodule(spec, m);
  v.splitting = find_invariant_splitting(spec, m);
  if (v.obstructed && v.splitting)
    throw std::logic_error(
        "kahler_verdict: obstructed module with invariant splitting");
  if (spec.kind == PiKind::free_group)
    v.notes.push_back(
        "free-group verdict, quasi-projective reading: a nonzero degenerate "
        "invariant restricts the monodromy of fibrations over an open curve; "
        "it is not by itself a compact Kaehler exclusion");
  v.notes.push_back(
      "degeneracy decided over Q and reported as the saturated integral "
      "sublattice: a rational solution scales to an integral one, so rational "
      "and integral existence coincide");
  return v;
}

// Module file format:
//   dim d
//   gen a
//   <d rows of d integers>
//   gen b
//   ...
inline PiModule parse_module(std::istream& in) {
  std::string key;
  if (!(in >> key) || key != "dim")
    throw std::invalid_argument("module: expected 'dim d'");
  long d = 0;
  if (!(in >> d) || d < 1) throw std::invalid_argument("module: bad dim");
  std::vector<IntMatrix> actions;
  std::size_t expect = 0;
  while (in >> key) {
    if (key != "gen") throw std::invalid_argument("module: expected 'gen'");
    std::string name;
    if (!(in >> name) || name.size() != 1 || name[0] < 'a' || name[0] > 'z')
      throw std::invalid_argument("module: bad generator name");
    if (static_cast<std::size_t>(name[0] - 'a') != expect)
      throw std::invalid_argument("module: generators must be a, b, c, ... in order");
    ++expect;
    IntMatrix a(d, d);
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j) {
        std::string tok;
        if (!(in >> tok)) throw std::invalid_argument("module: short matrix");
        try {
          a.at(i, j) = Int(tok);
        } catch (const std::invalid_argument&) {
          throw std::invalid_argument("module: bad integer '" + tok + "'");
        }
      }
    actions.push_back(std::move(a));
  }
  if (actions.empty()) throw std::invalid_argument("module: no generators");
  return PiModule(static_cast<std::size_t>(d), std::move(actions));
}

inline PiModule parse_module(const std::string& text) {
  std::istringstream in(text);
  return parse_module(in);
}

inline void print_module(const PiModule& m, std::ostream& out) {
  out << "dim " << m.dim << '\n';
  for (std::size_t g = 0; g < m.actions.size(); ++g) {
    out << "gen " << static_cast<char>('a' + g) << '\n';
    for (std::size_t i = 0; i < m.dim; ++i) {
      for (std::size_t j = 0; j < m.dim; ++j) {
        if (j) out << ' ';
        out << m.actions[g].at(i, j);
      }
      out << '\n';
    }
  }
}

inline std::string module_to_text(const PiModule& m) {
  std::ostringstream out;
  print_module(m, out);
  return out.str();
}

}  // namespace kfib
