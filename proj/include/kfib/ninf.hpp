#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kfib/int_matrix.hpp"
#include "kfib/integers.hpp"
#include "kfib/rational.hpp"
#include "kfib/word.hpp"

namespace kfib {

/// Quotient F_n -> G with exact canonical forms. Two families cover the
/// instructive infinite quotients without touching general word problems:
/// free abelian Z^k (one integer vector per generator) and integer matrix
/// groups (one unimodular matrix per generator).
class GroupOracle {
 public:
  enum class Family { zk, matrix };

  // Canonical element form: the Z^k vector, or the matrix flattened row-major.
  using Elem = IntVec;

  static GroupOracle make_zk(std::vector<IntVec> generator_vectors) {
    GroupOracle o;
    o.family_ = Family::zk;
    o.rank_ = generator_vectors.size();
    if (o.rank_ == 0) throw std::invalid_argument("oracle: no generators");
    o.dim_ = generator_vectors[0].size();
    if (o.dim_ == 0) throw std::invalid_argument("oracle: k must be >= 1");
    for (const IntVec& v : generator_vectors)
      if (v.size() != o.dim_)
        throw std::invalid_argument("oracle: generator vector size mismatch");
    o.zk_gens_ = std::move(generator_vectors);
    return o;
  }

  static GroupOracle make_matrix(std::vector<IntMatrix> generator_matrices) {
    GroupOracle o;
    o.family_ = Family::matrix;
    o.rank_ = generator_matrices.size();
    if (o.rank_ == 0) throw std::invalid_argument("oracle: no generators");
    o.dim_ = generator_matrices[0].rows();
    for (const IntMatrix& m : generator_matrices) {
      if (m.rows() != o.dim_ || m.cols() != o.dim_)
        throw std::invalid_argument("oracle: generator matrices must agree in size");
      auto inv = unimodular_inverse(m);
      if (!inv)
        throw std::invalid_argument("oracle: generator matrix not unimodular");
      o.mat_invs_.push_back(*inv);
    }
    o.mat_gens_ = std::move(generator_matrices);
    return o;
  }

  Family family() const { return family_; }
  std::size_t rank() const { return rank_; }
  std::size_t dim() const { return dim_; }

  Elem identity() const {
    if (family_ == Family::zk) return IntVec(dim_, Int(0));
    return flatten(IntMatrix::identity(dim_));
  }

  Elem apply_letter(const Elem& e, Letter l) const {
    std::size_t j = generator_index(l);
    if (j >= rank_) throw std::invalid_argument("oracle: letter out of range");
    if (family_ == Family::zk) {
      Elem r = e;
      for (std::size_t i = 0; i < dim_; ++i)
        r[i] += l > 0 ? zk_gens_[j][i] : Int(-zk_gens_[j][i]);
      return r;
    }
    return flatten(unflatten(e) * (l > 0 ? mat_gens_[j] : mat_invs_[j]));
  }

  Elem multiply(const Elem& a, const Elem& b) const {
    if (family_ == Family::zk) return a + b;
    return flatten(unflatten(a) * unflatten(b));
  }

  Elem evaluate(const Word& w) const {
    Elem e = identity();
    for (Letter l : w) e = apply_letter(e, l);
    return e;
  }

  std::string elem_to_string(const Elem& e) const {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) out << ',';
      out << e[i];
    }
    out << ')';
    return out.str();
  }

 private:
  Elem flatten(const IntMatrix& m) const {
    Elem e(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) e[i * dim_ + j] = m.at(i, j);
    return e;
  }

  IntMatrix unflatten(const Elem& e) const {
    IntMatrix m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m.at(i, j) = e[i * dim_ + j];
    return m;
  }

  Family family_ = Family::zk;
  std::size_t rank_ = 0;
  std::size_t dim_ = 0;
  std::vector<IntVec> zk_gens_;
  std::vector<IntMatrix> mat_gens_, mat_invs_;
};

/// Ball of radius R around the identity in the Cayley graph of the quotient,
/// with every edge whose endpoints both lie in the ball. Vertex order is the
/// breadth-first discovery order (generator order x1 < x1^-1 < x2 < ...),
/// which makes everything downstream deterministic.
struct CayleyFragment {
  GroupOracle oracle;
  long radius = 0;
  std::vector<GroupOracle::Elem> vertices;         // [0] = identity
  std::map<GroupOracle::Elem, std::size_t> index;  // canonical form -> vertex
  std::vector<std::vector<long>> succ;  // succ[v][j] = v * x_{j+1}, -1 if out
  std::vector<std::vector<long>> pred;  // pred[v][j] = v * x_{j+1}^-1
  std::vector<long> dist;

  std::size_t vertex_count() const { return vertices.size(); }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& row : succ)
      for (long t : row)
        if (t != -1) ++e;
    return e;
  }

  /// rank H_1 = edges - vertices + 1 (the ball is connected).
  std::size_t homology_rank() const {
    return edge_count() - vertex_count() + 1;
  }

  long vertex_of(const GroupOracle::Elem& e) const {
    auto it = index.find(e);
    return it == index.end() ? -1 : static_cast<long>(it->second);
  }
};

inline CayleyFragment explore(const GroupOracle& oracle, long radius,
                              std::size_t max_vertices = 1000000) {
  if (radius < 1) throw std::invalid_argument("explore: need R >= 1");
  CayleyFragment f{oracle, radius, {}, {}, {}, {}, {}};
  f.vertices.push_back(oracle.identity());
  f.index[f.vertices[0]] = 0;
  f.dist.push_back(0);
  for (std::size_t head = 0; head < f.vertices.size(); ++head) {
    if (f.dist[head] >= radius) break;  // BFS order: all later are as deep
    for (std::size_t j = 0; j < oracle.rank(); ++j)
      for (Letter l : {static_cast<Letter>(j + 1), static_cast<Letter>(-(long)(j + 1))}) {
        auto e = oracle.apply_letter(f.vertices[head], l);
        if (f.index.count(e)) continue;
        if (f.vertices.size() >= max_vertices)
          throw resource_error(
              "explore: vertex cap " + std::to_string(max_vertices) +
                  " exceeded at radius " + std::to_string(f.dist[head]),
              f.dist[head]);
        f.index[e] = f.vertices.size();
        f.vertices.push_back(e);
        f.dist.push_back(f.dist[head] + 1);
      }
  }
  f.succ.assign(f.vertices.size(), std::vector<long>(oracle.rank(), -1));
  f.pred.assign(f.vertices.size(), std::vector<long>(oracle.rank(), -1));
  for (std::size_t v = 0; v < f.vertices.size(); ++v)
    for (std::size_t j = 0; j < oracle.rank(); ++j) {
      long t = f.vertex_of(oracle.apply_letter(f.vertices[v], j + 1));
      if (t != -1) {
        f.succ[v][j] = t;
        f.pred[static_cast<std::size_t>(t)][j] = static_cast<long>(v);
      }
    }
  return f;
}

namespace detail {

inline long step(const CayleyFragment& f, long v, Letter l) {
  if (v < 0) return -1;
  std::size_t j = generator_index(l);
  return l > 0 ? f.succ[static_cast<std::size_t>(v)][j]
               : f.pred[static_cast<std::size_t>(v)][j];
}

inline std::vector<Letter> letter_alphabet(std::size_t rank) {
  std::vector<Letter> a;
  for (std::size_t j = 0; j < rank; ++j) {
    a.push_back(static_cast<Letter>(j + 1));
    a.push_back(-static_cast<Letter>(j + 1));
  }
  return a;
}

}  // namespace detail

/// Shortest freely reduced nonempty word mapping to the identity, realized
/// as a closed path at the base vertex; ties broken lexicographically in the
/// order x1 < x1^-1 < x2 < ... . Words longer than 2R cannot be certified
/// inside the ball (a shortest kernel word's prefixes stay within distance
/// L/2 of the identity), so absence means no kernel word of length <= 2R.
inline std::optional<Word> shortest_kernel_cycle(const CayleyFragment& f) {
  const std::size_t n = f.oracle.rank();
  const auto alphabet = detail::letter_alphabet(n);
  const long max_len = 2 * f.radius;
  const std::size_t V = f.vertex_count();
  // State: vertex * (last letter + none). Last letter bans its inverse.
  const std::size_t L = 2 * n + 1;  // slot 2n = "no previous letter"
  auto slot_of = [n](Letter l) {
    return static_cast<std::size_t>(letter_rank(l));
  };

  // Layer-by-layer reachability from the start state; stop at first closing
  // length.
  std::vector<char> cur(V * L, 0), nxt;
  cur[0 * L + 2 * n] = 1;
  long found_len = -1;
  for (long len = 1; len <= max_len && found_len < 0; ++len) {
    nxt.assign(V * L, 0);
    bool any = false;
    for (std::size_t v = 0; v < V; ++v)
      for (std::size_t s = 0; s < L; ++s) {
        if (!cur[v * L + s]) continue;
        for (Letter l : alphabet) {
          if (s < 2 * n && slot_of(l) == (s ^ 1u)) continue;  // reversal
          long t = detail::step(f, static_cast<long>(v), l);
          if (t < 0) continue;
          nxt[static_cast<std::size_t>(t) * L + slot_of(l)] = 1;
          any = true;
          if (t == 0) found_len = found_len < 0 ? len : found_len;
        }
      }
    cur.swap(nxt);
    if (!any) break;
  }
  if (found_len < 0) return std::nullopt;

  // Exact-length feasibility table: can state reach the base in exactly t
  // freely reduced steps?
  if (static_cast<unsigned long long>(found_len + 1) * V * L > 200000000ULL)
    throw resource_error("shortest_kernel_cycle: feasibility table too large",
                         f.radius);
  std::vector<std::vector<char>> feas(
      found_len + 1, std::vector<char>(V * L, 0));
  for (std::size_t s = 0; s < L; ++s) feas[0][0 * L + s] = 1;
  for (long t = 1; t <= found_len; ++t)
    for (std::size_t v = 0; v < V; ++v)
      for (std::size_t s = 0; s < L; ++s) {
        for (Letter l : alphabet) {
          if (s < 2 * n && slot_of(l) == (s ^ 1u)) continue;
          long w = detail::step(f, static_cast<long>(v), l);
          if (w >= 0 && feas[t - 1][static_cast<std::size_t>(w) * L + slot_of(l)]) {
            feas[t][v * L + s] = 1;
            break;
          }
        }
      }

  // Greedy lexicographic reconstruction; the walk per word is unique since
  // each label moves deterministically.
  Word word;
  long v = 0;
  std::size_t s = 2 * n;
  for (long t = found_len; t > 0; --t) {
    bool moved = false;
    for (Letter l : alphabet) {
      if (s < 2 * n && slot_of(l) == (s ^ 1u)) continue;
      long w = detail::step(f, v, l);
      if (w >= 0 && feas[t - 1][static_cast<std::size_t>(w) * L + slot_of(l)]) {
        word.push_back(l);
        v = w;
        s = slot_of(l);
        moved = true;
        break;
      }
    }
    if (!moved) throw std::logic_error("shortest_kernel_cycle: greedy stuck");
  }
  if (v != 0) throw std::logic_error("shortest_kernel_cycle: did not close");
  return word;
}

/// Vertex support of a based cycle: the elements visited by its prefixes
/// (including the identity), as a deduplicated list in visit order.
inline std::vector<GroupOracle::Elem> cycle_support(const CayleyFragment& f,
                                                    const Word& cycle) {
  std::vector<GroupOracle::Elem> support;
  std::map<GroupOracle::Elem, bool> seen;
  GroupOracle::Elem cur = f.oracle.identity();
  support.push_back(cur);
  seen[cur] = true;
  for (std::size_t k = 0; k + 1 < cycle.size(); ++k) {
    cur = f.oracle.apply_letter(cur, cycle[k]);
    if (!seen.count(cur)) {
      support.push_back(cur);
      seen[cur] = true;
    }
  }
  return support;
}

struct TranslateSelection {
  std::vector<GroupOracle::Elem> translates;
  bool requested_met = false;
  std::string diagnostic;  // nonempty when fewer than requested
};

/// Greedy selection, in BFS vertex order, of translates h with h*M inside
/// the fragment and pairwise disjoint from all previously accepted
/// translated supports (equivalently h not in h_beta * M * M^-1).
inline TranslateSelection disjoint_translates(
    const CayleyFragment& f, const std::vector<GroupOracle::Elem>& support,
    std::size_t want) {
  TranslateSelection sel;
  std::map<GroupOracle::Elem, bool> occupied;
  for (const auto& h : f.vertices) {
    if (sel.translates.size() >= want) break;
    std::vector<GroupOracle::Elem> translated;
    bool ok = true;
    for (const auto& x : support) {
      auto hx = f.oracle.multiply(h, x);
      if (f.vertex_of(hx) < 0 || occupied.count(hx)) {
        ok = false;
        break;
      }
      translated.push_back(hx);
    }
    if (!ok) continue;
    for (const auto& hx : translated) occupied[hx] = true;
    sel.translates.push_back(h);
  }
  sel.requested_met = sel.translates.size() >= want;
  if (!sel.requested_met)
    sel.diagnostic = "fragment too small for " + std::to_string(want) +
                     " disjoint translates (got " +
                     std::to_string(sel.translates.size()) +
                     "); increase the radius";
  return sel;
}

/// Certified lower bound on rank H_1 of the fragment: a kernel cycle and
/// pairwise disjoint translated copies of it. Disjoint supports make the
/// translated cycles homologically independent, so rank H_1 >= bound.
struct NinfWitness {
  Word cycle;
  std::vector<GroupOracle::Elem> support;
  std::vector<GroupOracle::Elem> translates;
  std::size_t rank_bound = 0;
  long radius = 0;
  bool requested_met = true;
  std::string diagnostic;
};

inline std::optional<NinfWitness> ninf_witness(const GroupOracle& oracle,
                                               long radius, std::size_t cycles,
                                               std::size_t max_vertices =
                                                   1000000) {
  CayleyFragment f = explore(oracle, radius, max_vertices);
  auto cycle = shortest_kernel_cycle(f);
  if (!cycle) return std::nullopt;
  auto support = cycle_support(f, *cycle);
  auto sel = disjoint_translates(f, support, cycles);

  // Independent re-validation of everything the certificate asserts.
  if (cycle->empty() || f.oracle.evaluate(*cycle) != oracle.identity())
    throw std::logic_error("ninf_witness: cycle does not map to identity");
  std::map<GroupOracle::Elem, bool> seen;
  for (const auto& h : sel.translates) {
    long v = f.vertex_of(h);
    if (v < 0) throw std::logic_error("ninf_witness: translate left fragment");
    for (const auto& x : support) {
      auto hx = oracle.multiply(h, x);
      if (seen.count(hx))
        throw std::logic_error("ninf_witness: translated supports intersect");
      seen[hx] = true;
    }
    for (Letter l : *cycle) {  // translated cycle closes inside the fragment
      v = detail::step(f, v, l);
      if (v < 0)
        throw std::logic_error("ninf_witness: translated cycle leaves fragment");
    }
    if (f.vertices[static_cast<std::size_t>(v)] != h)
      throw std::logic_error("ninf_witness: translated cycle does not close");
  }

  NinfWitness w;
  w.cycle = *cycle;
  w.support = support;
  w.translates = sel.translates;
  w.rank_bound = sel.translates.size();
  w.radius = radius;
  w.requested_met = sel.requested_met;
  w.diagnostic = sel.diagnostic;
  return w;
}

// Oracle file format:
//   family zk k          | family mat d
//   gen a v1 ... vk      | gen a
//   ...                  | <d rows of d integers> ...
inline GroupOracle parse_oracle(std::istream& in) {
  std::string key;
  if (!(in >> key) || key != "family")
    throw std::invalid_argument("oracle: expected 'family zk k' or 'family mat d'");
  std::string fam;
  long dim = 0;
  if (!(in >> fam >> dim) || dim < 1)
    throw std::invalid_argument("oracle: bad family line");
  std::size_t expect = 0;
  if (fam == "zk") {
    std::vector<IntVec> gens;
    while (in >> key) {
      if (key != "gen") throw std::invalid_argument("oracle: expected 'gen'");
      std::string name;
      if (!(in >> name) || name.size() != 1 || name[0] < 'a' || name[0] > 'z')
        throw std::invalid_argument("oracle: bad generator name");
      if (static_cast<std::size_t>(name[0] - 'a') != expect)
        throw std::invalid_argument("oracle: generators must be a, b, c, ... in order");
      ++expect;
      IntVec v(dim);
      for (long i = 0; i < dim; ++i) {
        std::string tok;
        if (!(in >> tok)) throw std::invalid_argument("oracle: short vector");
        v[i] = Int(tok);
      }
      gens.push_back(std::move(v));
    }
    return GroupOracle::make_zk(std::move(gens));
  }
  if (fam == "mat") {
    std::vector<IntMatrix> gens;
    while (in >> key) {
      if (key != "gen") throw std::invalid_argument("oracle: expected 'gen'");
      std::string name;
      if (!(in >> name) || name.size() != 1 || name[0] < 'a' || name[0] > 'z')
        throw std::invalid_argument("oracle: bad generator name");
      if (static_cast<std::size_t>(name[0] - 'a') != expect)
        throw std::invalid_argument("oracle: generators must be a, b, c, ... in order");
      ++expect;
      IntMatrix m(dim, dim);
      for (long i = 0; i < dim; ++i)
        for (long j = 0; j < dim; ++j) {
          std::string tok;
          if (!(in >> tok)) throw std::invalid_argument("oracle: short matrix");
          m.at(i, j) = Int(tok);
        }
      gens.push_back(std::move(m));
    }
    return GroupOracle::make_matrix(std::move(gens));
  }
  throw std::invalid_argument("oracle: family must be zk or mat");
}

inline GroupOracle parse_oracle(const std::string& text) {
  std::istringstream in(text);
  return parse_oracle(in);
}

inline void print_oracle(const GroupOracle& o, std::ostream& out) {
  if (o.family() == GroupOracle::Family::zk) {
    out << "family zk " << o.dim() << '\n';
    for (std::size_t g = 0; g < o.rank(); ++g) {
      out << "gen " << static_cast<char>('a' + g);
      auto v = o.evaluate({static_cast<Letter>(g + 1)});
      for (const Int& x : v) out << ' ' << x;
      out << '\n';
    }
    return;
  }
  out << "family mat " << o.dim() << '\n';
  for (std::size_t g = 0; g < o.rank(); ++g) {
    out << "gen " << static_cast<char>('a' + g) << '\n';
    auto v = o.evaluate({static_cast<Letter>(g + 1)});
    for (std::size_t i = 0; i < o.dim(); ++i) {
      for (std::size_t j = 0; j < o.dim(); ++j) {
        if (j) out << ' ';
        out << v[i * o.dim() + j];
      }
      out << '\n';
    }
  }
}

inline std::string oracle_to_text(const GroupOracle& o) {
  std::ostringstream out;
  print_oracle(o, out);
  return out.str();
}

}  // namespace kfib
