#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kfib/int_matrix.hpp"
#include "kfib/smith.hpp"
#include "kfib/word.hpp"

namespace kfib {

/// Finite presentation: `rank` generators, freely reduced nonempty relators.
class Presentation {
 public:
  Presentation(std::size_t rank, std::vector<Word> relators = {})
      : rank_(rank) {
    for (Word& r : relators) {
      r = free_reduce(r);
      if (r.empty())
        throw std::invalid_argument("Presentation: empty relator");
      for (Letter l : r)
        if (generator_index(l) >= rank_)
          throw std::invalid_argument("Presentation: relator letter out of range");
      relators_.push_back(r);
    }
  }

  std::size_t rank() const { return rank_; }
  const std::vector<Word>& relators() const { return relators_; }
  bool is_free() const { return relators_.empty(); }

  bool operator==(const Presentation& o) const {
    return rank_ == o.rank_ && relators_ == o.relators_;
  }

  /// One row per relator, one column per generator: exponent sums.
  IntMatrix relator_exponent_matrix() const {
    IntMatrix e(relators_.size(), rank_);
    for (std::size_t i = 0; i < relators_.size(); ++i) {
      auto v = exponent_vector(relators_[i], rank_);
      for (std::size_t j = 0; j < rank_; ++j) e.at(i, j) = v[j];
    }
    return e;
  }

 private:
  std::size_t rank_;
  std::vector<Word> relators_;
};

inline AbelianInvariants abelianization(const Presentation& p) {
  return quotient_invariants(p.rank(), p.relator_exponent_matrix());
}

/// Genus-g surface group, generators interleaved a1,b1,...,ag,bg with the
/// single relator [a1,b1]...[ag,bg]. g = 1 (the torus) is allowed for
/// testing; g = 0 is rejected since the sphere group is trivial.
inline Presentation surface_presentation(std::size_t g) {
  if (g < 1) throw std::invalid_argument("surface_presentation: need g >= 1");
  Word rel;
  for (std::size_t i = 0; i < g; ++i) {
    Letter a = static_cast<Letter>(2 * i + 1);
    Letter b = static_cast<Letter>(2 * i + 2);
    Word c = commutator({a}, {b});
    rel.insert(rel.end(), c.begin(), c.end());
  }
  return Presentation(2 * g, {rel});
}

inline std::size_t surface_a_index(std::size_t i) { return 2 * i; }
inline std::size_t surface_b_index(std::size_t i) { return 2 * i + 1; }

inline Presentation free_presentation(std::size_t n) {
  if (n < 1) throw std::invalid_argument("free_presentation: need n >= 1");
  return Presentation(n, {});
}

/// Recognizes the exact output of surface_presentation (used by the CLI to
/// auto-declare asphericity).
inline bool is_surface_presentation(const Presentation& p) {
  if (p.rank() == 0 || p.rank() % 2 != 0 || p.relators().size() != 1)
    return false;
  return p == surface_presentation(p.rank() / 2);
}

// Presentation file format (UTF-8, line oriented):
//   % comment
//   gens a b c
//   rel abAB
inline Presentation parse_presentation(std::istream& in) {
  std::string line;
  bool have_gens = false;
  std::size_t rank = 0;
  std::vector<Word> relators;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key[0] == '%') continue;
    if (key == "gens") {
      if (have_gens)
        throw std::invalid_argument("presentation: duplicate gens line");
      std::string name;
      std::size_t expect = 0;
      while (ls >> name) {
        if (name.size() != 1 || name[0] < 'a' || name[0] > 'z')
          throw std::invalid_argument("presentation: generator names are single lowercase letters");
        if (static_cast<std::size_t>(name[0] - 'a') != expect)
          throw std::invalid_argument("presentation: generators must be a, b, c, ... in order");
        ++expect;
      }
      rank = expect;
      have_gens = true;
    } else if (key == "rel") {
      if (!have_gens)
        throw std::invalid_argument("presentation: rel before gens");
      std::string w;
      if (!(ls >> w)) throw std::invalid_argument("presentation: empty rel");
      relators.push_back(parse_word(w, rank));
      if (relators.back().empty())
        throw std::invalid_argument("presentation: relator reduces to identity");
    } else {
      throw std::invalid_argument("presentation: unknown line '" + key + "'");
    }
  }
  if (!have_gens) throw std::invalid_argument("presentation: missing gens line");
  return Presentation(rank, relators);
}

inline Presentation parse_presentation(const std::string& text) {
  std::istringstream in(text);
  return parse_presentation(in);
}

inline void print_presentation(const Presentation& p, std::ostream& out) {
  if (p.rank() > 26)
    throw std::invalid_argument(
        "print_presentation: file format names at most 26 generators");
  out << "gens";
  for (std::size_t i = 0; i < p.rank(); ++i)
    out << ' ' << static_cast<char>('a' + i);
  out << '\n';
  for (const Word& r : p.relators()) out << "rel " << word_to_string(r) << '\n';
}

inline std::string presentation_to_text(const Presentation& p) {
  std::ostringstream out;
  print_presentation(p, out);
  return out.str();
}

}  // namespace kfib
