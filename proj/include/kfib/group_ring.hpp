#pragma once

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kfib/int_matrix.hpp"
#include "kfib/integers.hpp"
#include "kfib/word.hpp"

namespace kfib {

struct WordOrder {
  bool operator()(const Word& a, const Word& b) const {
    return word_less(a, b);
  }
};

/// Element of the integral group ring of a free group: finite formal sum of
/// (coefficient, freely reduced word) with no zero coefficients. Terms are
/// kept in canonical order (length, then lexicographic) so printing is
/// deterministic.
class GroupRingElement {
 public:
  GroupRingElement() = default;

  static GroupRingElement zero() { return {}; }
  static GroupRingElement one() { return monomial(Int(1), {}); }

  static GroupRingElement monomial(Int coeff, Word w) {
    GroupRingElement e;
    e.add_term(std::move(coeff), free_reduce(w));
    return e;
  }

  const std::map<Word, Int, WordOrder>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Int coeff, const Word& w) {
    if (coeff == 0) return;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
      terms_.emplace(w, std::move(coeff));
    } else {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  GroupRingElement operator+(const GroupRingElement& o) const {
    GroupRingElement r = *this;
    for (const auto& [w, c] : o.terms_) r.add_term(c, w);
    return r;
  }

  GroupRingElement operator-(const GroupRingElement& o) const {
    GroupRingElement r = *this;
    for (const auto& [w, c] : o.terms_) r.add_term(-c, w);
    return r;
  }

  GroupRingElement operator*(const GroupRingElement& o) const {
    GroupRingElement r;
    for (const auto& [w1, c1] : terms_)
      for (const auto& [w2, c2] : o.terms_)
        r.add_term(c1 * c2, word_concat(w1, w2));
    return r;
  }

  bool operator==(const GroupRingElement& o) const {
    return terms_ == o.terms_;
  }

  /// Augmentation: sum of coefficients (image under w -> 1).
  Int augmentation() const {
    Int s(0);
    for (const auto& [w, c] : terms_) s += c;
    return s;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [w, c] : terms_) {
      if (!first) out << (c > 0 ? " + " : " - ");
      else if (c < 0) out << "-";
      first = false;
      Int a = abs_int(c);
      if (a != 1 || w.empty()) out << a;
      if (!w.empty()) {
        if (a != 1) out << "*";
        out << word_to_string(w);
      }
    }
    return out.str();
  }

 private:
  std::map<Word, Int, WordOrder> terms_;
};

/// Fox derivative d(w)/d(x_j), j a 0-based generator index. Satisfies
/// d(x_i)/d(x_j) = delta_ij, d(uv) = d(u) + u d(v), and
/// d(x_j^-1)/d(x_j) = -x_j^-1.
inline GroupRingElement fox_derivative(const Word& w, std::size_t j) {
  GroupRingElement d;
  Word prefix;
  for (Letter l : free_reduce(w)) {
    if (generator_index(l) == j) {
      if (l > 0) {
        d.add_term(Int(1), prefix);
      } else {
        // prefix * x_j^-1 is the group element carrying the -1 coefficient
        Word p = word_concat(prefix, {l});
        d.add_term(Int(-1), p);
      }
    }
    prefix = word_concat(prefix, {l});
  }
  return d;
}

/// Evaluates a group-ring element under a matrix representation of the free
/// group: gen_images[i] acts for generator i, gen_inverses[i] for its
/// inverse.
inline IntMatrix evaluate_group_ring(const GroupRingElement& e,
                                     const std::vector<IntMatrix>& gen_images,
                                     const std::vector<IntMatrix>& gen_inverses,
                                     std::size_t dim) {
  IntMatrix acc(dim, dim);
  for (const auto& [w, c] : e.terms()) {
    IntMatrix m = IntMatrix::identity(dim);
    for (Letter l : w)
      m = m * (l > 0 ? gen_images[generator_index(l)]
                     : gen_inverses[generator_index(l)]);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < dim; ++k) acc.at(i, k) += c * m.at(i, k);
  }
  return acc;
}

}  // namespace kfib
