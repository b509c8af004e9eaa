#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kfib {

// A letter is a signed 1-based generator index: +j is generator j-1, -j its
// inverse. Words are always stored freely reduced; the empty word is the
// identity.
using Letter = int;
using Word = std::vector<Letter>;

inline Letter inverse_letter(Letter l) { return -l; }

inline std::size_t generator_index(Letter l) {
  return static_cast<std::size_t>((l > 0 ? l : -l) - 1);
}

// Order x1 < x1^-1 < x2 < x2^-1 < ... used for lexicographic tie-breaking
// and canonical group-ring printing.
inline int letter_rank(Letter l) {
  int j = l > 0 ? l : -l;
  return 2 * (j - 1) + (l < 0 ? 1 : 0);
}

inline bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return letter_rank(a[i]) < letter_rank(b[i]);
  return false;
}

/// Free reduction: cancels adjacent x x^-1 pairs until none remain.
/// Idempotent and length-nonincreasing.
inline Word free_reduce(const Word& letters) {
  Word out;
  out.reserve(letters.size());
  for (Letter l : letters) {
    if (l == 0) throw std::invalid_argument("free_reduce: zero letter");
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

inline Word word_inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

inline Word word_concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return free_reduce(out);
}

inline Word word_pow(const Word& w, long e) {
  Word base = e >= 0 ? w : word_inverse(w);
  long reps = e >= 0 ? e : -e;
  Word out;
  for (long i = 0; i < reps; ++i) out = word_concat(out, base);
  return out;
}

inline Word word_conjugate(const Word& w, const Word& by) {
  return word_concat(word_concat(by, w), word_inverse(by));
}

inline Word commutator(const Word& a, const Word& b) {
  return word_concat(word_concat(a, b),
                     word_concat(word_inverse(a), word_inverse(b)));
}

// File syntax: lowercase letter = generator ('a' is x1), uppercase = inverse.
inline Word parse_word(const std::string& text, std::size_t rank) {
  Word w;
  for (char ch : text) {
    Letter l;
    if (ch >= 'a' && ch <= 'z')
      l = static_cast<Letter>(ch - 'a' + 1);
    else if (ch >= 'A' && ch <= 'Z')
      l = -static_cast<Letter>(ch - 'A' + 1);
    else
      throw std::invalid_argument(std::string("bad word character '") + ch +
                                  "'");
    if (generator_index(l) >= rank)
      throw std::invalid_argument(std::string("letter '") + ch +
                                  "' outside generator range");
    w.push_back(l);
  }
  return free_reduce(w);
}

inline std::string word_to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (Letter l : w) {
    std::size_t j = generator_index(l);
    if (j >= 26) throw std::invalid_argument("word_to_string: rank > 26");
    s += static_cast<char>((l > 0 ? 'a' : 'A') + j);
  }
  return s;
}

/// Exponent-sum vector of w in Z^rank.
inline std::vector<long> exponent_vector(const Word& w, std::size_t rank) {
  std::vector<long> e(rank, 0);
  for (Letter l : w) {
    std::size_t j = generator_index(l);
    if (j >= rank) throw std::invalid_argument("exponent_vector: rank");
    e[j] += l > 0 ? 1 : -1;
  }
  return e;
}

}  // namespace kfib
