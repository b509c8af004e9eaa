#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kfib/int_matrix.hpp"
#include "kfib/presentation.hpp"
#include "kfib/word.hpp"

namespace kfib {

/// Homomorphism given by generator images. With a free target,
/// well-definedness (relator images reduce to the identity) is decidable and
/// checked at construction; otherwise it is a caller assertion, recorded in
/// `checked`.
struct GroupHom {
  Presentation source;
  Presentation target;
  std::vector<Word> images;  // one per source generator
  bool checked = false;

  GroupHom(Presentation src, Presentation tgt, std::vector<Word> imgs)
      : source(std::move(src)), target(std::move(tgt)), images(std::move(imgs)) {
    if (images.size() != source.rank())
      throw std::invalid_argument("GroupHom: one image per source generator");
    for (Word& w : images) {
      w = free_reduce(w);
      for (Letter l : w)
        if (generator_index(l) >= target.rank())
          throw std::invalid_argument("GroupHom: image letter out of range");
    }
    if (target.is_free()) {
      for (const Word& r : source.relators())
        if (!apply(r).empty())
          throw std::invalid_argument(
              "GroupHom: relator image nontrivial in free target");
      checked = true;
    }
  }

  Word apply(const Word& w) const {
    Word out;
    for (Letter l : w) {
      const Word& img = images[generator_index(l)];
      if (l > 0)
        out.insert(out.end(), img.begin(), img.end());
      else {
        Word inv = word_inverse(img);
        out.insert(out.end(), inv.begin(), inv.end());
      }
    }
    return free_reduce(out);
  }

  /// Matrix of the induced map Z^src -> Z^tgt on abelianizations; column i is
  /// the exponent vector of images[i].
  IntMatrix abelianized_matrix() const {
    IntMatrix m(target.rank(), source.rank());
    for (std::size_t i = 0; i < source.rank(); ++i) {
      auto e = exponent_vector(images[i], target.rank());
      for (std::size_t j = 0; j < target.rank(); ++j) m.at(j, i) = e[j];
    }
    return m;
  }
};

/// The standard surjection p : Pi_g -> F_n, p(a_i) = p(b_i) = x_i for i <= n
/// and the remaining handles killed. Requires g >= n: Im(p^*) is an isotropic
/// subspace of dimension n, so no surjection exists for n > g.
inline GroupHom standard_surjection(std::size_t g, std::size_t n) {
  if (n < 1 || n > g)
    throw std::invalid_argument(
        "standard_surjection: a surjection Pi_g -> F_n exists iff g >= n >= 1");
  std::vector<Word> images(2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    Word x = i < n ? Word{static_cast<Letter>(i + 1)} : Word{};
    images[surface_a_index(i)] = x;
    images[surface_b_index(i)] = x;
  }
  return GroupHom(surface_presentation(g), free_presentation(n), images);
}

}  // namespace kfib
