#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace kfib {

// Arbitrary-precision integers and rationals. SNF pivots and Fox-matrix
// entries grow quickly, so fixed-width arithmetic is not an option anywhere
// in the library.
using Int = mpz_class;
using Rat = mpq_class;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm_int(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

// Floor division, needed for Hermite reduction where C-style truncation
// would leave negative residues.
inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int trunc_div(const Int& a, const Int& b) {
  Int q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline bool divides(const Int& d, const Int& a) {
  if (d == 0) return a == 0;
  return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

// Exit-code-2 condition: a bounded exploration hit its configured cap.
class resource_error : public std::runtime_error {
 public:
  resource_error(const std::string& what, long partial_radius)
      : std::runtime_error(what), partial_radius_(partial_radius) {}
  long partial_radius() const { return partial_radius_; }

 private:
  long partial_radius_;
};

}  // namespace kfib
