#pragma once

// Dense integer linear algebra over GMP bignums. All group-theoretic code in
// this library works with IntMat/IntVec; no fixed-width arithmetic anywhere.

#include <gmpxx.h>

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpz_class;
  using Nested = mpz_class;
  using Literal = long;

  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }

  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 30,
    MulCost = 50
  };
};

}  // namespace Eigen

namespace gray {

using Int = mpz_class;
using IntMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

inline Int abs(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

// Least non-negative residue, also for negative a.
inline Int mod_floor(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline bool divides(const Int& d, const Int& a) {
  if (d == 0) return a == 0;
  return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Int exact_div(const Int& a, const Int& d) {
  if (!divides(d, a)) throw std::domain_error("exact_div: not divisible");
  Int q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
  return q;
}

inline bool is_prime(const Int& p) {
  return mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

inline Int next_prime(const Int& p) {
  Int q;
  mpz_nextprime(q.get_mpz_t(), p.get_mpz_t());
  return q;
}

inline Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// First n primes, 2, 3, 5, ...
inline std::vector<Int> first_primes(std::size_t n) {
  std::vector<Int> ps;
  ps.reserve(n);
  Int p = 1;
  while (ps.size() < n) {
    p = next_prime(p);
    ps.push_back(p);
  }
  return ps;
}

// Primorial: product of the first n primes.
inline Int primorial(std::size_t n) {
  Int k = 1;
  for (const Int& p : first_primes(n)) k *= p;
  return k;
}

inline IntMat identity_mat(Index n) {
  IntMat m = IntMat::Zero(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

// Horizontal concatenation [A B]; tolerates zero-column blocks.
inline IntMat hcat(const IntMat& a, const IntMat& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) throw std::invalid_argument("hcat: row mismatch");
  IntMat r(a.rows(), a.cols() + b.cols());
  r.leftCols(a.cols()) = a;
  r.rightCols(b.cols()) = b;
  return r;
}

inline std::string to_string(const Int& a) { return a.get_str(); }

}  // namespace gray
