#pragma once

// The delta_n(k) divisibility calculus: the alternating binomial sum, its
// Stirling-number cross-check, the prime-divisibility sweep, and the
// torsion-action shadow on order-p classes.

#include "gray/int_types.hpp"

#include <vector>

namespace gray {

Int factorial(long n);
Int binomial(long n, long k);  // Pascal recurrence, exact

// delta_n(k) = sum_{i=1}^n (-1)^(n-i) C(n,i) i^k
Int delta(long n, long k);

// Stirling number of the second kind S(k, n) by recurrence.
Int stirling_second(long k, long n);

// Independent route: n! * S(k, n). Agrees with delta(n, k) everywhere.
Int stirling_oracle(long n, long k);

// Exact table of delta values over 1 <= n <= max_n, 1 <= k <= max_k.
// Construction computes both routes and refuses to emit on any mismatch.
class DeltaTable {
 public:
  static DeltaTable build(long max_n, long max_k);

  long max_n() const { return max_n_; }
  long max_k() const { return max_k_; }
  const Int& at(long n, long k) const;

 private:
  DeltaTable(long max_n, long max_k, std::vector<Int> values);
  long max_n_, max_k_;
  std::vector<Int> values_;
};

struct Lemma24Report {
  Int p;
  long n_max = 0;
  bool all_divisible = false;      // p | delta_n(p) for 2 <= n <= n_max
  bool congruence_chain_ok = false;  // termwise i^p == i and delta_n(1) == 0
};

// Throws std::invalid_argument for non-prime p.
Lemma24Report check_lemma_2_4(const Int& p, long n_max);

// delta_n(p) mod p: the action of the n-th generator on an order-p class.
// Equals 1 for n == 1 and 0 for every n > 1.
Int torsion_action(long n, const Int& p);

}  // namespace gray
