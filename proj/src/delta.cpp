#include "gray/delta.hpp"

#include <sstream>

namespace gray {

Int factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial: negative");
  Int f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

Int binomial(long n, long k) {
  if (n < 0 || k < 0) throw std::invalid_argument("binomial: negative");
  if (k > n) return 0;
  // Pascal recurrence row by row, exact integers throughout.
  std::vector<Int> row(static_cast<std::size_t>(n) + 1, Int(0));
  row[0] = 1;
  for (long i = 1; i <= n; ++i)
    for (long j = i; j >= 1; --j)
      row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
  return row[static_cast<std::size_t>(k)];
}

Int delta(long n, long k) {
  if (n < 1 || k < 1) throw std::invalid_argument("delta: need n, k >= 1");
  Int sum = 0;
  for (long i = 1; i <= n; ++i) {
    Int term = binomial(n, i) * pow_int(Int(i), static_cast<unsigned long>(k));
    if ((n - i) % 2 != 0)
      sum -= term;
    else
      sum += term;
  }
  return sum;
}

Int stirling_second(long k, long n) {
  if (k < 0 || n < 0) throw std::invalid_argument("stirling_second: negative");
  if (n == 0) return k == 0 ? 1 : 0;
  if (n > k) return 0;
  // S(k, n) = n*S(k-1, n) + S(k-1, n-1)
  std::vector<Int> prev(static_cast<std::size_t>(n) + 1, Int(0));
  prev[0] = 1;  // row k = 0
  for (long kk = 1; kk <= k; ++kk) {
    std::vector<Int> cur(static_cast<std::size_t>(n) + 1, Int(0));
    for (long nn = 1; nn <= n && nn <= kk; ++nn)
      cur[static_cast<std::size_t>(nn)] =
          Int(nn) * prev[static_cast<std::size_t>(nn)] +
          prev[static_cast<std::size_t>(nn - 1)];
    prev = std::move(cur);
  }
  return prev[static_cast<std::size_t>(n)];
}

Int stirling_oracle(long n, long k) {
  if (n < 1 || k < 1) throw std::invalid_argument("stirling_oracle: need n, k >= 1");
  return factorial(n) * stirling_second(k, n);
}

DeltaTable::DeltaTable(long max_n, long max_k, std::vector<Int> values)
    : max_n_(max_n), max_k_(max_k), values_(std::move(values)) {}

DeltaTable DeltaTable::build(long max_n, long max_k) {
  if (max_n < 1 || max_k < 1)
    throw std::invalid_argument("DeltaTable: bounds must be >= 1");
  std::vector<Int> values;
  values.reserve(static_cast<std::size_t>(max_n * max_k));
  for (long n = 1; n <= max_n; ++n) {
    for (long k = 1; k <= max_k; ++k) {
      Int direct = delta(n, k);
      Int via_stirling = stirling_oracle(n, k);
      if (direct != via_stirling) {
        std::ostringstream os;
        os << "DeltaTable: route mismatch at n=" << n << " k=" << k;
        throw std::logic_error(os.str());
      }
      values.push_back(std::move(direct));
    }
  }
  return DeltaTable(max_n, max_k, std::move(values));
}

const Int& DeltaTable::at(long n, long k) const {
  if (n < 1 || n > max_n_ || k < 1 || k > max_k_)
    throw std::out_of_range("DeltaTable::at");
  return values_[static_cast<std::size_t>((n - 1) * max_k_ + (k - 1))];
}

Lemma24Report check_lemma_2_4(const Int& p, long n_max) {
  if (!is_prime(p)) throw std::invalid_argument("check_lemma_2_4: p not prime");
  Lemma24Report r;
  r.p = p;
  r.n_max = n_max;
  r.all_divisible = true;
  r.congruence_chain_ok = true;
  const long pl = static_cast<long>(p.get_si());
  for (long n = 2; n <= n_max; ++n) {
    if (!divides(p, delta(n, pl))) r.all_divisible = false;
    // Termwise: i^p == i (mod p), hence delta_n(p) == delta_n(1) (mod p),
    // and delta_n(1) vanishes for n > 1.
    for (long i = 1; i <= n; ++i) {
      Int ip = pow_int(Int(i), static_cast<unsigned long>(pl));
      if (mod_floor(ip - i, p) != 0) r.congruence_chain_ok = false;
    }
    if (mod_floor(delta(n, pl) - delta(n, 1), p) != 0)
      r.congruence_chain_ok = false;
    if (delta(n, 1) != 0) r.congruence_chain_ok = false;
  }
  return r;
}

Int torsion_action(long n, const Int& p) {
  if (!is_prime(p)) throw std::invalid_argument("torsion_action: p not prime");
  return mod_floor(delta(n, static_cast<long>(p.get_si())), p);
}

}  // namespace gray
