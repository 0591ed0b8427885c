#pragma once

// Exact arithmetic in A = prod_{p in S} Z/p^inf over a window S of the first
// N primes, the diagonal copy of Z, the quotient A_0 = A/Z, the CRT reduction
// that moves a class into A_0^(n), and growth-certificate witnesses.
//
// Coordinates are reduced rationals m/p^e taken mod 1. The continuum
// summands of the full phantom groups are not data; they appear only as the
// symbolic tag below.

#include "gray/int_types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gray {

inline constexpr const char* kContinuumTag =
    "continuum summands omitted (rational vector space, symbolic only)";

class PrimeWindow {
 public:
  // The first n primes; consecutiveness is part of the type.
  static PrimeWindow first(int n);
  // Validates that the given list is exactly the first primes, no gaps.
  explicit PrimeWindow(std::vector<Int> primes);

  int size() const { return static_cast<int>(primes_.size()); }
  const Int& prime(int i) const;  // 1-based
  const std::vector<Int>& primes() const { return primes_; }
  Int primorial(int n) const;  // product of the first n window primes
  // 1-based index of p in the window, 0 if absent.
  int index_of(const Int& p) const;
  bool operator==(const PrimeWindow&) const = default;

 private:
  std::vector<Int> primes_;
};

// One coordinate of a Prufer element: num / p^exp mod 1 with
// 0 <= num < p^exp and p not dividing num unless num == 0 (then exp == 0).
struct PruferCoord {
  Int num = 0;
  unsigned long exp = 0;

  bool is_zero() const { return num == 0; }
  bool operator==(const PruferCoord&) const = default;
};

PruferCoord make_coord(const Int& num, const Int& denom, const Int& p);

class PruferElement {
 public:
  explicit PruferElement(PrimeWindow window);
  PruferElement(PrimeWindow window, std::vector<PruferCoord> coords);

  static PruferElement zero(const PrimeWindow& w) { return PruferElement(w); }

  const PrimeWindow& window() const { return window_; }
  const PruferCoord& coord(int i) const;  // 1-based
  void set_coord(int i, PruferCoord c);
  // Additive order of coordinate i: p^exp.
  Int coord_order(int i) const;

  PruferElement operator+(const PruferElement& o) const;
  PruferElement operator-() const;
  PruferElement operator-(const PruferElement& o) const;
  PruferElement scaled(const Int& k) const;
  bool is_zero() const;
  bool operator==(const PruferElement&) const = default;

  std::string describe() const;  // canonical ascending-prime form

 private:
  PrimeWindow window_;
  std::vector<PruferCoord> coords_;
};

// k * (1/2, 1/3, ..., 1/p) — the diagonal embedding of Z.
PruferElement diag_embed(const Int& k, const PrimeWindow& w);

// An element of A_0 = A / Z*diag, stored by a representative.
class PruferClass {
 public:
  explicit PruferClass(PruferElement rep) : rep_(std::move(rep)) {}

  const PruferElement& representative() const { return rep_; }
  const PrimeWindow& window() const { return rep_.window(); }

  // x ~ y iff x - y = k*diag for an integer k: every coordinate of the
  // difference must have order dividing its prime; CRT then always produces
  // a consistent k across the window.
  bool equals(const PruferClass& o) const;
  bool is_zero() const;

 private:
  PruferElement rep_;
};

struct MembershipCertificate {
  bool member = false;
  // Positive: the least non-negative CRT integer for the first n coordinates.
  std::optional<Int> crt_k;
  // Negative: offending coordinate (1-based) and its order.
  std::optional<int> offending_index;
  std::optional<Int> offending_order;
};

// Does the class have a representative with the first n coordinates zero?
MembershipCertificate in_A0n(const PruferClass& c, int n);

struct ReductionResult {
  MembershipCertificate cert;
  // On success: a representative in the same class with coords 1..n zero.
  std::optional<PruferElement> representative;
};

ReductionResult reduce_to_An(const PruferClass& c, int n);

struct StableMembership {
  int largest_n = 0;   // largest n with in_A0n true
  bool all_primes = false;  // every coordinate order divides its prime
};

StableMembership stable_membership(const PruferClass& c);

// Least non-negative k with (c - k*diag) zero in the first n coordinates.
std::optional<Int> minimal_reducer(const PruferClass& c, int n);

// Least non-negative solution of k = r_i (mod m_i) for pairwise coprime m_i.
Int crt_solve(const std::vector<Int>& residues, const std::vector<Int>& moduli);

// Smallest prime >= m.
Int smallest_prime_at_least(const Int& m);

// Torsion shadow of one stage of the phantom-map tower: coordinates
// supported on primes >= ell(m); the m = 1 stage is additionally quotiented
// by the diagonal.
struct SubTowerModel {
  int m = 0;
  Int ell;                 // smallest prime >= m
  int support_start = 0;   // 1-based window index of the first allowed prime
  bool quotient_by_diagonal = false;  // true exactly at m == 1

  bool supports(int window_index) const { return window_index >= support_start; }
};

struct PhantomTowerModel {
  PrimeWindow window;
  std::vector<SubTowerModel> stages;  // m = 1 .. max_m
  std::string continuum_note = kContinuumTag;

  const SubTowerModel& stage(int m) const;
  // Is the class in the image of stage m inside stage 1 (= A_0)?
  bool stage1_image_contains(const PruferClass& c, int m) const;
};

PhantomTowerModel build_phantom_tower_model(const PrimeWindow& w, int max_m);

}  // namespace gray
