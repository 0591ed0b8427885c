#pragma once

// Finite-horizon inverse towers of abelian groups: image filtrations,
// Mittag-Leffler detection, lim approximation, lim^1 classification at the
// horizon, the six-term check for short exact sequences of towers, and
// divisibility-chain residue towers.
//
// Semantics are horizon-truncated throughout: a report either certifies
// stabilization strictly before the horizon or says "undetermined at
// horizon" with a witness. No operation claims an infinitary fact.

#include "gray/abelian.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace gray {

class Tower {
 public:
  // stages[0] is stage 1; bonds[n-1] maps stage n+1 -> stage n.
  Tower(std::vector<FgAbGroup> stages, std::vector<Homomorphism> bonds);

  static Tower constant(const FgAbGroup& g, int horizon);

  int horizon() const { return static_cast<int>(stages_.size()); }
  const FgAbGroup& stage(int n) const;          // 1-based
  const Homomorphism& bond(int n) const;        // stage n+1 -> stage n
  Homomorphism composed_bond(int n, int k) const;  // stage k -> stage n, k >= n

 private:
  std::vector<FgAbGroup> stages_;
  std::vector<Homomorphism> bonds_;
};

struct FiltrationReport {
  int stage = 0;
  int horizon = 0;
  std::vector<Subgroup> chain;  // G_n^(k) for k = n .. horizon
  // Smallest k with the chain constant from k to the horizon; empty when the
  // last step still drops strictly.
  std::optional<int> stabilized_at;
  // A strictly-decreasing adjacent pair (k, k+1), the last one seen.
  std::optional<std::pair<int, int>> witness;

  bool stabilized_before_horizon() const {
    return stabilized_at && *stabilized_at < horizon;
  }
};

FiltrationReport image_filtration(const Tower& t, int n);

struct MittagLefflerReport {
  struct StageStatus {
    int stage = 0;
    std::optional<int> stabilized_at;
    std::optional<std::pair<int, int>> witness;
  };
  int horizon = 0;
  std::vector<StageStatus> stages;

  // Every stage's chain is constant from some k strictly below the horizon
  // (stages whose chain has a single entry are vacuously stabilized).
  bool all_stabilized() const;
};

MittagLefflerReport is_mittag_leffler(const Tower& t);

struct StableImageTower {
  std::vector<Subgroup> stages;      // G_n^(horizon) inside G_n
  std::vector<Homomorphism> bonds;   // induced maps on abstract groups
  bool all_stabilized = false;
  bool bonds_surjective = false;     // checked when all_stabilized
};

StableImageTower stable_image_tower(const Tower& t);

enum class Lim1Status { ZeroCertified, UndeterminedAtHorizon };

struct Lim1Classification {
  Lim1Status status = Lim1Status::UndeterminedAtHorizon;
  MittagLefflerReport ml;
  // Stages whose chain has not settled at the horizon.
  std::vector<int> unsettled_stages;
};

Lim1Classification lim1_classification(const Tower& t);

// Levelwise maps commuting with the bonds; squares verified at construction.
class TowerMap {
 public:
  TowerMap(const Tower& source, const Tower& target,
           std::vector<Homomorphism> levels);

  const Homomorphism& level(int n) const;  // 1-based
  int horizon() const { return static_cast<int>(levels_.size()); }

 private:
  std::vector<Homomorphism> levels_;
};

// Levelwise short exact sequences 0 -> K_n -> G_n -> H_n -> 0 commuting with
// all bonds; exactness verified at construction.
class TowerSES {
 public:
  TowerSES(Tower sub, Tower total, Tower quot, std::vector<Homomorphism> inject,
           std::vector<Homomorphism> project);

  const Tower& sub() const { return sub_; }
  const Tower& total() const { return total_; }
  const Tower& quot() const { return quot_; }
  const Homomorphism& inject(int n) const;
  const Homomorphism& project(int n) const;
  int horizon() const { return sub_.horizon(); }

 private:
  Tower sub_, total_, quot_;
  std::vector<Homomorphism> inject_, project_;
};

struct LimAtHorizon {
  FgAbGroup group;  // compatible tuples; isomorphic to the top stage
  std::vector<Homomorphism> projections;  // to each stage
};

LimAtHorizon lim_at_horizon(const Tower& t);

struct SixTermReport {
  struct Arrow {
    std::string name;
    bool verified = false;
    std::string note;
  };
  std::vector<Arrow> arrows;
  Lim1Classification lim1_sub, lim1_total, lim1_quot;
  bool all_verified() const;
};

SixTermReport six_term_check(const TowerSES& s);

struct GrayKernelReport {
  int index = 0;  // the k of L^k
  Tower derived;  // n -> G_k^(n); constant G_k for n < k
  MittagLefflerReport ml;
  Lim1Classification lim1;
  // Classification-only consequence for L^k; never an infinitary claim.
  std::string tag;
};

GrayKernelReport gray_kernel_levels(const Tower& t, int k);

// A compatible residue sequence along a divisibility chain of moduli;
// finite-horizon model of an element of lim Z/a_n Z.
class ResidueTower {
 public:
  ResidueTower(std::vector<Int> moduli, std::vector<Int> residues);
  static ResidueTower from_seed(std::vector<Int> moduli, const Int& seed);

  int horizon() const { return static_cast<int>(moduli_.size()); }
  const std::vector<Int>& moduli() const { return moduli_; }
  Int project(int n) const;  // r_n, 1-based

  ResidueTower operator+(const ResidueTower& o) const;
  ResidueTower operator-() const;
  ResidueTower scaled(const Int& k) const;
  bool is_zero() const;
  bool operator==(const ResidueTower&) const = default;

 private:
  std::vector<Int> moduli_, residues_;
};

// The unique k mod a_N with x_n - y_n == k (mod a_n) for all n; equality in
// the quotient by the diagonal is decidable only up to this ambiguity window.
Int diagonal_offset_at_horizon(const ResidueTower& x, const ResidueTower& y);

}  // namespace gray
