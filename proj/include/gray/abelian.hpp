#pragma once

// Finitely generated abelian groups in invariant-factor form, homomorphisms
// as integer matrices, and the kernel/image/cokernel/quotient calculus.
//
// Generator layout convention: a group with rank r and torsion chain
// d_1 | d_2 | ... | d_t has r + t generators; the first r are free, the last
// t have orders d_1, ..., d_t (ascending). All invariant factors are >= 2.

#include "gray/int_types.hpp"
#include "gray/smith.hpp"

#include <optional>
#include <vector>

namespace gray {

class FgAbGroup {
 public:
  FgAbGroup() = default;  // trivial group
  FgAbGroup(Index rank, std::vector<Int> torsion);

  static FgAbGroup trivial() { return FgAbGroup(); }
  static FgAbGroup free_abelian(Index rank) { return FgAbGroup(rank, {}); }
  // Z/n for n >= 2, Z for n == 0, trivial for n == 1.
  static FgAbGroup cyclic(const Int& n);
  // Direct sum of cyclic groups of the given orders (0 meaning Z),
  // normalized to invariant-factor form.
  static FgAbGroup from_cyclic_orders(const std::vector<Int>& orders);

  Index rank() const { return rank_; }
  const std::vector<Int>& torsion() const { return torsion_; }
  Index generator_count() const {
    return rank_ + static_cast<Index>(torsion_.size());
  }
  bool is_trivial() const { return rank_ == 0 && torsion_.empty(); }
  bool is_finite() const { return rank_ == 0; }
  std::optional<Int> order() const;

  // Order of the generator at index i (0 for the free ones).
  Int generator_order(Index i) const;

  // Relation matrix: gens x t, column i is d_i * e_{rank+i}.
  IntMat relation_matrix() const;

  // Reduce torsion coordinates into [0, d_i).
  IntVec reduce(IntVec coords) const;
  IntMat reduce_columns(IntMat m) const;

  bool operator==(const FgAbGroup&) const = default;

  std::string describe() const;  // e.g. "Z^2 + Z/2 + Z/6", "0"

 private:
  Index rank_ = 0;
  std::vector<Int> torsion_;
};

// is_isomorphic is canonical-form equality.
inline bool is_isomorphic(const FgAbGroup& a, const FgAbGroup& b) {
  return a == b;
}

struct GroupElement {
  FgAbGroup group;
  IntVec coords;

  GroupElement(FgAbGroup g, IntVec c);

  static GroupElement zero(const FgAbGroup& g);
  bool is_zero() const;
  GroupElement operator+(const GroupElement& o) const;
  GroupElement operator-() const;
  GroupElement scaled(const Int& k) const;
};

// Least n >= 1 with n*x = 0; empty optional means infinite order.
std::optional<Int> element_order(const GroupElement& x);

class Homomorphism {
 public:
  // matrix: gens(target) x gens(source); throws std::invalid_argument if the
  // assignment does not respect the source relations.
  Homomorphism(FgAbGroup source, FgAbGroup target, IntMat matrix);

  static Homomorphism identity(const FgAbGroup& g);
  static Homomorphism zero(const FgAbGroup& source, const FgAbGroup& target);
  // Multiplication by k as a self-map.
  static Homomorphism scalar(const FgAbGroup& g, const Int& k);

  const FgAbGroup& source() const { return source_; }
  const FgAbGroup& target() const { return target_; }
  const IntMat& matrix() const { return matrix_; }

  GroupElement apply(const GroupElement& x) const;
  bool is_zero_map() const;
  // Equality as maps (matrices agree modulo target relations).
  bool same_map(const Homomorphism& o) const;

 private:
  FgAbGroup source_, target_;
  IntMat matrix_;
};

// g ∘ f
Homomorphism compose(const Homomorphism& g, const Homomorphism& f);

// Presentation of Z^ambient / columns(relations) together with the two
// matrices that move elements between coordinates.
struct QuotientPresentation {
  FgAbGroup group;
  IntMat projection;  // gens(group) x ambient
  IntMat lift;        // ambient x gens(group); projection * lift == identity
};

QuotientPresentation present_quotient(Index ambient_gens,
                                      const IntMat& relations);

// A subgroup of an ambient group, given by a generator matrix (columns are
// ambient coordinates). Carries its abstract invariant-factor form.
class Subgroup {
 public:
  Subgroup(FgAbGroup ambient, IntMat generators);

  static Subgroup full(const FgAbGroup& g);
  static Subgroup zero(const FgAbGroup& g);

  const FgAbGroup& ambient() const { return ambient_; }
  const IntMat& generators() const { return generators_; }
  const FgAbGroup& group() const { return pres_.group; }

  bool contains(const IntVec& ambient_coords) const;
  bool contains(const Subgroup& other) const;
  bool same_subgroup(const Subgroup& other) const;  // double inclusion
  bool is_whole_group() const;
  bool is_trivial() const { return pres_.group.is_trivial(); }

  // Abstract group -> ambient.
  Homomorphism inclusion() const;
  // Express an ambient element in abstract coordinates (empty if outside).
  std::optional<IntVec> coordinates_of(const IntVec& ambient_coords) const;

 private:
  FgAbGroup ambient_;
  IntMat generators_;
  QuotientPresentation pres_;
};

struct KernelResult {
  FgAbGroup group;
  Homomorphism inclusion;  // group -> source of h
};

KernelResult kernel(const Homomorphism& h);
Subgroup image(const Homomorphism& h);
FgAbGroup cokernel(const Homomorphism& h);
FgAbGroup quotient(const FgAbGroup& g, const std::vector<GroupElement>& rels);

}  // namespace gray
