#pragma once

// Smith normal form over Z and the lattice utilities built on it.
// Column lattices are represented by integer matrices whose columns generate
// the lattice inside Z^rows.

#include "gray/int_types.hpp"

#include <optional>

namespace gray {

// U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... | d_r,
// all diagonal entries non-negative. Uinv/Vinv are the tracked inverses.
struct SmithForm {
  IntMat U, D, V;
  IntMat Uinv, Vinv;
  Index rank = 0;  // number of nonzero diagonal entries

  Int diag(Index i) const { return D(i, i); }
};

SmithForm smith_normal_form(const IntMat& M);

// Invariant-factor chain of coker(M) restricted to entries >= 2 is derived
// from this by the callers in abelian.

// Basis of the integer kernel {x : M x = 0}; columns are a lattice basis.
IntMat kernel_lattice(const IntMat& M);

// Solve M y = b over Z. Empty optional when no integral solution exists.
std::optional<IntVec> solve_integral(const IntMat& M, const IntVec& b);

// b in column lattice of M?
bool lattice_contains(const IntMat& M, const IntVec& b);

// Column basis of the lattice spanned by the columns of M (possibly fewer
// columns than M; full column rank).
IntMat lattice_basis(const IntMat& M);

}  // namespace gray
