#include "gray/smith.hpp"

namespace gray {

namespace {

struct Reducer {
  IntMat M, U, V, Uinv, Vinv;

  explicit Reducer(const IntMat& m)
      : M(m),
        U(identity_mat(m.rows())),
        V(identity_mat(m.cols())),
        Uinv(identity_mat(m.rows())),
        Vinv(identity_mat(m.cols())) {}

  void swap_rows(Index i, Index j) {
    if (i == j) return;
    M.row(i).swap(M.row(j));
    U.row(i).swap(U.row(j));
    Uinv.col(i).swap(Uinv.col(j));
  }

  void swap_cols(Index i, Index j) {
    if (i == j) return;
    M.col(i).swap(M.col(j));
    V.col(i).swap(V.col(j));
    Vinv.row(i).swap(Vinv.row(j));
  }

  // R_i -= q R_j
  void add_row(Index i, Index j, const Int& q) {
    if (q == 0) return;
    M.row(i) -= M.row(j) * q;
    U.row(i) -= U.row(j) * q;
    Uinv.col(j) += Uinv.col(i) * q;
  }

  // C_i -= q C_j
  void add_col(Index i, Index j, const Int& q) {
    if (q == 0) return;
    M.col(i) -= M.col(j) * q;
    V.col(i) -= V.col(j) * q;
    Vinv.row(j) += Vinv.row(i) * q;
  }

  void negate_row(Index i) {
    M.row(i) = -M.row(i);
    U.row(i) = -U.row(i);
    Uinv.col(i) = -Uinv.col(i);
  }

  // Minimal-absolute-value nonzero pivot in the trailing submatrix,
  // ties broken by lowest (row, col).
  bool find_pivot(Index t, Index& pr, Index& pc) const {
    bool found = false;
    Int best = 0;
    for (Index i = t; i < M.rows(); ++i) {
      for (Index j = t; j < M.cols(); ++j) {
        if (M(i, j) == 0) continue;
        Int a = gray::abs(M(i, j));
        if (!found || a < best) {
          found = true;
          best = a;
          pr = i;
          pc = j;
        }
      }
    }
    return found;
  }

  void run() {
    const Index steps = std::min(M.rows(), M.cols());
    for (Index t = 0; t < steps; ++t) {
      for (;;) {
        Index pr, pc;
        if (!find_pivot(t, pr, pc)) return;  // trailing submatrix is zero
        swap_rows(t, pr);
        swap_cols(t, pc);

        bool dirty = false;
        for (Index i = t + 1; i < M.rows(); ++i) {
          if (M(i, t) == 0) continue;
          Int q = M(i, t) / M(t, t);
          add_row(i, t, q);
          if (M(i, t) != 0) dirty = true;
        }
        for (Index j = t + 1; j < M.cols(); ++j) {
          if (M(t, j) == 0) continue;
          Int q = M(t, j) / M(t, t);
          add_col(j, t, q);
          if (M(t, j) != 0) dirty = true;
        }
        if (dirty) continue;  // remainders left; re-select a smaller pivot

        // Pivot must divide every remaining entry for the invariant chain.
        bool fixed = true;
        for (Index i = t + 1; i < M.rows() && fixed; ++i) {
          for (Index j = t + 1; j < M.cols() && fixed; ++j) {
            if (!divides(M(t, t), M(i, j))) {
              add_row(t, i, Int(-1));  // fold row i into the pivot row
              fixed = false;
            }
          }
        }
        if (fixed) break;
      }
      if (M(t, t) < 0) negate_row(t);
    }
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMat& M) {
  Reducer r(M);
  r.run();
  SmithForm f;
  f.U = std::move(r.U);
  f.V = std::move(r.V);
  f.Uinv = std::move(r.Uinv);
  f.Vinv = std::move(r.Vinv);
  f.D = std::move(r.M);
  const Index n = std::min(f.D.rows(), f.D.cols());
  for (Index i = 0; i < n; ++i)
    if (f.D(i, i) != 0) f.rank = i + 1;
  return f;
}

IntMat kernel_lattice(const IntMat& M) {
  SmithForm f = smith_normal_form(M);
  const Index free = M.cols() - f.rank;
  IntMat k(M.cols(), free);
  if (free > 0) k = f.V.rightCols(free);
  return k;
}

std::optional<IntVec> solve_integral(const IntMat& M, const IntVec& b) {
  SmithForm f = smith_normal_form(M);
  IntVec c = f.U * b;
  IntVec z = IntVec::Zero(M.cols());
  const Index n = std::min(M.rows(), M.cols());
  for (Index i = 0; i < M.rows(); ++i) {
    if (i < n && f.D(i, i) != 0) {
      if (!divides(f.D(i, i), c(i))) return std::nullopt;
      z(i) = exact_div(c(i), f.D(i, i));
    } else if (c(i) != 0) {
      return std::nullopt;
    }
  }
  return IntVec(f.V * z);
}

bool lattice_contains(const IntMat& M, const IntVec& b) {
  return solve_integral(M, b).has_value();
}

IntMat lattice_basis(const IntMat& M) {
  SmithForm f = smith_normal_form(M);
  IntMat basis(M.rows(), f.rank);
  for (Index i = 0; i < f.rank; ++i)
    basis.col(i) = f.Uinv.col(i) * f.D(i, i);
  return basis;
}

}  // namespace gray
