#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gray/smith.hpp"

#include <random>

using namespace gray;

namespace {

IntMat from_rows(std::initializer_list<std::initializer_list<long>> rows) {
  IntMat m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (long v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// |det| of a square integer matrix by fraction-free Gaussian elimination
// (Bareiss); independent of the SNF code path.
Int abs_det(IntMat m) {
  const Index n = m.rows();
  Int prev = 1;
  Int sign = 1;
  for (Index k = 0; k < n; ++k) {
    if (m(k, k) == 0) {
      Index piv = -1;
      for (Index i = k + 1; i < n; ++i)
        if (m(i, k) != 0) { piv = i; break; }
      if (piv < 0) return 0;
      m.row(k).swap(m.row(piv));
      sign = -sign;
    }
    for (Index i = k + 1; i < n; ++i)
      for (Index j = k + 1; j < n; ++j)
        m(i, j) = exact_div(m(i, j) * m(k, k) - m(i, k) * m(k, j), prev);
    prev = m(k, k);
  }
  return gray::abs(m(n - 1, n - 1));
}

void check_snf(const IntMat& m) {
  SmithForm f = smith_normal_form(m);
  CHECK(f.U * m * f.V == f.D);
  CHECK(f.U * f.Uinv == identity_mat(m.rows()));
  CHECK(f.V * f.Vinv == identity_mat(m.cols()));
  CHECK(abs_det(f.U) == 1);
  CHECK(abs_det(f.V) == 1);
  const Index n = std::min(m.rows(), m.cols());
  for (Index i = 0; i < n; ++i) {
    CHECK(f.D(i, i) >= 0);
    if (i + 1 < n && f.D(i + 1, i + 1) != 0) CHECK(divides(f.D(i, i), f.D(i + 1, i + 1)));
  }
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j) CHECK(f.D(i, j) == 0);
}

}  // namespace

TEST_CASE("snf of [[4,6],[8,10]] is diag(2,4)") {
  IntMat m = from_rows({{4, 6}, {8, 10}});
  SmithForm f = smith_normal_form(m);
  check_snf(m);
  CHECK(f.D(0, 0) == 2);
  CHECK(f.D(1, 1) == 4);
}

TEST_CASE("snf of identity is identity") {
  IntMat m = identity_mat(3);
  SmithForm f = smith_normal_form(m);
  CHECK(f.D == identity_mat(3));
}

TEST_CASE("snf of zero matrix is zero") {
  IntMat m = IntMat::Zero(2, 2);
  SmithForm f = smith_normal_form(m);
  CHECK(f.D == IntMat::Zero(2, 2));
  CHECK(f.rank == 0);
}

TEST_CASE("snf handles rectangular and empty shapes") {
  check_snf(from_rows({{2, 4, 6}, {0, 0, 5}}));
  check_snf(from_rows({{3}, {6}, {9}}));
  IntMat empty(0, 0);
  SmithForm f = smith_normal_form(empty);
  CHECK(f.rank == 0);
}

TEST_CASE("randomized snf property sweep") {
  std::mt19937_64 rng(20240817);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> entry(-50, 50);
  for (int trial = 0; trial < 1000; ++trial) {
    IntMat m(dim(rng), dim(rng));
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    check_snf(m);
  }
}

TEST_CASE("kernel lattice and integral solve") {
  IntMat m = from_rows({{2, 4}, {1, 2}});
  IntMat k = kernel_lattice(m);
  REQUIRE(k.cols() == 1);
  CHECK(m * k == IntMat::Zero(2, 1));

  IntVec b(2);
  b << 6, 3;
  auto sol = solve_integral(m, b);
  REQUIRE(sol.has_value());
  CHECK(m * *sol == b);

  IntVec bad(2);
  bad << 1, 0;
  CHECK(!solve_integral(m, bad).has_value());
  CHECK(lattice_contains(m, b));
  CHECK(!lattice_contains(m, bad));
}

TEST_CASE("lattice basis spans the same lattice") {
  IntMat m = from_rows({{2, 4, 6}, {0, 2, 2}});
  IntMat b = lattice_basis(m);
  for (Index j = 0; j < m.cols(); ++j)
    CHECK(lattice_contains(b, IntVec(m.col(j))));
  for (Index j = 0; j < b.cols(); ++j)
    CHECK(lattice_contains(m, IntVec(b.col(j))));
}
