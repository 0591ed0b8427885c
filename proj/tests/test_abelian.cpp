#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gray/abelian.hpp"

#include <random>

using namespace gray;

namespace {

IntMat mat1(long v) {
  IntMat m(1, 1);
  m(0, 0) = v;
  return m;
}

IntVec vec(std::initializer_list<long> vals) {
  IntVec v(static_cast<Index>(vals.size()));
  Index i = 0;
  for (long x : vals) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("group construction and canonical form") {
  CHECK(FgAbGroup::cyclic(6) == FgAbGroup(0, {6}));
  CHECK(FgAbGroup::cyclic(1).is_trivial());
  CHECK(FgAbGroup::cyclic(0) == FgAbGroup::free_abelian(1));
  CHECK_THROWS_AS(FgAbGroup(0, {4, 2}), std::invalid_argument);
  CHECK_THROWS_AS(FgAbGroup(0, {1}), std::invalid_argument);
}

TEST_CASE("Z/2 + Z/3 normalizes to Z/6") {
  FgAbGroup g = FgAbGroup::from_cyclic_orders({2, 3});
  CHECK(g == FgAbGroup::cyclic(6));
  CHECK(is_isomorphic(g, FgAbGroup::cyclic(6)));
  CHECK(!is_isomorphic(FgAbGroup::free_abelian(1), FgAbGroup::cyclic(2)));
  CHECK(!is_isomorphic(FgAbGroup::cyclic(4), FgAbGroup::from_cyclic_orders({2, 2})));
}

TEST_CASE("element order") {
  FgAbGroup z6 = FgAbGroup::cyclic(6);
  CHECK(element_order(GroupElement::zero(z6)) == Int(1));
  CHECK(element_order(GroupElement(z6, vec({1}))) == Int(6));

  // Z/2 + Z/9 normalizes to Z/18; (1,3) corresponds to 3 mod 18, order 6.
  FgAbGroup h = FgAbGroup::from_cyclic_orders({2, 9});
  REQUIRE(h == FgAbGroup::cyclic(18));
  CHECK(element_order(GroupElement(h, vec({3}))) == Int(6));
  // lcm across coordinates on a genuine chain
  FgAbGroup c = FgAbGroup(0, {2, 4});
  CHECK(element_order(GroupElement(c, vec({1, 1}))) == Int(4));

  CHECK(!element_order(GroupElement(FgAbGroup::free_abelian(1), vec({2}))).has_value());
}

TEST_CASE("homomorphism well-definedness") {
  FgAbGroup z4 = FgAbGroup::cyclic(4), z2 = FgAbGroup::cyclic(2);
  CHECK_NOTHROW(Homomorphism(z4, z2, mat1(1)));
  CHECK_THROWS_AS(Homomorphism(z2, z4, mat1(1)), std::invalid_argument);
  CHECK_NOTHROW(Homomorphism(z2, z4, mat1(2)));
  // composition with identity
  Homomorphism h(z4, z2, mat1(1));
  CHECK(compose(Homomorphism::identity(z2), h).same_map(h));
  CHECK(compose(h, Homomorphism::identity(z4)).same_map(h));
}

TEST_CASE("kernel examples") {
  FgAbGroup z = FgAbGroup::free_abelian(1);
  SUBCASE("multiplication by 6 on Z is injective") {
    auto k = kernel(Homomorphism::scalar(z, 6));
    CHECK(k.group.is_trivial());
  }
  SUBCASE("Z -> Z/6 reduction has kernel Z generated by 6") {
    Homomorphism h(z, FgAbGroup::cyclic(6), mat1(1));
    auto k = kernel(h);
    CHECK(k.group == FgAbGroup::free_abelian(1));
    // inclusion generator maps to +-6 in Z
    CHECK(gray::abs(k.inclusion.matrix()(0, 0)) == 6);
    CHECK(compose(h, k.inclusion).is_zero_map());
  }
  SUBCASE("zero map Z/4 -> Z/4 has kernel Z/4") {
    FgAbGroup z4 = FgAbGroup::cyclic(4);
    auto k = kernel(Homomorphism::zero(z4, z4));
    CHECK(k.group == z4);
  }
}

TEST_CASE("image and cokernel of multiplication by 2 on Z") {
  FgAbGroup z = FgAbGroup::free_abelian(1);
  Homomorphism h = Homomorphism::scalar(z, 2);
  Subgroup im = image(h);
  CHECK(im.group() == FgAbGroup::free_abelian(1));
  CHECK(im.contains(vec({2})));
  CHECK(!im.contains(vec({1})));
  CHECK(cokernel(h) == FgAbGroup::cyclic(2));
}

TEST_CASE("quotient examples") {
  FgAbGroup z2free = FgAbGroup::free_abelian(2);
  std::vector<GroupElement> rels{GroupElement(z2free, vec({2, 0})),
                                 GroupElement(z2free, vec({0, 3}))};
  CHECK(quotient(z2free, rels) == FgAbGroup::cyclic(6));

  // permuted relation order gives the same canonical form
  std::vector<GroupElement> rels2{rels[1], rels[0]};
  CHECK(quotient(z2free, rels2) == FgAbGroup::cyclic(6));

  // quotient by all generators is trivial
  std::vector<GroupElement> gens{GroupElement(z2free, vec({1, 0})),
                                 GroupElement(z2free, vec({0, 1}))};
  CHECK(quotient(z2free, gens).is_trivial());
}

TEST_CASE("short exact sequence image/cokernel bookkeeping") {
  // 0 -> im(h) -> target -> coker(h) -> 0 for a mixed map
  FgAbGroup src = FgAbGroup::from_cyclic_orders({4});
  FgAbGroup tgt = FgAbGroup::from_cyclic_orders({8});
  Homomorphism h(src, tgt, mat1(2));  // well-defined: 4*2 = 8 == 0
  Subgroup im = image(h);
  FgAbGroup ck = cokernel(h);
  CHECK(im.group() == FgAbGroup::cyclic(4));
  CHECK(ck == FgAbGroup::cyclic(2));
  CHECK(*im.group().order() * *ck.order() == *tgt.order());
}

TEST_CASE("subgroup membership and equality") {
  FgAbGroup z = FgAbGroup::free_abelian(1);
  Subgroup two(z, mat1(2));
  Subgroup four(z, mat1(4));
  CHECK(two.contains(four));
  CHECK(!four.contains(two));
  CHECK(!two.same_subgroup(four));
  // 2Z and 4Z are abstractly isomorphic but different subgroups
  CHECK(is_isomorphic(two.group(), four.group()));
  Subgroup two_again(z, mat1(-2));
  CHECK(two.same_subgroup(two_again));
}

TEST_CASE("rank additivity for maps of free groups") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int trial = 0; trial < 50; ++trial) {
    FgAbGroup src = FgAbGroup::free_abelian(dim(rng));
    FgAbGroup tgt = FgAbGroup::free_abelian(dim(rng));
    IntMat m(tgt.generator_count(), src.generator_count());
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    Homomorphism h(src, tgt, m);
    CHECK(kernel(h).group.rank() + image(h).group().rank() == src.rank());
  }
}

TEST_CASE("kernel-image exactness on random finite groups") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> ordd(1, 8);
  std::uniform_int_distribution<int> ent(0, 16);
  for (int trial = 0; trial < 40; ++trial) {
    FgAbGroup src = FgAbGroup::from_cyclic_orders({ordd(rng), ordd(rng)});
    FgAbGroup tgt = FgAbGroup::from_cyclic_orders({ordd(rng), ordd(rng)});
    IntMat m(tgt.generator_count(), src.generator_count());
    // random well-defined matrix: entry multiple of e_i / gcd(e_i, d_j)
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) {
        Int e = tgt.generator_order(i), d = src.generator_order(j);
        Int step = exact_div(e, gcd(e, d));
        m(i, j) = step * ent(rng);
      }
    Homomorphism h(src, tgt, m);
    auto k = kernel(h);
    CHECK(compose(h, k.inclusion).is_zero_map());
    // order bookkeeping: |src| = |ker| * |im|
    CHECK(*src.order() == *k.group.order() * *image(h).group().order());
    // and |tgt| = |im| * |coker|
    CHECK(*tgt.order() == *image(h).group().order() * *cokernel(h).order());
  }
}
