#include <cmath>

#include "doctest.h"
#include "stabfin/error.hpp"
#include "stabfin/matrices.hpp"

using namespace stabfin;

namespace {

GroupRing ring_over(const char* coeffs, const char* group, const char* var = "") {
  return parse_group_ring(std::string(coeffs) + "[" + group + "]", var);
}

int ceil_log2(std::size_t d) {
  int r = 0;
  while ((std::size_t{1} << r) < d) ++r;
  return r;
}

}  // namespace

TEST_CASE("small matrix identities") {
  MatrixRing m2(parse_group_ring("F2"), 2);
  const auto a = m2.parse("[[1,1],[0,1]]");
  CHECK(m2.is_identity(m2.mul(a, a)));
  CHECK(m2.size() == 16);
  for (std::uint64_t i = 0; i < m2.size(); ++i) CHECK(m2.parse(m2.format(m2.element_at(i))) == m2.element_at(i));
}

TEST_CASE("direct finiteness search counts units") {
  // One-sided pairs are exactly (X, X^-1): counts equal |GL_d(R)|.
  // |GL_2(F_2)| = (4-1)(4-2) = 6.
  auto u = one_sided_unit_search(parse_group_ring("F2"), 2, 0, 1u << 20, 1);
  CHECK(u.mode == "pairs");
  CHECK(u.exhaustive);
  CHECK(u.scanned == 256);
  CHECK(u.one_sided == 6);
  CHECK(u.witnesses.empty());

  // F2[C2] is local with residue field F2 and a maximal ideal of order 2, so
  // |GL_2| = |GL_2(F_2)| * 2^4 = 96.
  u = one_sided_unit_search(ring_over("F2", "C2"), 2, 0, 1u << 20, 1);
  CHECK(u.scanned == 65536);
  CHECK(u.one_sided == 96);
  CHECK(u.witnesses.empty());

  // Units of F2[C3] = F2 x F4: 1 * 3 = 3.
  u = one_sided_unit_search(ring_over("F2", "C3", "s"), 1, 0, 1u << 20, 1);
  CHECK(u.one_sided == 3);

  // Z/4[C2] is local with residue field F2: half of its 16 elements are units.
  u = one_sided_unit_search(ring_over("Z/4", "C2"), 1, 0, 1u << 20, 1);
  CHECK(u.one_sided == 8);
}

TEST_CASE("windowed searches over infinite groups are bounded") {
  auto u = one_sided_unit_search(ring_over("F2", "Z"), 1, 0, 1u << 20, 1);
  CHECK(u.bounded);
  CHECK(u.scanned == 4);
  u = one_sided_unit_search(ring_over("F2", "Z"), 1, 2, 1u << 20, 1);
  CHECK(u.bounded);
  CHECK(u.scanned == 1024);
  CHECK(u.one_sided == 5);  // the monomials x^k, |k| <= 2
}

TEST_CASE("check_df_pair") {
  MatrixRing m(ring_over("F3", "Z"), 2);
  const auto x = m.parse("[[1,x],[0,1]]");
  const auto y = m.parse("[[1,-x],[0,1]]");
  CHECK(check_df_pair(m, x, y).confirms);
  CHECK_THROWS_AS(check_df_pair(m, x, x), Error);
}

TEST_CASE("right inverses by linear algebra") {
  MatrixRing m(ring_over("F2", "Z"), 2);
  const auto x = m.parse("[[x,1],[0,x^-1]]");
  const auto y = solve_right_inverse(m, x, 2);
  REQUIRE(y.has_value());
  CHECK(m.is_identity(m.mul(x, *y)));
  CHECK(m.is_identity(m.mul(*y, x)));
  MatrixRing m1(ring_over("F2", "C3", "s"), 1);
  CHECK_FALSE(solve_right_inverse(m1, m1.parse("1+s"), 1).has_value());
  CHECK(*solve_right_inverse(m1, m1.parse("s"), 1) == m1.parse("s^2"));
}

TEST_CASE("unitriangular inverse") {
  MatrixRing m(parse_group_ring("Z"), 2);
  const auto inv = unitriangular_inverse(m, m.parse("[[1,2],[0,1]]"));
  CHECK(inv.inverse == m.parse("[[1,-2],[0,1]]"));
  CHECK(inv.rounds == 1);
  CHECK_THROWS_AS(unitriangular_inverse(m, m.parse("[[2,0],[0,1]]")), Error);

  Xorshift64Star rng(3);
  for (const char* base : {"F2", "Z", "F2[Z]"}) {
    const GroupRing r = parse_group_ring(base);
    for (std::size_t d = 1; d <= 5; ++d) {
      MatrixRing md(r, d);
      for (int trial = 0; trial < 8; ++trial) {
        RingMatrix a = md.identity();
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = i + 1; j < d; ++j) a.at(i, j) = r.random(rng, 3, 3, 3);
        }
        const auto res = unitriangular_inverse(md, a);
        CHECK(md.is_identity(md.mul(a, res.inverse)));
        CHECK(md.is_identity(md.mul(res.inverse, a)));
        CHECK(res.rounds <= ceil_log2(d));
      }
    }
  }
}

TEST_CASE("Hensel lifting") {
  MatrixRing m(parse_group_ring("Z"), 1);
  CHECK(hensel_lift(m, m.parse("1"), m.parse("3"), 2, 2) == m.parse("3"));  // 3*3 = 9 = 1 mod 4

  MatrixRing mc(ring_over("Z", "C2"), 1);
  const auto y = mc.parse("1+2*g");
  const auto z = hensel_lift(mc, mc.parse("1"), y, 2, 3);
  CHECK(z == mc.parse("5+6*g"));
  CHECK(congruent(mc, mc.mul(z, y), mc.identity(), Integer(8)));
  CHECK_THROWS_AS(hensel_lift(mc, mc.parse("1"), mc.parse("g+g"), 2, 3), Error);
}

TEST_CASE("block shapes") {
  const auto s = BlockShape::parse("(1,2)");
  CHECK(s.total() == 3);
  CHECK(s.block_of() == std::vector<std::size_t>{0, 1, 1});
  MatrixRing m(parse_group_ring("F2"), 3);
  CHECK(is_block_upper(m, m.parse("[[1,1,1],[0,1,1],[0,1,1]]"), s));
  CHECK_FALSE(is_block_upper(m, m.parse("[[1,0,0],[1,1,0],[0,0,1]]"), s));

  const auto rep = block_df_reduction_check(parse_group_ring("F2"), BlockShape::parse("(1,1)"), 1u << 16, 1);
  CHECK(rep.block.pairs_scanned == 64);
  CHECK(rep.equivalence_holds());
  CHECK(rep.block.violations == 0);
}

TEST_CASE("random block-upper units come with inverses") {
  Xorshift64Star rng(17);
  MatrixRing m(ring_over("F2", "C2"), 3);
  const auto shape = BlockShape::parse("(1,2)");
  for (int i = 0; i < 30; ++i) {
    const auto u = random_block_upper_unit(m, shape, rng);
    CHECK(is_block_upper(m, u.y, shape));
    CHECK(m.is_identity(m.mul(u.z, u.y)));
    CHECK(m.is_identity(m.mul(u.y, u.z)));
  }
}

TEST_CASE("window elements") {
  CHECK(window_elements(parse_group("Z"), 2).size() == 5);
  CHECK(window_elements(parse_group("Z^2"), 1).size() == 9);
  CHECK(window_elements(parse_group("S3"), 0).size() == 6);
}
