// Cross-module properties on randomly generated inputs.
#include "doctest.h"
#include "stabfin/automata.hpp"
#include "stabfin/matrices.hpp"
#include "stabfin/wreath.hpp"

using namespace stabfin;

TEST_CASE("matrix rings satisfy the ring axioms") {
  Xorshift64Star rng(31);
  for (const char* base : {"Z[C3]", "F2[Z]", "F3[S3]", "Z/4[C2xC2]"}) {
    const GroupRing r = parse_group_ring(base);
    for (std::size_t d = 1; d <= 3; ++d) {
      const MatrixRing m(r, d);
      for (int i = 0; i < 15; ++i) {
        const auto a = m.random(rng), b = m.random(rng), c = m.random(rng);
        CHECK(m.mul(m.mul(a, b), c) == m.mul(a, m.mul(b, c)));
        CHECK(m.mul(a, m.add(b, c)) == m.add(m.mul(a, b), m.mul(a, c)));
        CHECK(m.mul(m.identity(), a) == a);
        CHECK(m.mul(a, m.identity()) == a);
        CHECK(m.add(a, m.neg(a)) == m.zero());
      }
    }
  }
}

TEST_CASE("one-sided inverses found by linear algebra are two-sided") {
  Xorshift64Star rng(32);
  const MatrixRing m(parse_group_ring("F2[Z]"), 2);
  int found = 0;
  for (int i = 0; i < 40; ++i) {
    // products of elementary and monomial matrices are invertible with small support
    RingMatrix x = m.identity();
    for (int k = 0; k < 3; ++k) {
      RingMatrix e = m.identity();
      const std::size_t row = rng.below(2);
      e.at(row, 1 - row) = m.base().random(rng, 1, 1, 1);
      x = m.mul(x, e);
    }
    const auto y = solve_right_inverse(m, x, 3);
    if (!y) continue;
    ++found;
    CHECK(m.is_identity(m.mul(x, *y)));
    CHECK(m.is_identity(m.mul(*y, x)));
  }
  CHECK(found > 0);
}

TEST_CASE("block-upper units and their inverses stay block upper") {
  Xorshift64Star rng(33);
  for (const char* base : {"Z[C2]", "F3[Z]"}) {
    const MatrixRing m(parse_group_ring(base), 4);
    const auto shape = BlockShape::parse("(2,1,1)");
    for (int i = 0; i < 20; ++i) {
      const auto u = random_block_upper_unit(m, shape, rng);
      CHECK(is_block_upper(m, u.y, shape));
      CHECK(is_block_upper(m, u.z, shape));
      CHECK(check_df_pair(m, u.y, u.z).confirms);
    }
  }
}

TEST_CASE("matrix endomorphisms compose like the matrix product") {
  Xorshift64Star rng(34);
  for (const char* base : {"F2[C3]", "Z/4[C2]"}) {
    const GroupRing r = parse_group_ring(base);
    const MatrixRing m(r, 1);
    for (int i = 0; i < 10; ++i) {
      const auto y1 = m.element_at(rng.below(m.size()));
      const auto y2 = m.element_at(rng.below(m.size()));
      const auto e1 = endo_from_matrix(m, y1), e2 = endo_from_matrix(m, y2);
      const auto both = compose_endos(e1, e2);
      const auto prod = endo_from_matrix(m, m.mul(y2, y1));
      CHECK(verify_wreath_hom(both).holds);
      for (int k = 0; k < 20; ++k) {
        const auto w = e1.source.random(rng);
        CHECK(both(w) == prod(w));
      }
    }
  }
}

TEST_CASE("kernel and image orders multiply to the source order") {
  Xorshift64Star rng(35);
  const GroupRing r = parse_group_ring("F2[C2xC2]");
  const MatrixRing m(r, 1);
  for (int i = 0; i < 16; ++i) {
    const auto e = endo_from_matrix(m, m.element_at(i));
    const auto prof = profile_endo(e);
    CHECK(prof.kernel_order * prof.image_order == prof.source_order);
    CHECK(prof.kernel_in_base);
  }
  const auto phi = hom_from_top_epi(parse_group("C2"), reduction_hom(parse_group("C4"), parse_group("C2")));
  const auto prof = profile_endo(phi);
  CHECK(prof.kernel_order * prof.image_order == prof.source_order);
}

TEST_CASE("cellular automata from matrices respect the matrix product") {
  Xorshift64Star rng(36);
  const MatrixRing m(parse_group_ring("F2[C3]"), 2);
  for (int i = 0; i < 15; ++i) {
    const auto y1 = m.element_at(rng.below(m.size()));
    const auto y2 = m.element_at(rng.below(m.size()));
    const auto c1 = ca_from_matrix(m, y1), c2 = ca_from_matrix(m, y2);
    const auto c12 = ca_from_matrix(m, m.mul(y1, y2));
    for (int k = 0; k < 10; ++k) {
      const auto c = configuration_at(c1, rng.below(configuration_count(c1)));
      CHECK(apply_ca(c12, c) == apply_ca(c1, apply_ca(c2, c)));
    }
    // bijective exactly when the matrix is a unit
    bool unit = false;
    for (std::uint64_t j = 0; j < m.size() && !unit; ++j) unit = m.is_identity(m.mul(y1, m.element_at(j)));
    CHECK(ca_kernel_image(c1).injective == unit);
  }
}
