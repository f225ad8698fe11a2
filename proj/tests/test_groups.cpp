#include <set>

#include "doctest.h"
#include "stabfin/error.hpp"
#include "stabfin/groups.hpp"

using namespace stabfin;

namespace {

// Counts commuting pairs by brute force; the class equation gives |G| * (number of classes).
std::size_t commuting_pairs(const Group& g) {
  std::size_t n = 0;
  for (const auto& a : g.elements()) {
    for (const auto& b : g.elements()) n += g.mul(a, b) == g.mul(b, a);
  }
  return n;
}

}  // namespace

TEST_CASE("orders of parsed groups") {
  CHECK(parse_group("C2").order() == 2);
  CHECK(parse_group("S3").order() == 6);
  CHECK(parse_group("D8").order() == 8);
  CHECK(parse_group("C2xC4").order() == 8);
  CHECK(parse_group("1").order() == 1);
  CHECK(parse_group("quot(C4,2)").order() == 2);
  CHECK(parse_group("perm:[(1 2),(1 2 3)]").order() == 6);
  CHECK_FALSE(parse_group("Z").is_finite());
  CHECK_FALSE(parse_group("Z^2").is_finite());
  CHECK_THROWS_AS(parse_group("Q8x"), Error);
}

TEST_CASE("identity comes first in the enumeration") {
  for (auto name : {"C5", "S3", "D8", "C2xC2xC2", "perm:[(1 2 3 4)]"}) {
    const Group g = parse_group(name);
    CHECK(g.is_identity(g.elements().front()));
    for (std::size_t i = 0; i < g.order(); ++i) CHECK(g.index_of(g.elements()[i]) == i);
  }
}

TEST_CASE("centres against the class equation") {
  // S3: 3 classes, trivial centre. D8: 5 classes, centre of order 2.
  const Group s3 = parse_group("S3");
  const Group d8 = parse_group("D8");
  CHECK(commuting_pairs(s3) == 6 * 3);
  CHECK(commuting_pairs(d8) == 8 * 5);
  CHECK(centre(s3).size() == 1);
  CHECK(centre(d8).size() == 2);
  CHECK(centre(parse_group("C2xC4")).size() == 8);
}

TEST_CASE("group axioms on finite and infinite groups") {
  Xorshift64Star rng(11);
  for (auto name : {"S3", "D8", "C2xC4", "Z", "Z^2", "quot(C4,2)"}) {
    const Group g = parse_group(name);
    for (int i = 0; i < 200; ++i) {
      const auto a = g.random_element(rng, 4);
      const auto b = g.random_element(rng, 4);
      const auto c = g.random_element(rng, 4);
      CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
      CHECK(g.is_identity(g.mul(a, g.inv(a))));
      CHECK(g.mul(g.identity(), a) == a);
    }
  }
}

TEST_CASE("element orders and formatting round trip") {
  const Group c6 = parse_group("C6");
  CHECK(c6.element_order(c6.parse_element("2")) == 3);
  CHECK_FALSE(parse_group("Z").element_order(parse_group("Z").parse_element("3")).has_value());
  const Group s3 = parse_group("S3");
  for (const auto& e : s3.elements()) CHECK(s3.parse_element(s3.format(e)) == e);
}

TEST_CASE("homomorphisms and kernels") {
  const Group c4 = parse_group("C4");
  const Group c2 = parse_group("C2");
  const GroupHom red = reduction_hom(c4, c2);
  CHECK(verify_hom(red));
  CHECK(is_surjective(red));
  CHECK(hom_kernel(red).size() == 2);

  const Group z = parse_group("Z");
  CHECK(verify_hom(reduction_hom(z, parse_group("C3"))));

  const Group c2c2 = parse_group("C2xC2");
  const GroupHom pr = projection_hom(c2c2, 0);
  CHECK(verify_hom(pr));
  CHECK(hom_kernel(pr).size() == 2);

  // Abelianization of S3 is C2 (the sign).
  CHECK(abelianization(parse_group("S3")).group.order() == 2);
  CHECK(abelianization(parse_group("D8")).group.order() == 4);
}

TEST_CASE("subgroup closure") {
  const Group s3 = parse_group("S3");
  const Group c12 = parse_group("C12");
  CHECK(subgroup_closure(c12, {c12.parse_element("8")}).size() == 3);
  CHECK(subgroup_closure(c12, {c12.parse_element("8"), c12.parse_element("3")}).size() == 12);
  CHECK(subgroup_closure(s3, {}).size() == 1);
}
