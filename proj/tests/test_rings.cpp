#include "doctest.h"
#include "stabfin/error.hpp"
#include "stabfin/field.hpp"
#include "stabfin/rings.hpp"

using namespace stabfin;

TEST_CASE("F4 multiplication table") {
  // Hand table for F2[x]/(x^2+x+1): elements 0, 1, x, x+1 as indices 0..3.
  const int table[4][4] = {{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  const Field f = make_gf(2, 2);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      CHECK(f.index_of(f.mul(f.element_at(a), f.element_at(b))) == static_cast<std::uint64_t>(table[a][b]));
      CHECK(f.index_of(f.add(f.element_at(a), f.element_at(b))) == static_cast<std::uint64_t>(a ^ b));
    }
  }
}

TEST_CASE("field axioms exhaustively on small fields") {
  for (auto [p, k] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{5, 1}}) {
    const Field f = make_gf(p, k);
    const auto n = f.size();
    for (std::uint64_t i = 1; i < n; ++i) {
      const auto a = f.element_at(i);
      CHECK(f.is_one(f.mul(a, f.inv(a))));
      CHECK(f.is_one(f.pow(a, n - 1)));
    }
    for (std::uint64_t i = 0; i < n; ++i) {
      for (std::uint64_t j = 0; j < n; ++j) {
        const auto a = f.element_at(i), b = f.element_at(j), c = f.element_at((i * 7 + j) % n);
        CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
      }
    }
  }
}

TEST_CASE("moduli and irreducibility") {
  const Field f2 = Field::prime(2);
  const Field f3 = Field::prime(3);
  CHECK(poly::is_irreducible(f2, {f2.one(), f2.one(), f2.one()}));
  CHECK_FALSE(poly::is_irreducible(f2, {f2.one(), f2.zero(), f2.one()}));  // (x+1)^2
  CHECK(poly::is_irreducible(f3, {f3.one(), f3.zero(), f3.one()}));
  CHECK(make_gf(2, 4).modulus() == Poly{f2.one(), f2.one(), f2.zero(), f2.zero(), f2.one()});
  const Field f9 = make_gf(3, 2);
  CHECK(f9.is_zero(f9.add(f9.mul(f9.gen(), f9.gen()), f9.one())));
  CHECK_THROWS_AS(Field::extension(f2, {f2.one(), f2.zero(), f2.one()}), Error);
}

TEST_CASE("rational functions reduce to lowest terms") {
  const Field r = Field::rational(Field::prime(2));
  const auto a = r.parse("(t^2+1)/(t+1)");
  CHECK(r.format(a) == r.format(r.parse("t+1")));
  CHECK(r.is_one(r.mul(r.parse("1/t"), r.parse("t"))));
}

TEST_CASE("coefficient rings") {
  const CoeffRing z6 = CoeffRing::z_mod(6);
  CHECK(z6.is_unit(z6.from_int(5)));
  CHECK_FALSE(z6.is_unit(z6.from_int(4)));
  CHECK(z6.is_zero(z6.mul(z6.from_int(2), z6.from_int(3))));
  CHECK(parse_coeff_ring("F4").size() == 4);
  CHECK(parse_coeff_ring("Z/4").modulus() == 4);
  CHECK(parse_coeff_ring("F9").characteristic() == 3);
  CHECK_THROWS_AS(parse_coeff_ring("F6"), Error);
  CHECK(parse_group_ring("Z/4[C2xC2]").size() == 256);
  CHECK(parse_group_ring("F2").size() == 2);
}

TEST_CASE("group ring arithmetic examples") {
  GroupRing f2c2(CoeffRing::gf(2), parse_group("C2"));
  const auto a = f2c2.parse("1+g");
  CHECK(f2c2.is_zero(f2c2.mul(a, a)));

  GroupRing zz(CoeffRing::integers(), parse_group("Z"));
  CHECK(zz.mul(zz.parse("1-x"), zz.parse("1+x+x^2")) == zz.parse("1-x^3"));
  CHECK(zz.coeffs().format(zz.augmentation(zz.parse("2-3*x+x^5"))) == "0");

  GroupRing f2c3(CoeffRing::gf(2), parse_group("C3"), "s");
  CHECK(f2c3.is_one(f2c3.mul(f2c3.parse("s"), f2c3.parse("s^2"))));
}

TEST_CASE("ring axioms on random group-ring elements") {
  Xorshift64Star rng(5);
  const std::vector<GroupRing> rings = {
      GroupRing(CoeffRing::integers(), parse_group("C3")), GroupRing(CoeffRing::gf(3), parse_group("S3")),
      GroupRing(CoeffRing::integers(), parse_group("Z")), GroupRing(CoeffRing::gf(2, 2), parse_group("Z^2")),
      GroupRing(CoeffRing::z_mod(4), parse_group("D8"))};
  for (const auto& r : rings) {
    for (int i = 0; i < 60; ++i) {
      const auto a = r.random(rng), b = r.random(rng), c = r.random(rng);
      CHECK(r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c)));
      CHECK(r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c)));
      CHECK(r.mul(r.add(a, b), c) == r.add(r.mul(a, c), r.mul(b, c)));
      CHECK(r.mul(r.one(), a) == a);
      CHECK(r.is_zero(r.add(a, r.neg(a))));
      // augmentation is a ring homomorphism
      const auto& k = r.coeffs();
      CHECK(k.mul(r.augmentation(a), r.augmentation(b)) == r.augmentation(r.mul(a, b)));
    }
  }
}

TEST_CASE("pushforward along a surjection is a ring homomorphism") {
  Xorshift64Star rng(9);
  const Group z = parse_group("Z"), c3 = parse_group("C3");
  GroupRing src(CoeffRing::gf(2), z), dst(CoeffRing::gf(2), c3);
  const GroupHom h = reduction_hom(z, c3);
  for (int i = 0; i < 100; ++i) {
    const auto a = src.random(rng), b = src.random(rng);
    CHECK(pushforward(h, src, dst, src.mul(a, b)) ==
          dst.mul(pushforward(h, src, dst, a), pushforward(h, src, dst, b)));
    CHECK(pushforward(h, src, dst, src.add(a, b)) ==
          dst.add(pushforward(h, src, dst, a), pushforward(h, src, dst, b)));
  }
}

TEST_CASE("enumeration and text round trips") {
  GroupRing r(CoeffRing::z_mod(3), parse_group("C2xC2"));
  for (std::uint64_t i = 0; i < r.size(); i += 7) {
    const auto a = r.element_at(i);
    CHECK(r.index_of(a) == i);
    CHECK(r.parse(r.format(a)) == a);
  }
  GroupRing f4s3(CoeffRing::gf(2, 2), parse_group("S3"));
  const auto b = f4s3.parse("(x+1)*[(1 2)] + x*[(1 2 3)]");
  CHECK(f4s3.parse(f4s3.format(b)) == b);
}
