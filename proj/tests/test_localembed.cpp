#include "doctest.h"
#include "stabfin/error.hpp"
#include "stabfin/localembed.hpp"

using namespace stabfin;

namespace {

IntMat matmul(const IntMat& a, const IntMat& b, std::int64_t p) {
  const std::size_t d = a.size();
  IntMat r(d, std::vector<std::int64_t>(d, 0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t j = 0; j < d; ++j) r[i][j] = (r[i][j] + a[i][k] * b[k][j]) % p;
    }
  }
  return r;
}

IntMat matadd(const IntMat& a, const IntMat& b, std::int64_t p) {
  IntMat r = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) r[i][j] = (a[i][j] + b[i][j]) % p;
  }
  return r;
}

std::vector<FieldElem> parse_all(const Field& f, std::initializer_list<const char*> items) {
  std::vector<FieldElem> out;
  for (auto s : items) out.push_back(f.parse(s));
  return out;
}

}  // namespace

TEST_CASE("verifier on trivial maps") {
  const Field f2 = Field::prime(2);
  const Field f4 = make_gf(2, 2);
  LocalEmbeddingWitness inc;
  inc.source = f2;
  inc.domain = {f2.zero(), f2.one()};
  inc.codomain = EmbedCodomain::of_field(f4);
  inc.images = {f4.zero(), f4.one()};
  const auto v = verify_local_embedding(inc);
  CHECK(v.verified);
  CHECK(inc.checked_sums.size() == 3);
  CHECK(inc.checked_products.size() == 4);

  LocalEmbeddingWitness zero = inc;
  zero.images = {f4.zero(), f4.zero()};
  const auto bad = verify_local_embedding(zero);
  CHECK_FALSE(bad.verified);
  REQUIRE(bad.violation.has_value());
  // injectivity is checked first; the identity also fails
  CHECK(bad.violation->condition == "injective");

  LocalEmbeddingWitness one_only;
  one_only.source = f4;
  one_only.domain = {f4.one()};
  one_only.codomain = EmbedCodomain::of_field(f2);
  one_only.images = {f2.zero()};
  const auto id = verify_local_embedding(one_only);
  CHECK_FALSE(id.verified);
  CHECK(id.violation->condition == "identity");
}

TEST_CASE("regular representation examples") {
  const Field f4 = make_gf(2, 2);
  const IntMat m = regular_matrix(f4, f4.gen());
  CHECK(m == IntMat{{0, 1}, {1, 1}});
  const IntMat id{{1, 0}, {0, 1}};
  const IntMat zero{{0, 0}, {0, 0}};
  CHECK(matadd(matadd(matmul(m, m, 2), m, 2), id, 2) == zero);

  const Field f9 = make_gf(3, 2);
  const IntMat n = regular_matrix(f9, f9.gen());
  CHECK(n == IntMat{{0, 1}, {2, 0}});
  CHECK(matadd(matmul(n, n, 3), id, 3) == zero);

  const Field f2 = Field::prime(2);
  CHECK(regular_matrix(f2, f2.one()) == IntMat{{1}});
}

TEST_CASE("regular representation is an injective ring homomorphism") {
  for (auto [p, k] : {std::pair{2, 1}, std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}, std::pair{2, 4}}) {
    const Field f = make_gf(p, k);
    const auto w = embed_gf_into_matrices(f);
    CHECK(w.domain.size() == f.size());
    CHECK(w.checked_products.size() == f.size() * f.size());
    // independent recheck with plain matrix arithmetic
    for (std::uint64_t i = 0; i < f.size(); ++i) {
      for (std::uint64_t j = 0; j < f.size(); ++j) {
        const auto a = f.element_at(i), b = f.element_at(j);
        CHECK(regular_matrix(f, f.mul(a, b)) == matmul(regular_matrix(f, a), regular_matrix(f, b), p));
        CHECK(regular_matrix(f, f.add(a, b)) == matadd(regular_matrix(f, a), regular_matrix(f, b), p));
      }
    }
  }
  CHECK_THROWS_AS(embed_gf_into_matrices(make_gf(2, 9)), Error);
}

TEST_CASE("evaluation embeddings") {
  const Field r = Field::rational(Field::prime(2));
  auto e = local_embed_eval(r, parse_all(r, {"0", "1"}));
  CHECK(e.extensions == 0);
  CHECK(e.target.is_zero(e.alpha));

  // numerator roots 0 and 1 exhaust F2
  e = local_embed_eval(r, parse_all(r, {"t", "t+1"}));
  CHECK(e.extensions == 1);
  CHECK(e.target.size() == 4);
  CHECK(e.alpha == e.target.gen());

  e = local_embed_eval(r, parse_all(r, {"1/t", "1/(t+1)"}));
  CHECK(e.extensions == 1);
  CHECK(e.target.size() == 4);
  CHECK(e.alpha == e.target.gen());
  CHECK(verify_local_embedding(e.witness).verified);
}

TEST_CASE("evaluation never hits a denominator root") {
  Xorshift64Star rng(13);
  for (std::int64_t p : {2, 3}) {
    const Field base = Field::prime(p);
    const Field r = Field::rational(base);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<FieldElem> dom;
      for (int i = 0; i < 5; ++i) {
        Poly num, den;
        for (int c = 0; c < 3; ++c) num.push_back(base.from_int(static_cast<std::int64_t>(rng.below(p))));
        for (int c = 0; c < 2; ++c) den.push_back(base.from_int(static_cast<std::int64_t>(rng.below(p))));
        den.push_back(base.one());
        dom.push_back(r.fraction(poly::trim(base, num), den));
      }
      const auto e = local_embed_eval(r, dom);
      CHECK(verify_local_embedding(e.witness).verified);
      for (const auto& x : e.witness.domain) {
        const FieldMap up = finite_field_embedding(base, e.target);
        const Poly den = poly::map(e.target, r.denominator(x), up.apply);
        CHECK_FALSE(e.target.is_zero(poly::eval(e.target, den, e.alpha)));
      }
    }
  }
}

TEST_CASE("algebraic step") {
  const auto tower = parse_tower("[alg:x^2+x+1]");
  const Field f4 = build_tower(2, tower);
  const auto a = local_embed_algebraic(f4, parse_all(f4, {"x", "x+1"}));
  CHECK(verify_local_embedding(a.witness).verified);
  CHECK(a.target.size() == 4);
  const auto trivial = local_embed_algebraic(f4, parse_all(f4, {"0", "1"}));
  CHECK(trivial.witness.images[0] == EmbedValue(trivial.target.zero()));
  CHECK(trivial.witness.images[1] == EmbedValue(trivial.target.one()));

  // over F2(u): the coefficients are embedded by evaluation first
  const Field top = build_tower(2, parse_tower("[transc:u, alg:x^2+x+1]"));
  const auto b = local_embed_algebraic(top, parse_all(top, {"u", "x", "u*x", "u+x", "1"}));
  CHECK(verify_local_embedding(b.witness).verified);
  CHECK_FALSE(b.stages.empty());
}

TEST_CASE("towers") {
  const auto t = parse_tower("[alg:x^2+x+1, transc]");
  REQUIRE(t.size() == 2);
  CHECK(t[0].kind == FieldTowerStep::Kind::algebraic);
  CHECK(t[0].var == "x");
  CHECK(t[1].var == "t");
  CHECK(parse_tower("[]").empty());
  CHECK(build_tower(3, parse_tower("[alg:y^2+1]")).size() == 9);
  CHECK_THROWS_AS(build_tower(2, parse_tower("[alg:x^2+1]")), Error);  // reducible over F2
  CHECK_THROWS_AS(parse_tower("[bogus]"), Error);
}

TEST_CASE("pipelines end to end") {
  auto pe = local_embed_pipeline(2, {}, {"0", "1"});
  CHECK(pe.witness.codomain.d == 1);

  const Field f4 = build_tower(2, parse_tower("[alg:x^2+x+1]"));
  std::vector<FieldElem> all;
  for (std::uint64_t i = 0; i < 4; ++i) all.push_back(f4.element_at(i));
  pe = local_embed_pipeline(f4, all);
  CHECK(pe.witness.codomain.d == 2);
  CHECK(pe.witness.checked_products.size() == 16);
  CHECK(pe.composition_agrees);

  pe = local_embed_pipeline(2, parse_tower("[alg:x^2+x+1, transc]"), {"t", "1/t", "x*t"});
  CHECK(verify_local_embedding(pe.witness).verified);
  CHECK(pe.composition_agrees);
  CHECK((pe.witness.codomain.d == 2 || pe.witness.codomain.d == 4));

  pe = local_embed_pipeline(2, parse_tower("[transc, transc]"), {"t", "u", "t*u", "1/(t+u)", "0", "1"});
  CHECK(verify_local_embedding(pe.witness).verified);
  CHECK(pe.composition_agrees);

  // every stage witness is verified as well
  for (const auto& s : pe.stages) CHECK(verify_local_embedding(s).verified);
}
