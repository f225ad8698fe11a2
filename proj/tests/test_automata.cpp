#include <numeric>

#include "doctest.h"
#include "stabfin/automata.hpp"
#include "stabfin/error.hpp"

using namespace stabfin;

namespace {

Configuration random_config(const AdditiveCA& ca, Xorshift64Star& rng) {
  return configuration_at(ca, rng.below(configuration_count(ca)));
}

Configuration add(const Alphabet& a, const Configuration& x, const Configuration& y) {
  const auto mods = a.moduli();
  Configuration out = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < mods.size(); ++j) out[i][j] = (x[i][j] + y[i][j]) % mods[j];
  }
  return out;
}

// Direct evaluation of tau(c)(g) = sum_s M_s c(g s), independent of the library's fast paths.
Configuration evaluate(const AdditiveCA& ca, const Configuration& c) {
  const Group& g = ca.group;
  const auto mods = ca.alphabet.moduli();
  Configuration out(c.size(), Payload(mods.size(), 0));
  for (std::size_t x = 0; x < g.order(); ++x) {
    for (const auto& [s, m] : ca.memory) {
      const auto& v = c[g.index_of(g.mul(g.elements()[x], s))];
      for (std::size_t i = 0; i < mods.size(); ++i) {
        std::int64_t acc = out[x][i];
        for (std::size_t j = 0; j < mods.size(); ++j) acc += m[i][j] * v[j];
        out[x][i] = ((acc % mods[i]) + mods[i]) % mods[i];
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("alphabets") {
  const Alphabet z6 = Alphabet::parse("Z/6");
  CHECK(z6.to_string() == "F2+F3");
  CHECK(z6.size() == 6);
  CHECK(Alphabet::parse("F3^2").size() == 9);
  CHECK(Alphabet::parse("Z/4").moduli() == std::vector<std::int64_t>{4});
  CHECK(Alphabet::parse("Z/12").size() == 12);
  CHECK_FALSE(Alphabet::parse("Z/4").is_vector_space());
  const Alphabet a = Alphabet::parse("Z/2+Z/4");
  for (std::uint64_t i = 0; i < a.size(); ++i) CHECK(a.index_of(a.element_at(i)) == i);
}

TEST_CASE("a kernel example on C3") {
  const Group c3 = parse_group("C3");
  const auto ca = parse_ca(c3, Alphabet::parse("F2"), "[(0,[1]),(1,[1])]");
  const Configuration ones(3, Payload{1});
  const auto img = apply_ca(ca, ones);
  for (const auto& v : img) CHECK(v[0] == 0);
  const auto ki = ca_kernel_image(ca);
  CHECK(ki.kernel_order == 2);
  CHECK(ki.image_order == 4);
  CHECK_FALSE(ki.injective);
  // the subgroup-order path agrees with brute force
  const auto la = ca_kernel_image(ca, 1);
  CHECK_FALSE(la.brute_force);
  CHECK(la.kernel_order == 2);
  CHECK(la.image_order == 4);
}

TEST_CASE("non-vector-space alphabet") {
  const auto ca = parse_ca(parse_group("C2"), Alphabet::parse("Z/4"), "[(0,[2])]");
  const auto ki = ca_kernel_image(ca);
  CHECK(ki.kernel_order == 4);
  CHECK(ki.image_order == 4);
  CHECK(ca_kernel_image(ca, 1).kernel_order == 4);
  // an ill-defined map Z/2 -> Z/4 is rejected
  CHECK_THROWS_AS(parse_ca(parse_group("C2"), Alphabet::parse("Z/2+Z/4"), "[(0,[[1,0],[1,1]])]"), Error);
}

TEST_CASE("additive, equivariant, and agrees with direct evaluation") {
  Xorshift64Star rng(8);
  const Group g = parse_group("S3");
  const Alphabet a = Alphabet::parse("Z/2+Z/4");
  const auto ca = parse_ca(g, a, "[((),[[1,0],[0,3]]),((1 2),[[0,0],[2,1]]),((1 2 3),[[1,0],[2,2]])]");
  for (int i = 0; i < 100; ++i) {
    const auto x = random_config(ca, rng), y = random_config(ca, rng);
    CHECK(apply_ca(ca, add(a, x, y)) == add(a, apply_ca(ca, x), apply_ca(ca, y)));
    CHECK(apply_ca(ca, x) == evaluate(ca, x));
    const auto h = g.random_element(rng);
    CHECK(apply_ca(ca, translate(g, h, x)) == translate(g, h, apply_ca(ca, x)));
  }
}

TEST_CASE("kernel times image equals the configuration count") {
  Xorshift64Star rng(4);
  const Group g = parse_group("C4");
  const Alphabet a = Alphabet::parse("Z/6");
  for (int i = 0; i < 20; ++i) {
    std::vector<std::pair<GroupElement, IntMat>> mem;
    for (const auto& s : g.elements()) {
      if (rng.below(2)) mem.push_back({s, {{static_cast<std::int64_t>(rng.below(2)), 0}, {0, static_cast<std::int64_t>(rng.below(3))}}});
    }
    const auto ca = make_ca(g, a, mem);
    const auto ki = ca_kernel_image(ca);
    CHECK(ki.kernel_order * ki.image_order == ki.total);
    const auto dec = decompose_ca(ca);
    CHECK(dec.kernel_product_holds);
    std::uint64_t prod = 1;
    for (const auto& part : dec.parts) prod *= part.component_ki.kernel_order;
    CHECK(prod == ki.kernel_order);
  }
}

TEST_CASE("matrix correspondence") {
  const GroupRing r = parse_group_ring("F2[C2]");
  const MatrixRing m(r, 2);
  const auto y = m.parse("[[1,g],[0,1]]");
  const auto ca = ca_from_matrix(m, y);
  CHECK(format_memory(ca) == "[(0,[[1,0],[0,1]]),(1,[[0,1],[0,0]])]");
  CHECK(matrix_from_ca(m, ca) == y);
  CHECK(ca_kernel_image(ca).injective);
}

TEST_CASE("finite support on Z") {
  const Group z = parse_group("Z");
  const auto ca = parse_ca(z, Alphabet::parse("F2"), "[(0,[1]),(1,[1])]");
  std::map<GroupElement, Payload> c{{z.parse_element("0"), Payload{1}}};
  const auto img = apply_ca_finite_support(ca, c);
  // tau(c)(g) = c(g) + c(g+1): the points 0 and -1
  CHECK(img.size() == 2);
  CHECK(img.count(z.parse_element("-1")) == 1);
}

TEST_CASE("decomposition into primary parts") {
  const auto ca = parse_ca(parse_group("C2"), Alphabet::parse("Z/4"), "[(0,[3])]");
  const auto dec = decompose_ca(ca);
  REQUIRE(dec.parts.size() == 1);
  const auto& part = dec.parts[0];
  CHECK(part.component_ki.injective);
  CHECK(part.restriction_ki.injective);
  REQUIRE(part.quotient_ki.has_value());
  CHECK(part.quotient_ki->injective);
  CHECK(part.restriction_consistent);
  CHECK(part.inheritance_holds);
}

TEST_CASE("surjunctivity sweeps") {
  struct Case {
    const char* group;
    const char* alphabet;
    std::uint64_t endos;
    std::uint64_t space;
    std::uint64_t bijective;
  };
  // |End(Z/4)| = 4, |End(Z/2+Z/3)| = 2*3. Over F2[C2] a CA is a + b s, bijective iff a != b.
  for (const auto& c : {Case{"C2", "F2", 2, 4, 2}, Case{"C3", "F2", 2, 8, 3}, Case{"C2", "Z/4", 4, 16, 8},
                        Case{"C2xC2", "F2", 2, 16, 8}, Case{"C2", "Z/6", 6, 36, 8}}) {
    const auto rep = surjunctivity_report(parse_group(c.group), Alphabet::parse(c.alphabet));
    CHECK(rep.exhaustive);
    CHECK(rep.endomorphisms == c.endos);
    CHECK(rep.space == c.space);
    CHECK(rep.scanned == c.space);
    CHECK(rep.bijective == c.bijective);
    CHECK(rep.violations == 0);
    CHECK(rep.csc_mismatches == 0);
  }
}

TEST_CASE("sampled sweep") {
  const auto rep = surjunctivity_report(parse_group("C4"), Alphabet::parse("F3^2"), 60, 5, false);
  CHECK_FALSE(rep.exhaustive);
  CHECK(rep.scanned == 60);
  CHECK(rep.violations == 0);
  CHECK(rep.csc_mismatches == 0);
}
