#include <set>

#include "doctest.h"
#include "stabfin/error.hpp"
#include "stabfin/wreath.hpp"

using namespace stabfin;

namespace {

bool is_unit_by_search(const GroupRing& r, const GRElem& y) {
  for (std::uint64_t i = 0; i < r.size(); ++i) {
    if (r.is_one(r.mul(y, r.element_at(i)))) return true;
  }
  return false;
}

// Every abelian normal subgroup of a small finite wreath product: normal subgroups are unions
// of conjugacy classes, so try every union that contains the identity class.
std::size_t abelian_normal_by_classes(const Wreath& w) {
  const auto els = w.elements();
  const std::size_t n = els.size();
  std::vector<int> cls(n, -1);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    if (cls[i] >= 0) continue;
    classes.emplace_back();
    for (const auto& g : els) {
      const auto j = w.index_of(w.mul(w.mul(g, els[i]), w.inv(g)));
      if (cls[j] < 0) {
        cls[j] = static_cast<int>(classes.size() - 1);
        classes.back().push_back(j);
      }
    }
  }
  REQUIRE(classes.size() <= 20);
  std::size_t count = 0;
  for (std::uint32_t mask = 1; mask < (1u << classes.size()); mask += 2) {
    std::vector<bool> in(n, false);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if ((mask >> c) & 1u) {
        for (auto i : classes[c]) in[i] = true;
      }
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!in[i]) continue;
      for (std::size_t j = 0; j < n && ok; ++j) {
        if (!in[j]) continue;
        const auto ij = w.mul(els[i], els[j]);
        ok = in[w.index_of(ij)] && ij == w.mul(els[j], els[i]);
      }
    }
    count += ok;
  }
  return count;
}

}  // namespace

TEST_CASE("wreath orders and enumeration") {
  CHECK(Wreath(parse_group("C2"), parse_group("C2")).order() == 8);
  CHECK(Wreath(parse_group("C3"), parse_group("C2")).order() == 18);
  CHECK(Wreath(parse_group("C4"), parse_group("C2")).order() == 32);
  CHECK(Wreath(parse_group("C2"), parse_group("C4")).order() == 64);
  CHECK_FALSE(Wreath(parse_group("C2"), parse_group("Z")).is_finite());
  const Wreath w(parse_group("C3"), parse_group("C2"));
  for (std::uint64_t i = 0; i < w.order(); ++i) {
    CHECK(w.index_of(w.element_at(i)) == i);
    CHECK(w.parse(w.format(w.element_at(i))) == w.element_at(i));
  }
}

TEST_CASE("multiplication convention") {
  const Wreath w = c2_wr_c2();
  CHECK(w.format(w.mul(w.parse("((1,0),1)"), w.parse("((1,0),1)"))) == "((1,1),0)");
  // the top element moves a point mass
  const auto g = w.from_top(w.top_group().parse_element("1"));
  const auto d = w.point_mass(w.top_group().identity(), w.base_group().parse_element("1"));
  CHECK(w.format(w.mul(w.mul(g, d), w.inv(g))) == "((0,1),0)");
}

TEST_CASE("group axioms on random wreath elements") {
  Xorshift64Star rng(21);
  const std::vector<Wreath> ws = {Wreath(parse_group("C2"), parse_group("C3")),
                                  Wreath(parse_group("S3"), parse_group("Z")),
                                  Wreath(parse_group("C3"), parse_group("Z^2")),
                                  Wreath(parse_group("C2xC2"), parse_group("S3"))};
  for (const auto& w : ws) {
    for (int i = 0; i < 150; ++i) {
      const auto a = w.random(rng), b = w.random(rng), c = w.random(rng);
      CHECK(w.mul(w.mul(a, b), c) == w.mul(a, w.mul(b, c)));
      CHECK(w.is_identity(w.mul(a, w.inv(a))));
      CHECK(w.is_identity(w.mul(w.inv(a), a)));
    }
  }
}

TEST_CASE("D8 example") {
  const Wreath w = c2_wr_c2();
  CHECK(find_isomorphism(wreath_cayley_table(w), group_cayley_table(parse_group("D8"))).has_value());
  CHECK_FALSE(find_isomorphism(wreath_cayley_table(w), group_cayley_table(parse_group("C2xC4"))).has_value());

  const auto e = d8_nonbasic_automorphism();
  CHECK(verify_wreath_hom(e).holds);
  const auto prof = profile_endo(e);
  CHECK(prof.injective);
  CHECK(prof.surjective);
  CHECK_FALSE(prof.image_of_base_in_base);
  CHECK_FALSE(w.in_base(e(w.parse("((0,1),0)"))));

  const auto lit = d8_literal_formula_map();
  const auto law = verify_wreath_hom(lit);
  CHECK_FALSE(law.holds);
  REQUIRE(law.counterexample.has_value());
  const auto& [a, b] = *law.counterexample;
  CHECK_FALSE(lit(w.mul(a, b)) == w.mul(lit(a), lit(b)));
}

TEST_CASE("centres") {
  CHECK(wreath_centre(c2_wr_c2()).size() == 2);
  CHECK(wreath_centre(Wreath(parse_group("C2"), parse_group("C3"))).size() == 2);
  CHECK(wreath_centre(Wreath(parse_group("C3"), parse_group("C2"))).size() == 3);
}

TEST_CASE("top epimorphisms: kernel order is the index quotient") {
  struct Case {
    const char* a;
    const char* top;
    const char* image;
    bool project;
  };
  for (const auto& c : {Case{"C2", "C4", "C2", false}, Case{"C3", "C4", "C2", false}, Case{"C2", "C2xC2", "C2", true}}) {
    const Group a = parse_group(c.a), top = parse_group(c.top), img = parse_group(c.image);
    const GroupHom phi = c.project ? projection_hom(top, 0) : reduction_hom(top, img);
    const auto e = hom_from_top_epi(a, phi);
    CHECK(verify_wreath_hom(e).holds);
    const auto prof = profile_endo(e);
    CHECK(prof.surjective);
    CHECK_FALSE(prof.injective);
    CHECK(prof.kernel_order == Wreath(a, top).order() / Wreath(a, img).order());
  }
  CHECK_THROWS_AS(hom_from_top_epi(parse_group("S3"), reduction_hom(parse_group("C4"), parse_group("C2"))), Error);
}

TEST_CASE("base epimorphism") {
  const auto e = hom_from_base_epi(reduction_hom(parse_group("C4"), parse_group("C2")), parse_group("C2"));
  const auto prof = profile_endo(e);
  CHECK(prof.source_order == 32);
  CHECK(prof.surjective);
  CHECK(prof.kernel_order == 4);
  CHECK(prof.kernel_in_base);
  CHECK(normalize_basic_endo(e).certified());
}

TEST_CASE("matrix endomorphisms are bijective exactly for units") {
  for (const char* g : {"C2", "C3", "C4", "C2xC2"}) {
    const GroupRing r = parse_group_ring(std::string("F2[") + g + "]");
    const MatrixRing m(r, 1);
    for (std::uint64_t i = 0; i < r.size(); ++i) {
      RingMatrix y = m.zero();
      y.at(0, 0) = r.element_at(i);
      const auto e = endo_from_matrix(m, y);
      const auto prof = profile_endo(e);
      CHECK(prof.image_of_base_in_base);
      CHECK((prof.injective && prof.surjective) == is_unit_by_search(r, y.at(0, 0)));
    }
  }
}

TEST_CASE("matrix endomorphism kernel example") {
  const GroupRing r = parse_group_ring("F2[C3]", "s");
  const MatrixRing m(r, 1);
  const auto e = endo_from_matrix(m, m.parse("1+s"));
  const auto prof = profile_endo(e);
  CHECK(prof.kernel_order == 2);
  std::set<std::string> k;
  for (const auto& x : prof.kernel) k.insert(e.source.format(x));
  CHECK(k == std::set<std::string>{"((0,0,0),0)", "((1,1,1),0)"});
}

TEST_CASE("abelian normal subgroups of C2 wr C2") {
  const Wreath w = c2_wr_c2();
  const auto rep = classify_abelian_normal(w);
  CHECK(rep.subgroups.size() == abelian_normal_by_classes(w));
  std::size_t non_basic = 0, kernel_like = 0, expected_fail = 0;
  for (const auto& s : rep.subgroups) {
    if (s.basic) continue;
    ++non_basic;
    CHECK(s.exponent_two.value());
    CHECK(s.central_top.value());
    bool cyclic = false;
    for (auto i : s.members) {
      const auto x = w.element_at(i);
      cyclic = cyclic || !w.is_identity(w.mul(x, x));
    }
    if (s.equals_kernel.value()) {
      ++kernel_like;
      CHECK_FALSE(cyclic);
    } else {
      ++expected_fail;
      CHECK(cyclic);
    }
  }
  CHECK(non_basic == 2);
  CHECK(kernel_like == 1);
  CHECK(expected_fail == 1);
  CHECK(classify_abelian_normal(Wreath(parse_group("C3"), parse_group("C2"))).subgroups.size() ==
        abelian_normal_by_classes(Wreath(parse_group("C3"), parse_group("C2"))));
}

TEST_CASE("basic normalisation of a composite endomorphism") {
  const GroupRing r = parse_group_ring("F2[C3]", "s");
  const MatrixRing m(r, 1);
  const auto twist = hom_from_top_epi(parse_group("C2"), scaling_hom(parse_group("C3"), 2));
  const auto phi = compose_endos(twist, endo_from_matrix(m, m.parse("s")));
  const auto n = normalize_basic_endo(phi);
  CHECK(n.certified());
  CHECK(n.kernel_phi == 1);
}

TEST_CASE("augmentation onto A x Ab(G)") {
  const Wreath w(parse_group("C2"), parse_group("S3"));
  const auto aug = augment_abelianize(w);
  CHECK(aug.target.order() == 4);
  Xorshift64Star rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto a = w.random(rng), b = w.random(rng);
    CHECK(aug.rule(w.mul(a, b)) == aug.target.mul(aug.rule(a), aug.rule(b)));
  }
}

TEST_CASE("Hopf witness pipeline on a fixed unit") {
  const GroupRing r = parse_group_ring("F2[C2]");
  const MatrixRing m(r, 2);
  const auto y = m.parse("[[1,g],[0,1]]");
  const auto z = unitriangular_inverse(m, y).inverse;
  const auto res = hopf_witness_pipeline(PGroupBasis::parse(2, "(1,1)"), 1, m, y, z);
  CHECK(res.composition_identity);
  CHECK(res.vi_containment);
  CHECK(res.kernel_exhaustive);
  CHECK(res.kernel_order == 1);
  CHECK(res.wreath.order() == 128);
  CHECK_THROWS_AS(hopf_witness_pipeline(PGroupBasis::parse(2, "(1,1)"), 1, m, y, m.identity()), Error);
}
