// Acceptance run: one line per criterion, nonzero exit when any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "stabfin/automata.hpp"
#include "stabfin/error.hpp"
#include "stabfin/localembed.hpp"
#include "stabfin/matrices.hpp"
#include "stabfin/wreath.hpp"

using namespace stabfin;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int ceil_log2(std::size_t d) {
  int r = 0;
  while ((std::size_t{1} << r) < d) ++r;
  return r;
}

bool unit_by_search(const MatrixRing& m, const RingMatrix& y) {
  for (std::uint64_t j = 0; j < m.size(); ++j) {
    if (m.is_identity(m.mul(y, m.element_at(j)))) return true;
  }
  return false;
}

RingMatrix zero_below_blocks(const MatrixRing& m, RingMatrix x, const BlockShape& shape) {
  const auto block = shape.block_of();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (block[i] > block[j]) x.at(i, j) = m.base().zero();
    }
  }
  return x;
}

// ---------------------------------------------------------------------------

Outcome direct_finiteness() {
  Outcome o;
  const auto start = Clock::now();
  struct Case {
    const char* ring;
    std::size_t d;
    std::uint64_t pairs;
  };
  for (const auto& c : {Case{"F2", 2, 256}, Case{"F2[C2]", 2, 65536}, Case{"F2[C2]", 1, 16}, Case{"F2[C3]", 1, 64},
                        Case{"Z/4[C2]", 1, 256}}) {
    const auto u = one_sided_unit_search(parse_group_ring(c.ring), c.d, 0, 1u << 20, 1);
    const std::string tag = std::string(c.ring) + " d=" + std::to_string(c.d);
    o.require(u.exhaustive && u.scanned == c.pairs, tag + " not exhaustive");
    o.require(u.witnesses.empty(), tag + " has a one-sided witness");
  }
  o.require(seconds_since(start) < 10.0, "runtime over 10 s");
  return o;
}

Outcome unitriangular() {
  Outcome o;
  const auto start = Clock::now();
  Xorshift64Star rng(2);
  const std::vector<GroupRing> rings = {parse_group_ring("F2"), parse_group_ring("Z"), parse_group_ring("F2[Z]")};
  for (int n = 0; n < 500; ++n) {
    const GroupRing& r = rings[n % 3];
    const std::size_t d = 1 + rng.below(5);
    const MatrixRing m(r, d);
    RingMatrix a = m.identity();
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) a.at(i, j) = r.random(rng, 3, 3, 3);
    }
    const auto res = unitriangular_inverse(m, a);
    o.require(m.is_identity(m.mul(a, res.inverse)) && m.is_identity(m.mul(res.inverse, a)),
              "inverse fails over " + r.name());
    o.require(res.rounds <= ceil_log2(d), "too many rounds");
  }
  o.require(seconds_since(start) < 30.0, "runtime over 30 s");
  return o;
}

Outcome hensel() {
  Outcome o;
  Xorshift64Star rng(3);
  for (int n = 0; n < 200; ++n) {
    const GroupRing r = parse_group_ring(n % 2 ? "Z[Z]" : "Z[C2]");
    const std::int64_t p = rng.below(2) ? 3 : 2;
    const int mexp = std::vector<int>{2, 3, 5}[rng.below(3)];
    const BlockShape shape = BlockShape::parse(rng.below(2) ? "(1,1)" : "(1,2)");
    const MatrixRing m(r, shape.total());
    const auto u = random_block_upper_unit(m, shape, rng, 2, 1);
    // perturb by p times a shaped matrix so that Zt Yt = I only modulo p
    RingMatrix noise = zero_below_blocks(m, m.random(rng, 2, 1, 2), shape);
    const RingMatrix yt = m.add(u.y, map_entries(noise, [&](const GRElem& e) {
      return r.mul(r.scalar(r.coeffs().from_int(p)), e);
    }));
    const RingMatrix z = hensel_lift(m, u.z, yt, p, mexp);
    Integer mod = 1;
    for (int k = 0; k < mexp; ++k) mod *= p;
    o.require(congruent(m, m.mul(z, yt), m.identity(), mod), "congruence fails");
    o.require(is_block_upper(m, z, shape), "shape lost");
  }
  return o;
}

Outcome matrix_wreath_correspondence() {
  Outcome o;
  for (const char* g : {"C2", "C3", "C4", "C2xC2"}) {
    const MatrixRing m(parse_group_ring(std::string("F2[") + g + "]"), 1);
    for (std::uint64_t i = 0; i < m.size(); ++i) {
      const auto y = m.element_at(i);
      const auto prof = profile_endo(endo_from_matrix(m, y));
      o.require((prof.injective && prof.surjective) == unit_by_search(m, y), std::string("mismatch over ") + g);
    }
  }
  return o;
}

Outcome hopf_pipeline() {
  Outcome o;
  Xorshift64Star rng(5);
  const PGroupBasis basis = PGroupBasis::parse(2, "(1,1)");
  const BlockShape shape = basis.shape(1);
  const MatrixRing m(parse_group_ring("F2[C2]"), shape.total());
  for (int n = 0; n < 50; ++n) {
    const auto u = random_block_upper_unit(m, shape, rng);
    o.require(m.is_identity(m.mul(u.z, u.y)), "left inverse");
    const auto res = hopf_witness_pipeline(basis, 1, m, u.y, u.z);
    o.require(res.wreath.order() == 128, "wreath order");
    o.require(res.composition_identity, "composition");
    o.require(res.kernel_exhaustive && res.kernel_order == 1, "not bijective");
    o.require(res.vi_containment, "V_i containment");
  }
  return o;
}

Outcome top_epi() {
  Outcome o;
  struct Case {
    const char* a;
    const char* top;
    const char* image;
    bool project;
  };
  for (const auto& c : {Case{"C2", "C4", "C2", false}, Case{"C3", "C4", "C2", false}, Case{"C2", "C2xC2", "C2", true}}) {
    const Group a = parse_group(c.a), top = parse_group(c.top), img = parse_group(c.image);
    const auto e = hom_from_top_epi(a, c.project ? projection_hom(top, 0) : reduction_hom(top, img));
    const auto prof = profile_endo(e);
    o.require(verify_wreath_hom(e).holds, "hom law");
    o.require(prof.surjective && !prof.injective, "surjective, non-injective");
    o.require(prof.kernel_order == Wreath(a, top).order() / Wreath(a, img).order(), "kernel order");
  }
  return o;
}

Outcome d8() {
  Outcome o;
  const Wreath w = c2_wr_c2();
  const auto e = d8_nonbasic_automorphism();
  const auto prof = profile_endo(e);
  o.require(verify_wreath_hom(e).holds && verify_wreath_hom(e).exhaustive, "hom law");
  o.require(prof.injective && prof.surjective, "not an automorphism");
  o.require(!prof.image_of_base_in_base, "base image stays in base");
  o.require(find_isomorphism(wreath_cayley_table(w), group_cayley_table(parse_group("D8"))).has_value(),
            "not isomorphic to D8");
  return o;
}

// Normal subgroups are unions of conjugacy classes; count the abelian ones.
std::size_t abelian_normal_oracle(const Wreath& w) {
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
      for (std::size_t j = 0; j < n && ok && in[i]; ++j) {
        if (!in[j]) continue;
        const auto ij = w.mul(els[i], els[j]);
        ok = in[w.index_of(ij)] && ij == w.mul(els[j], els[i]);
      }
    }
    count += ok;
  }
  return count;
}

Outcome abelian_scan() {
  Outcome o;
  const Wreath w = c2_wr_c2();
  const auto rep = classify_abelian_normal(w);
  o.require(rep.subgroups.size() == abelian_normal_oracle(w), "subgroup count");
  int kernel = 0, expected_fail = 0;
  for (const auto& s : rep.subgroups) {
    if (s.basic) continue;
    bool cyclic4 = false;
    for (auto i : s.members) {
      const auto x = w.element_at(i);
      cyclic4 = cyclic4 || !w.is_identity(w.mul(x, x));
    }
    const bool c12 = s.exponent_two.value_or(false) && s.central_top.value_or(false);
    if (s.all_pass()) {
      ++kernel;
    } else if (cyclic4 && s.members.size() == 4 && c12 && !s.equals_kernel.value_or(true)) {
      ++expected_fail;
    } else {
      o.require(false, "unexpected non-basic subgroup");
    }
  }
  o.require(kernel == 1, "kernel subgroup");
  o.require(expected_fail == 1, "cyclic order-4 subgroup");
  if (o.ok) o.detail = "cyclic order-4 subgroup recorded as expected fail for kernel equality";
  return o;
}

Outcome ca_suite() {
  Outcome o;
  for (const auto& [g, a] : {std::pair{"C2", "F2"}, std::pair{"C3", "F2"}, std::pair{"C2", "Z/4"},
                             std::pair{"C2xC2", "F2"}}) {
    const auto rep = surjunctivity_report(parse_group(g), Alphabet::parse(a), 1u << 16, 1, false);
    const std::string tag = std::string(g) + "/" + a;
    o.require(rep.exhaustive, tag + " not exhaustive");
    o.require(rep.violations == 0, tag + " violation");
    o.require(rep.csc_mismatches == 0, tag + " unit mismatch");
  }
  const Group c2 = parse_group("C2");
  const Alphabet z6 = Alphabet::parse("Z/6");
  // End(Z/6) = diag(a, b), a in F2, b in F3; every memory over C2
  std::size_t tested = 0;
  for (int code = 0; code < 36; ++code) {
    const int m0 = code % 6, m1 = code / 6;
    const IntMat e0{{m0 % 2, 0}, {0, m0 / 2}}, e1{{m1 % 2, 0}, {0, m1 / 2}};
    const auto ca = make_ca(c2, z6, {{c2.elements()[0], e0}, {c2.elements()[1], e1}});
    o.require(decompose_ca(ca).kernel_product_holds, "kernel product");
    ++tested;
  }
  o.require(tested == 36, "coverage");
  return o;
}

Outcome local_embeddings() {
  Outcome o;
  for (auto [p, k] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    const Field f = make_gf(p, k);
    const auto w = embed_gf_into_matrices(f);
    o.require(verify_local_embedding(w).verified && w.checked_products.size() == f.size() * f.size(),
              "regular representation of " + f.name());
  }
  const Field r = Field::rational(Field::prime(2));
  auto dom = [&](std::initializer_list<const char*> xs) {
    std::vector<FieldElem> v;
    for (auto x : xs) v.push_back(r.parse(x));
    return v;
  };
  const auto e1 = local_embed_eval(r, dom({"0", "1"}));
  o.require(verify_local_embedding(e1.witness).verified && e1.extensions == 0, "{0,1}");
  const auto e2 = local_embed_eval(r, dom({"t", "t+1"}));
  o.require(verify_local_embedding(e2.witness).verified, "{t,t+1}");
  const auto e3 = local_embed_eval(r, dom({"1/t", "1/(t+1)"}));
  o.require(verify_local_embedding(e3.witness).verified && e3.extensions >= 1, "{1/t,1/(t+1)} needs an extension");

  const auto pe = local_embed_pipeline(2, parse_tower("[alg:x^2+x+1, transc]"), {"t", "1/t", "x*t", "x", "1"});
  auto witness = pe.witness;
  const auto v = verify_local_embedding(witness);
  o.require(v.verified && pe.composition_agrees, "pipeline witness");
  // recount the in-domain triples independently and recheck each one
  const auto& src = witness.source;
  const auto& dmn = witness.domain;
  std::size_t sums = 0, products = 0;
  for (std::size_t i = 0; i < dmn.size(); ++i) {
    for (std::size_t j = 0; j < dmn.size(); ++j) {
      for (std::size_t k = 0; k < dmn.size(); ++k) {
        if (j >= i && src.add(dmn[i], dmn[j]) == dmn[k]) {
          ++sums;
          o.require(witness.codomain.add(witness.images[i], witness.images[j]) == witness.images[k], "pipeline sum");
        }
        if (src.mul(dmn[i], dmn[j]) == dmn[k]) {
          ++products;
          o.require(witness.codomain.mul(witness.images[i], witness.images[j]) == witness.images[k],
                    "pipeline product");
        }
      }
    }
  }
  o.require(sums == witness.checked_sums.size() && products == witness.checked_products.size(),
            "pipeline triple coverage");
  o.require(products > 0, "no in-domain products");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"direct finiteness, exhaustive small rings", direct_finiteness},
      {"unitriangular inversion", unitriangular},
      {"Hensel lifting", hensel},
      {"matrix/wreath correspondence", matrix_wreath_correspondence},
      {"Hopf witness pipeline", hopf_pipeline},
      {"top epimorphisms", top_epi},
      {"D8 example", d8},
      {"abelian normal scan", abelian_scan},
      {"cellular automata", ca_suite},
      {"local embeddings", local_embeddings},
  };
  const auto start = Clock::now();
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.ok;
    std::printf("%s %2zu %-44s %7.2fs%s%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, seconds_since(t),
                o.detail.empty() ? "" : "  ", o.detail.c_str());
  }
  const double total = seconds_since(start);
  const bool in_time = total < 120.0;
  std::printf("%s    whole suite %.2fs (limit 120s)\n", in_time ? "PASS" : "FAIL", total);
  return failed == 0 && in_time ? 0 : 1;
}
