#include "stabfin/localembed.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "stabfin/error.hpp"
#include "stabfin/text.hpp"

namespace stabfin {

namespace {

int degree_over_prime(const Field& f) {
  std::uint64_t n = f.size();
  const auto p = static_cast<std::uint64_t>(f.characteristic());
  int k = 0;
  while (n > 1) {
    n /= p;
    ++k;
  }
  return k;
}

std::vector<FieldElem> dedupe(std::vector<FieldElem> v) {
  std::set<FieldElem> seen;
  std::vector<FieldElem> out;
  for (auto& x : v) {
    if (seen.insert(x).second) out.push_back(std::move(x));
  }
  return out;
}

LocalEmbeddingWitness checked(LocalEmbeddingWitness w, const std::string& what) {
  const EmbedVerdict v = verify_local_embedding(w);
  if (!v.verified) {
    fail(ErrorCode::Mismatch, what + ": witness fails the " + v.violation->condition + " condition");
  }
  return w;
}

LocalEmbeddingWitness field_witness(const Field& source, std::vector<FieldElem> domain, const Field& target,
                                    std::vector<FieldElem> images) {
  LocalEmbeddingWitness w;
  w.source = source;
  w.domain = std::move(domain);
  w.codomain = EmbedCodomain::of_field(target);
  for (auto& x : images) w.images.emplace_back(std::move(x));
  return w;
}

// All sums of at most `terms` elements of `pieces` (0 included), capped.
std::vector<FieldElem> bounded_sums(const Field& k, const std::set<FieldElem>& pieces, int terms,
                                    std::uint64_t cap, const std::string& what) {
  std::set<FieldElem> acc{k.zero()};
  for (int round = 0; round < terms; ++round) {
    std::set<FieldElem> next = acc;
    for (const auto& a : acc) {
      for (const auto& b : pieces) {
        next.insert(k.add(a, b));
        if (next.size() > cap) {
          fail(ErrorCode::BudgetExceeded, what + " exceeds " + std::to_string(cap) + " elements");
        }
      }
    }
    if (next.size() == acc.size()) break;
    acc = std::move(next);
  }
  return {acc.begin(), acc.end()};
}

struct Scan {
  Field target;
  FieldElem alpha;
  std::vector<FieldElem> images;
  int extensions = 0;
  std::uint64_t scanned = 0;
};

// Numerator/denominator pairs already mapped into `start`; scans for alpha there and in
// successive degree-doubling extensions.
Scan scan_for_alpha(const Field& start, const std::vector<std::pair<Poly, Poly>>& fractions) {
  Field field = start;
  std::vector<std::pair<Poly, Poly>> cur = fractions;
  Scan out;
  for (;;) {
    const std::uint64_t n = field.size();
    for (std::uint64_t i = 0; i < n; ++i) {
      const FieldElem a = field.element_at(i);
      ++out.scanned;
      std::vector<FieldElem> vals;
      bool ok = true;
      for (const auto& [num, den] : cur) {
        const FieldElem nv = poly::eval(field, num, a);
        const FieldElem dv = poly::eval(field, den, a);
        if (field.is_zero(dv) || (!num.empty() && field.is_zero(nv))) {
          ok = false;
          break;
        }
        vals.push_back(field.div(nv, dv));
      }
      if (!ok) continue;
      // Distinct values is the same as alpha avoiding every cross-difference root.
      std::set<FieldElem> distinct(vals.begin(), vals.end());
      if (distinct.size() != vals.size()) continue;
      out.target = field;
      out.alpha = a;
      out.images = std::move(vals);
      return out;
    }
    const Field bigger = make_gf(field.characteristic(), 2 * degree_over_prime(field));
    const FieldMap up = finite_field_embedding(field, bigger);
    for (auto& [num, den] : cur) {
      num = poly::map(bigger, num, up.apply);
      den = poly::map(bigger, den, up.apply);
    }
    field = bigger;
    ++out.extensions;
  }
}

// Coefficient maps for a landing: source element -> image, by lookup.
std::function<FieldElem(const FieldElem&)> lookup(const std::vector<FieldElem>& from, const std::vector<FieldElem>& to) {
  auto table = std::make_shared<std::map<FieldElem, FieldElem>>();
  for (std::size_t i = 0; i < from.size(); ++i) table->emplace(from[i], to[i]);
  return [table](const FieldElem& x) {
    auto it = table->find(x);
    if (it == table->end()) fail(ErrorCode::BaseEmbeddingUnavailable, "coefficient outside the embedded set");
    return it->second;
  };
}

std::vector<FieldElem> negation_closed(const Field& k, const std::set<FieldElem>& s) {
  std::set<FieldElem> out = s;
  out.insert(k.zero());
  out.insert(k.one());
  for (const auto& x : s) out.insert(k.neg(x));
  out.insert(k.neg(k.one()));
  return {out.begin(), out.end()};
}

FiniteLanding land_transcendental(const Field& rational, const std::vector<FieldElem>& domain, std::uint64_t cap);

}  // namespace

// ---------------------------------------------------------------------------
// codomains

EmbedCodomain EmbedCodomain::of_field(const Field& f) {
  EmbedCodomain c;
  c.kind = Kind::field;
  c.field = f;
  c.p = f.characteristic();
  return c;
}

EmbedCodomain EmbedCodomain::of_matrices(std::int64_t p, std::size_t d) {
  EmbedCodomain c;
  c.kind = Kind::matrices;
  c.p = p;
  c.d = d;
  return c;
}

EmbedValue EmbedCodomain::add(const EmbedValue& x, const EmbedValue& y) const {
  if (kind == Kind::field) return field.add(std::get<FieldElem>(x), std::get<FieldElem>(y));
  IntMat r = std::get<IntMat>(x);
  const auto& b = std::get<IntMat>(y);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) r[i][j] = (r[i][j] + b[i][j]) % p;
  }
  return r;
}

EmbedValue EmbedCodomain::mul(const EmbedValue& x, const EmbedValue& y) const {
  if (kind == Kind::field) return field.mul(std::get<FieldElem>(x), std::get<FieldElem>(y));
  const auto& a = std::get<IntMat>(x);
  const auto& b = std::get<IntMat>(y);
  IntMat r(d, std::vector<std::int64_t>(d, 0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) r[i][j] = (r[i][j] + a[i][k] * b[k][j]) % p;
    }
  }
  return r;
}

EmbedValue EmbedCodomain::one() const {
  if (kind == Kind::field) return field.one();
  IntMat r(d, std::vector<std::int64_t>(d, 0));
  for (std::size_t i = 0; i < d; ++i) r[i][i] = 1;
  return r;
}

std::string EmbedCodomain::name() const {
  if (kind == Kind::field) return field.name();
  return "M_" + std::to_string(d) + "(F" + std::to_string(p) + ")";
}

std::string EmbedCodomain::format(const EmbedValue& x) const {
  if (kind == Kind::field) return field.format(std::get<FieldElem>(x));
  const auto& m = std::get<IntMat>(x);
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ",";
    s += "[";
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (j) s += ",";
      s += std::to_string(m[i][j]);
    }
    s += "]";
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// verification

std::optional<std::size_t> LocalEmbeddingWitness::find(const FieldElem& x) const {
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i] == x) return i;
  }
  return std::nullopt;
}

EmbedVerdict verify_local_embedding(LocalEmbeddingWitness& w) {
  EmbedVerdict v;
  w.checked_sums.clear();
  w.checked_products.clear();
  auto violate = [&](std::string what, std::size_t x, std::size_t y) {
    if (v.verified) {
      v.verified = false;
      v.violation = EmbedViolation{std::move(what), x, y};
    }
  };
  if (w.images.size() != w.domain.size()) fail(ErrorCode::Mismatch, "mapping and domain differ in length");
  std::map<FieldElem, std::size_t> index;
  for (std::size_t i = 0; i < w.domain.size(); ++i) {
    if (!index.emplace(w.domain[i], i).second) fail(ErrorCode::InvalidSpec, "repeated domain element");
  }
  std::map<EmbedValue, std::size_t> seen;
  for (std::size_t i = 0; i < w.images.size(); ++i) {
    auto [it, fresh] = seen.emplace(w.images[i], i);
    if (!fresh) violate("injective", it->second, i);
  }
  const std::size_t n = w.domain.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j >= i) {
        auto s = index.find(w.source.add(w.domain[i], w.domain[j]));
        if (s != index.end()) {
          w.checked_sums.push_back({i, j, s->second});
          ++v.sums;
          if (w.codomain.add(w.images[i], w.images[j]) != w.images[s->second]) violate("sum", i, j);
        }
      }
      auto m = index.find(w.source.mul(w.domain[i], w.domain[j]));
      if (m != index.end()) {
        w.checked_products.push_back({i, j, m->second});
        ++v.products;
        if (w.codomain.mul(w.images[i], w.images[j]) != w.images[m->second]) violate("product", i, j);
      }
    }
  }
  auto one = index.find(w.source.one());
  if (one != index.end() && w.images[one->second] != w.codomain.one()) violate("identity", one->second, one->second);
  return v;
}

EmbedVerdict verify_local_embedding(const LocalEmbeddingWitness& w) {
  LocalEmbeddingWitness copy = w;
  return verify_local_embedding(copy);
}

// ---------------------------------------------------------------------------
// regular representation

IntMat regular_matrix(const Field& f, const FieldElem& a) {
  const int k = degree_over_prime(f);
  const auto p = static_cast<std::uint64_t>(f.characteristic());
  IntMat m(k, std::vector<std::int64_t>(k, 0));
  std::uint64_t basis_index = 1;
  for (int i = 0; i < k; ++i, basis_index *= p) {
    std::uint64_t idx = f.index_of(f.mul(a, f.element_at(basis_index)));
    for (int j = 0; j < k; ++j, idx /= p) m[i][j] = static_cast<std::int64_t>(idx % p);
  }
  return m;
}

LocalEmbeddingWitness embed_gf_into_matrices(const Field& f, std::uint64_t cap) {
  if (!f.is_finite()) fail(ErrorCode::Unsupported, f.name() + " is not finite");
  if (f.size() > cap) fail(ErrorCode::BudgetExceeded, f.name() + " has more than " + std::to_string(cap) + " elements");
  LocalEmbeddingWitness w;
  w.source = f;
  w.codomain = EmbedCodomain::of_matrices(f.characteristic(), static_cast<std::size_t>(degree_over_prime(f)));
  for (std::uint64_t i = 0; i < f.size(); ++i) {
    w.domain.push_back(f.element_at(i));
    w.images.emplace_back(regular_matrix(f, w.domain.back()));
  }
  return checked(std::move(w), "regular representation of " + f.name());
}

// ---------------------------------------------------------------------------
// evaluation

EvalEmbedding local_embed_eval(const Field& rational, const std::vector<FieldElem>& domain) {
  if (rational.kind() != Field::Kind::rational || !rational.base().is_finite()) {
    fail(ErrorCode::Unsupported, "evaluation needs K(t) with K finite");
  }
  const auto dom = dedupe(domain);
  std::vector<std::pair<Poly, Poly>> fractions;
  for (const auto& x : dom) fractions.emplace_back(rational.numerator(x), rational.denominator(x));
  Scan s = scan_for_alpha(rational.base(), fractions);
  EvalEmbedding out;
  out.target = s.target;
  out.alpha = s.alpha;
  out.extensions = s.extensions;
  out.scanned = s.scanned;
  out.witness = checked(field_witness(rational, dom, s.target, std::move(s.images)), "evaluation");
  return out;
}

// ---------------------------------------------------------------------------
// algebraic step

AlgebraicEmbedding local_embed_algebraic(const Field& ext, const std::vector<FieldElem>& domain,
                                         const BaseEmbedder& base_embed, std::uint64_t cap) {
  if (ext.kind() != Field::Kind::extension) fail(ErrorCode::Unsupported, ext.name() + " is not an algebraic extension");
  const Field& k = ext.base();
  const int n = ext.degree();
  const auto dom = dedupe(domain);

  std::set<FieldElem> e_raw;
  for (const auto& x : dom) {
    for (const auto& c : ext.coefficients(x)) e_raw.insert(c);
  }
  FieldElem power = ext.one();
  for (int i = 0; i < n; ++i) power = ext.mul(power, ext.gen());
  for (int i = n; i <= 2 * n - 2; ++i) {
    for (const auto& c : ext.coefficients(power)) e_raw.insert(c);
    power = ext.mul(power, ext.gen());
  }
  AlgebraicEmbedding out;
  out.coefficient_set = negation_closed(k, e_raw);

  std::set<FieldElem> triples;
  for (const auto& a : out.coefficient_set) {
    for (const auto& b : out.coefficient_set) {
      const FieldElem ab = k.mul(a, b);
      for (const auto& c : out.coefficient_set) {
        triples.insert(k.mul(ab, c));
        if (triples.size() > cap) fail(ErrorCode::BudgetExceeded, "product set exceeds the cap");
      }
    }
  }
  const auto d_set = bounded_sums(k, triples, 2 * n - 1, cap, "coefficient closure");
  out.closure_size = d_set.size();

  FiniteLanding base;
  if (base_embed) {
    base = base_embed(k, d_set);
  } else if (k.is_finite()) {
    base.target = k;
    base.images = d_set;
  } else {
    base = land_in_finite_field(k, d_set, cap);
  }
  out.stages = base.stages;
  const auto f = lookup(d_set, base.images);

  const Poly p_image = poly::map(base.target, ext.modulus(), f);
  const int k0 = degree_over_prime(base.target);
  const std::int64_t p = ext.characteristic();
  for (int j = 1; j <= std::max(1, poly::degree(p_image)) * 2; ++j) {
    Field big = base.target;
    std::function<FieldElem(const FieldElem&)> up = [](const FieldElem& x) { return x; };
    if (j > 1) {
      big = make_gf(p, k0 * j);
      up = finite_field_embedding(base.target, big).apply;
    }
    const Poly pj = poly::map(big, p_image, up);
    for (const auto& root : poly::roots(big, pj)) {
      std::vector<FieldElem> images;
      for (const auto& x : dom) {
        FieldElem acc = big.zero();
        const auto cs = ext.coefficients(x);
        for (std::size_t i = cs.size(); i-- > 0;) acc = big.add(big.mul(acc, root), up(f(cs[i])));
        images.push_back(std::move(acc));
      }
      auto w = field_witness(ext, dom, big, images);
      if (!verify_local_embedding(w).verified) continue;
      out.witness = std::move(w);
      out.target = big;
      out.root = root;
      return out;
    }
  }
  fail(ErrorCode::BaseEmbeddingUnavailable, "no root of the transported minimal polynomial gives an injective map");
}

// ---------------------------------------------------------------------------
// landing in a finite field

namespace {

FiniteLanding land_transcendental(const Field& rational, const std::vector<FieldElem>& domain, std::uint64_t cap) {
  const Field& k = rational.base();
  std::set<FieldElem> e_raw;
  int d = 0;
  for (const auto& x : domain) {
    for (const auto* part : {&rational.numerator(x), &rational.denominator(x)}) {
      d = std::max(d, poly::degree(*part));
      for (const auto& c : *part) e_raw.insert(c);
    }
  }
  const auto e = negation_closed(k, e_raw);
  // E^(2): products of two coefficients; A': sums of up to 2d+2 of them.
  std::set<FieldElem> e2;
  for (const auto& a : e) {
    for (const auto& b : e) {
      e2.insert(k.mul(a, b));
      if (e2.size() > cap) fail(ErrorCode::BudgetExceeded, "product set exceeds the cap");
    }
  }
  const auto a_prime = bounded_sums(k, e2, 2 * d + 2, cap, "coefficient closure");
  FiniteLanding base = land_in_finite_field(k, a_prime, cap);
  const auto f = lookup(a_prime, base.images);

  std::vector<std::pair<Poly, Poly>> fractions;
  for (const auto& x : domain) {
    fractions.emplace_back(poly::map(base.target, rational.numerator(x), f),
                           poly::map(base.target, rational.denominator(x), f));
  }
  Scan s = scan_for_alpha(base.target, fractions);
  FiniteLanding out;
  out.stages = std::move(base.stages);
  out.target = s.target;
  out.images = s.images;
  out.stages.push_back(checked(field_witness(rational, domain, s.target, std::move(s.images)), "evaluation"));
  return out;
}

}  // namespace

FiniteLanding land_in_finite_field(const Field& f, const std::vector<FieldElem>& domain, std::uint64_t cap) {
  const auto dom = dedupe(domain);
  FiniteLanding out;
  switch (f.kind()) {
    case Field::Kind::prime:
      out.target = f;
      out.images = dom;
      return out;
    case Field::Kind::extension: {
      auto a = local_embed_algebraic(f, dom, {}, cap);
      out.target = a.target;
      for (const auto& v : a.witness.images) out.images.push_back(std::get<FieldElem>(v));
      out.stages = std::move(a.stages);
      out.stages.push_back(std::move(a.witness));
      return out;
    }
    case Field::Kind::rational:
      if (f.base().is_finite()) {
        auto e = local_embed_eval(f, dom);
        out.target = e.target;
        for (const auto& v : e.witness.images) out.images.push_back(std::get<FieldElem>(v));
        out.stages.push_back(std::move(e.witness));
        return out;
      }
      return land_transcendental(f, dom, cap);
  }
  fail(ErrorCode::Unsupported, "unknown field kind");
}

// ---------------------------------------------------------------------------
// towers

std::string FieldTowerStep::to_string() const {
  if (kind == Kind::algebraic) return "alg:" + poly;
  return var == "t" ? "transc" : "transc:" + var;
}

std::vector<FieldTowerStep> parse_tower(std::string_view text) {
  std::vector<FieldTowerStep> out;
  std::set<std::string> used;
  const std::string_view body = trim(strip_brackets(trim(text), '[', ']'));
  if (body.empty()) return out;
  for (const auto& raw : split_top_level(body, ',')) {
    const std::string item(trim(raw));
    FieldTowerStep step;
    if (item.rfind("alg:", 0) == 0) {
      step.kind = FieldTowerStep::Kind::algebraic;
      step.poly = std::string(trim(std::string_view(item).substr(4)));
      for (std::size_t i = 0; i < step.poly.size() && step.var.empty(); ++i) {
        if (!std::isalpha(static_cast<unsigned char>(step.poly[i]))) continue;
        std::size_t j = i;
        while (j < step.poly.size() && std::isalnum(static_cast<unsigned char>(step.poly[j]))) ++j;
        std::string name = step.poly.substr(i, j - i);
        if (!used.count(name)) step.var = name;
        i = j;
      }
      if (step.var.empty()) fail(ErrorCode::ParseError, "no fresh variable in '" + item + "'");
    } else if (item == "transc" || item.rfind("transc:", 0) == 0) {
      step.kind = FieldTowerStep::Kind::transcendental;
      if (item.size() > 7) {
        step.var = std::string(trim(std::string_view(item).substr(7)));
      } else {
        for (const char* c : {"t", "u", "v", "w", "s", "r"}) {
          if (!used.count(c)) {
            step.var = c;
            break;
          }
        }
      }
      if (step.var.empty()) fail(ErrorCode::ParseError, "no variable name left for '" + item + "'");
    } else {
      fail(ErrorCode::ParseError, "tower step '" + item + "' is neither alg:<poly> nor transc");
    }
    if (!used.insert(step.var).second) fail(ErrorCode::ParseError, "variable '" + step.var + "' used twice");
    out.push_back(std::move(step));
  }
  return out;
}

Field build_tower(std::int64_t p, const std::vector<FieldTowerStep>& tower) {
  Field cur = Field::prime(p);
  for (const auto& step : tower) {
    if (step.kind == FieldTowerStep::Kind::transcendental) {
      cur = Field::rational(cur, step.var);
      continue;
    }
    const Field scratch = Field::rational(cur, step.var);
    const FieldElem e = scratch.parse(step.poly);
    if (scratch.denominator(e) != Poly{cur.one()}) {
      fail(ErrorCode::InvalidSpec, "minimal polynomial '" + step.poly + "' is not a polynomial");
    }
    const Poly& m = scratch.numerator(e);
    if (!poly::is_monic(cur, m) || poly::degree(m) < 1) {
      fail(ErrorCode::InvalidSpec, "minimal polynomial '" + step.poly + "' must be monic of degree >= 1");
    }
    cur = Field::extension(cur, m, step.var);
  }
  return cur;
}

PipelineEmbedding local_embed_pipeline(const Field& top, const std::vector<FieldElem>& domain, std::uint64_t cap) {
  PipelineEmbedding out;
  out.source = top;
  const auto dom = dedupe(domain);
  FiniteLanding land = land_in_finite_field(top, dom, cap);
  out.stages = land.stages;
  out.field_stage = checked(field_witness(top, dom, land.target, land.images), "field stage");

  const auto used = dedupe(land.images);
  LocalEmbeddingWitness m;
  m.source = land.target;
  m.codomain = EmbedCodomain::of_matrices(land.target.characteristic(),
                                          static_cast<std::size_t>(degree_over_prime(land.target)));
  for (const auto& x : used) {
    m.domain.push_back(x);
    m.images.emplace_back(regular_matrix(land.target, x));
  }
  out.matrix_stage = checked(std::move(m), "matrix stage");

  LocalEmbeddingWitness w;
  w.source = top;
  w.domain = dom;
  w.codomain = out.matrix_stage.codomain;
  for (const auto& x : land.images) w.images.emplace_back(regular_matrix(land.target, x));
  out.witness = checked(std::move(w), "pipeline");

  out.composition_agrees = true;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const auto& mid = std::get<FieldElem>(out.field_stage.images[i]);
    const auto j = out.matrix_stage.find(mid);
    if (!j || out.matrix_stage.images[*j] != out.witness.images[i]) out.composition_agrees = false;
  }
  return out;
}

PipelineEmbedding local_embed_pipeline(std::int64_t p, const std::vector<FieldTowerStep>& tower,
                                       const std::vector<std::string>& domain, std::uint64_t cap) {
  const Field top = build_tower(p, tower);
  std::vector<FieldElem> dom;
  for (const auto& s : domain) dom.push_back(top.parse(s));
  return local_embed_pipeline(top, dom, cap);
}

std::string format_witness(const LocalEmbeddingWitness& w) {
  std::string s;
  for (std::size_t i = 0; i < w.domain.size(); ++i) {
    s += w.source.format(w.domain[i]) + " -> " + w.codomain.format(w.images[i]) + "\n";
  }
  return s;
}

}  // namespace stabfin
