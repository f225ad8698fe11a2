#include "stabfin/wreath.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "stabfin/error.hpp"
#include "stabfin/text.hpp"

namespace stabfin {

namespace {

constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kLimit / a) fail(ErrorCode::Overflow, "wreath product too large to index");
  return a * b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Wreath

Wreath::Wreath(Group base, Group top) : base_(std::move(base)), top_(std::move(top)) {}

std::string Wreath::name() const { return base_.name() + " wr " + top_.name(); }

WreathElement Wreath::identity() const { return WreathElement{{}, top_.identity()}; }

WreathElement Wreath::make(std::vector<std::pair<GroupElement, GroupElement>> values, GroupElement top) const {
  std::stable_sort(values.begin(), values.end(),
                   [&](const auto& a, const auto& b) { return top_.less(a.first, b.first); });
  WreathElement out{{}, std::move(top)};
  for (auto& [x, v] : values) {
    if (!out.base.empty() && out.base.back().first == x) {
      out.base.back().second = base_.mul(out.base.back().second, v);
    } else {
      out.base.emplace_back(std::move(x), std::move(v));
    }
  }
  std::erase_if(out.base, [&](const auto& t) { return base_.is_identity(t.second); });
  return out;
}

WreathElement Wreath::point_mass(const GroupElement& at, const GroupElement& value) const {
  return make({{at, value}}, top_.identity());
}

WreathElement Wreath::from_top(const GroupElement& gamma) const { return WreathElement{{}, gamma}; }

GroupElement Wreath::value(const WreathElement& w, const GroupElement& at) const {
  for (const auto& [x, v] : w.base) {
    if (x == at) return v;
  }
  return base_.identity();
}

WreathElement Wreath::mul(const WreathElement& a, const WreathElement& b) const {
  std::vector<std::pair<GroupElement, GroupElement>> values = a.base;
  for (const auto& [y, v] : b.base) values.emplace_back(top_.mul(a.top, y), v);
  return make(std::move(values), top_.mul(a.top, b.top));
}

WreathElement Wreath::inv(const WreathElement& a) const {
  const GroupElement ti = top_.inv(a.top);
  std::vector<std::pair<GroupElement, GroupElement>> values;
  for (const auto& [x, v] : a.base) values.emplace_back(top_.mul(ti, x), base_.inv(v));
  return make(std::move(values), ti);
}

std::uint64_t Wreath::order() const {
  if (!is_finite()) fail(ErrorCode::InfiniteGroup, name() + " is infinite");
  std::uint64_t n = top_.order();
  for (std::size_t i = 0; i < top_.order(); ++i) n = mul_checked(n, base_.order());
  return n;
}

WreathElement Wreath::element_at(std::uint64_t index) const {
  const std::uint64_t q = base_.order();
  std::vector<std::pair<GroupElement, GroupElement>> values;
  for (const auto& x : top_.elements()) {
    values.emplace_back(x, base_.elements()[index % q]);
    index /= q;
  }
  return make(std::move(values), top_.elements()[index % top_.order()]);
}

std::uint64_t Wreath::index_of(const WreathElement& w) const {
  const std::uint64_t q = base_.order();
  std::uint64_t idx = 0, place = 1;
  for (const auto& x : top_.elements()) {
    idx += place * base_.index_of(value(w, x));
    place *= q;
  }
  return idx + place * top_.index_of(w.top);
}

std::vector<WreathElement> Wreath::elements(std::uint64_t cap) const {
  const std::uint64_t n = order();
  if (n > cap) fail(ErrorCode::BudgetExceeded, name() + " has " + std::to_string(n) + " elements, cap " + std::to_string(cap));
  std::vector<WreathElement> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(element_at(i));
  return out;
}

std::vector<WreathElement> Wreath::base_elements(std::uint64_t cap) const {
  const std::uint64_t n = order() / top_.order();
  if (n > cap) fail(ErrorCode::BudgetExceeded, "base of " + name() + " exceeds cap " + std::to_string(cap));
  std::vector<WreathElement> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(element_at(i));
  return out;
}

WreathElement Wreath::random(Xorshift64Star& rng, std::int64_t window, std::size_t max_support) const {
  std::vector<std::pair<GroupElement, GroupElement>> values;
  if (top_.is_finite() && base_.is_finite()) {
    for (const auto& x : top_.elements()) values.emplace_back(x, base_.random_element(rng, window));
  } else {
    const std::size_t k = static_cast<std::size_t>(rng.below(max_support + 1));
    for (std::size_t i = 0; i < k; ++i) {
      values.emplace_back(top_.random_element(rng, window), base_.random_element(rng, window));
    }
  }
  return make(std::move(values), top_.random_element(rng, window));
}

std::string Wreath::format(const WreathElement& w) const {
  std::string s = "((";
  if (top_.is_finite()) {
    bool first = true;
    for (const auto& x : top_.elements()) {
      if (!first) s += ",";
      first = false;
      s += base_.format(value(w, x));
    }
    s += ")";
  } else {
    s = "({";
    for (std::size_t i = 0; i < w.base.size(); ++i) {
      if (i) s += ",";
      s += top_.format(w.base[i].first) + ":" + base_.format(w.base[i].second);
    }
    s += "}";
  }
  return s + "," + top_.format(w.top) + ")";
}

WreathElement Wreath::parse(std::string_view text) const {
  auto inner = trim(text);
  if (inner.size() < 2 || inner.front() != '(' || inner.back() != ')') {
    fail(ErrorCode::ParseError, "wreath element must look like ((values),top): " + std::string(text));
  }
  auto parts = split_top_level(inner.substr(1, inner.size() - 2), ',');
  if (parts.size() != 2) fail(ErrorCode::ParseError, "wreath element needs exactly (base, top)");
  auto fpart = trim(parts[0]);
  GroupElement top = top_.parse_element(parts[1]);
  std::vector<std::pair<GroupElement, GroupElement>> values;
  if (!fpart.empty() && fpart.front() == '{') {
    auto body = strip_brackets(fpart, '{', '}');
    if (!trim(body).empty()) {
      for (const auto& item : split_top_level(body, ',')) {
        auto kv = split_top_level(item, ':');
        if (kv.size() != 2) fail(ErrorCode::ParseError, "support entry must be point:value");
        values.emplace_back(top_.parse_element(kv[0]), base_.parse_element(kv[1]));
      }
    }
  } else {
    if (!top_.is_finite()) fail(ErrorCode::ParseError, "infinite top: write the base as {point:value,...}");
    auto items = split_top_level(strip_brackets(fpart, '(', ')'), ',');
    if (items.size() != top_.order()) {
      fail(ErrorCode::ParseError, "expected " + std::to_string(top_.order()) + " base values");
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      values.emplace_back(top_.elements()[i], base_.parse_element(items[i]));
    }
  }
  return make(std::move(values), std::move(top));
}

// ---------------------------------------------------------------------------
// endomorphism constructors

WreathEndo identity_endo(const Wreath& w) {
  return WreathEndo{w, w, [](const WreathElement& x) { return x; }, "identity", "id"};
}

WreathEndo compose_endos(const WreathEndo& outer, const WreathEndo& inner) {
  if (!(inner.target == outer.source)) fail(ErrorCode::Mismatch, "cannot compose: wreath products differ");
  auto f = outer.rule;
  auto g = inner.rule;
  return WreathEndo{inner.source, outer.target, [f, g](const WreathElement& x) { return f(g(x)); }, "composite",
                    outer.label + " o " + inner.label};
}

WreathEndo hom_from_base_epi(const GroupHom& phi, const Group& top) {
  Wreath src(phi.source, top), dst(phi.target, top);
  return WreathEndo{src, dst,
                    [dst, phi](const WreathElement& w) {
                      std::vector<std::pair<GroupElement, GroupElement>> values;
                      for (const auto& [x, v] : w.base) values.emplace_back(x, phi(v));
                      return dst.make(std::move(values), w.top);
                    },
                    "base_lift", "base(" + phi.label + ")"};
}

WreathEndo hom_from_top_epi(const Group& base, const GroupHom& phi) {
  if (!base.is_abelian()) fail(ErrorCode::NonAbelianBase, base.name() + " is not abelian");
  Wreath src(base, phi.source), dst(base, phi.target);
  return WreathEndo{src, dst,
                    [dst, phi](const WreathElement& w) {
                      std::vector<std::pair<GroupElement, GroupElement>> values;
                      for (const auto& [x, v] : w.base) values.emplace_back(phi(x), v);
                      return dst.make(std::move(values), phi(w.top));
                    },
                    "top_push", "top(" + phi.label + ")"};
}

WreathEndo explicit_endo(const Wreath& source, const Wreath& target,
                         std::vector<std::pair<WreathElement, WreathElement>> table, std::string label) {
  auto shared = std::make_shared<std::vector<std::pair<WreathElement, WreathElement>>>(std::move(table));
  const std::string name = label;
  return WreathEndo{source, target,
                    [shared, name](const WreathElement& w) {
                      for (const auto& [a, b] : *shared) {
                        if (a == w) return b;
                      }
                      fail(ErrorCode::Mismatch, name + ": element outside the table");
                    },
                    "explicit", std::move(label)};
}

Wreath matrix_wreath(std::int64_t n, std::size_t d, const Group& top) {
  if (d == 0) fail(ErrorCode::InvalidSpec, "module rank must be positive");
  if (d == 1) return Wreath(make_group(GroupSpec::cyclic(n)), top);
  return Wreath(make_group(GroupSpec::product(std::vector<GroupSpec>(d, GroupSpec::cyclic(n)))), top);
}

namespace {

Wreath mixed_wreath(const std::vector<std::int64_t>& moduli, const Group& top) {
  if (moduli.size() == 1) return Wreath(make_group(GroupSpec::cyclic(moduli[0])), top);
  std::vector<GroupSpec> factors;
  for (auto m : moduli) factors.push_back(GroupSpec::cyclic(m));
  return Wreath(make_group(GroupSpec::product(factors)), top);
}

// (v, g) -> (vS, g) for an integer matrix S over Z[G], component r read modulo moduli[r].
std::function<WreathElement(const WreathElement&)> module_rule(const Wreath& w, const GroupRing& zg,
                                                               const RingMatrix& s,
                                                               const std::vector<std::int64_t>& moduli) {
  return [w, zg, s, moduli](const WreathElement& x) {
    const std::size_t d = moduli.size();
    std::vector<GRElem> v(d);
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<std::pair<GroupElement, Scalar>> terms;
      for (const auto& [pt, val] : x.base) {
        if (val[k] != 0) terms.emplace_back(pt, Integer(val[k]));
      }
      v[k] = zg.normalize(std::move(terms));
    }
    std::map<GroupElement, Payload> acc;
    for (std::size_t r = 0; r < d; ++r) {
      GRElem out;
      for (std::size_t k = 0; k < d; ++k) {
        if (v[k].terms.empty() || s.at(k, r).terms.empty()) continue;
        out = zg.add(out, zg.mul(v[k], s.at(k, r)));
      }
      out = reduce_in_place_mod(zg, out, Integer(moduli[r]));
      for (const auto& [pt, c] : out.terms) {
        auto& slot = acc.try_emplace(pt, Payload(d, 0)).first->second;
        slot[r] = static_cast<std::int64_t>(std::get<Integer>(c));
      }
    }
    std::vector<std::pair<GroupElement, GroupElement>> values;
    for (auto& [pt, payload] : acc) values.emplace_back(pt, GroupElement(std::move(payload)));
    return w.make(std::move(values), x.top);
  };
}

RingMatrix lift_to_integers(const MatrixRing& ring, const GroupRing& zg, const RingMatrix& m) {
  return map_entries(m, [&](const GRElem& e) { return integer_lift(ring.base(), zg, e); });
}

}  // namespace

WreathEndo endo_from_matrix(const MatrixRing& ring, const RingMatrix& y) {
  const CoeffRing& k = ring.base().coeffs();
  if (k.kind() != CoeffRing::Kind::z_mod) fail(ErrorCode::Mismatch, "matrix must be over (Z/n)[G]");
  const std::int64_t n = k.modulus();
  if (y.dim != ring.dim()) fail(ErrorCode::Mismatch, "matrix dimension does not match its ring");
  const Group& top = ring.base().group();
  Wreath w = matrix_wreath(n, ring.dim(), top);
  GroupRing zg(CoeffRing::integers(), top, ring.base().var());
  RingMatrix s = lift_to_integers(ring, zg, y);
  return WreathEndo{w, w, module_rule(w, zg, s, std::vector<std::int64_t>(ring.dim(), n)), "matrix_induced",
                    "matrix(" + ring.format(y) + ")"};
}

// ---------------------------------------------------------------------------
// finite analysis

HomLawCheck verify_wreath_hom(const WreathEndo& e, std::uint64_t seed, std::uint64_t samples,
                              std::uint64_t exhaustive_cap) {
  HomLawCheck out;
  const Wreath& s = e.source;
  const Wreath& t = e.target;
  auto test = [&](const WreathElement& a, const WreathElement& b) {
    ++out.pairs;
    if (!(e(s.mul(a, b)) == t.mul(e(a), e(b)))) {
      out.holds = false;
      out.counterexample = std::make_pair(a, b);
    }
  };
  if (s.is_finite() && s.order() <= exhaustive_cap) {
    out.exhaustive = true;
    const auto elems = s.elements(exhaustive_cap);
    for (const auto& a : elems) {
      for (const auto& b : elems) {
        test(a, b);
        if (!out.holds) return out;
      }
    }
    return out;
  }
  Xorshift64Star rng(seed);
  for (std::uint64_t i = 0; i < samples && out.holds; ++i) test(s.random(rng), s.random(rng));
  return out;
}

EndoProfile profile_endo(const WreathEndo& e, std::uint64_t cap) {
  EndoProfile p;
  p.source_order = e.source.order();
  p.target_order = e.target.order();
  std::set<std::uint64_t> image;
  for (const auto& x : e.source.elements(cap)) {
    WreathElement y = e(x);
    image.insert(e.target.index_of(y));
    if (e.target.is_identity(y)) {
      p.kernel.push_back(x);
      if (!e.source.in_base(x)) p.kernel_in_base = false;
    }
    if (e.source.in_base(x) && !e.target.in_base(y)) p.image_of_base_in_base = false;
  }
  p.image_order = image.size();
  p.kernel_order = p.kernel.size();
  p.surjective = p.image_order == p.target_order;
  p.injective = p.kernel_order == 1;
  return p;
}

std::vector<std::vector<std::size_t>> wreath_cayley_table(const Wreath& w, std::uint64_t cap) {
  const auto elems = w.elements(cap);
  std::vector<std::vector<std::size_t>> t(elems.size(), std::vector<std::size_t>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) t[i][j] = w.index_of(w.mul(elems[i], elems[j]));
  }
  return t;
}

std::vector<std::vector<std::size_t>> group_cayley_table(const Group& g) {
  const auto& elems = g.elements();
  std::vector<std::vector<std::size_t>> t(elems.size(), std::vector<std::size_t>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) t[i][j] = g.index_of(g.mul(elems[i], elems[j]));
  }
  return t;
}

std::vector<WreathElement> wreath_centre(const Wreath& w, std::uint64_t cap) {
  const auto elems = w.elements(cap);
  std::vector<WreathElement> out;
  for (const auto& z : elems) {
    bool central = true;
    for (const auto& g : elems) {
      if (!(w.mul(z, g) == w.mul(g, z))) {
        central = false;
        break;
      }
    }
    if (central) out.push_back(z);
  }
  return out;
}

AugmentationMap augment_abelianize(const Wreath& w) {
  const Group& a = w.base_group();
  if (!a.is_abelian()) fail(ErrorCode::NonAbelianBase, a.name() + " is not abelian");
  Abelianization ab = abelianization(w.top_group());
  Group target = make_group(GroupSpec::product({a.spec(), ab.group.spec()}));
  auto proj = ab.projection;
  return AugmentationMap{target, [a, proj](const WreathElement& x) {
                           GroupElement sum = a.identity();
                           for (const auto& [pt, v] : x.base) sum = a.mul(sum, v);
                           Payload p = sum.payload();
                           for (auto c : proj(x.top).payload()) p.push_back(c);
                           return GroupElement(std::move(p));
                         }};
}

// ---------------------------------------------------------------------------
// abelian normal subgroups

namespace {

using Table = std::vector<std::vector<std::size_t>>;

std::vector<std::size_t> closure(const Table& t, const std::vector<std::size_t>& gens) {
  std::vector<bool> in(t.size(), false);
  std::vector<std::size_t> out{0};
  in[0] = true;
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (auto g : gens) {
      std::size_t y = t[out[k]][g];
      if (!in[y]) {
        in[y] = true;
        out.push_back(y);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool commutative(const Table& t, const std::vector<std::size_t>& s) {
  for (auto a : s) {
    for (auto b : s) {
      if (t[a][b] != t[b][a]) return false;
    }
  }
  return true;
}

}  // namespace

AbelianNormalReport classify_abelian_normal(const Wreath& w, std::uint64_t cap) {
  const auto elems = w.elements(cap);
  const Table t = wreath_cayley_table(w, cap);
  const std::size_t n = elems.size();
  std::vector<std::size_t> inverse(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (t[i][j] == 0) inverse[i] = j;
    }
  }

  std::vector<std::vector<std::size_t>> classes;
  std::vector<bool> seen(n, false);
  for (std::size_t x = 0; x < n; ++x) {
    if (seen[x]) continue;
    std::set<std::size_t> cls;
    for (std::size_t g = 0; g < n; ++g) cls.insert(t[t[g][x]][inverse[g]]);
    for (auto c : cls) seen[c] = true;
    classes.emplace_back(cls.begin(), cls.end());
  }

  // Every abelian normal subgroup is reached by adding one class at a time through
  // its own (abelian, normal) intermediate subgroups.
  std::set<std::vector<std::size_t>> found{{0}};
  std::deque<std::vector<std::size_t>> queue{{0}};
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (const auto& cls : classes) {
      if (std::includes(s.begin(), s.end(), cls.begin(), cls.end())) continue;
      std::vector<std::size_t> gens = s;
      gens.insert(gens.end(), cls.begin(), cls.end());
      auto next = closure(t, gens);
      if (found.count(next) || !commutative(t, next)) continue;
      found.insert(next);
      queue.push_back(next);
    }
  }

  const Group& a = w.base_group();
  const Group& top = w.top_group();
  bool exp2 = true;
  for (const auto& x : a.elements()) {
    if (!a.is_identity(a.mul(x, x))) exp2 = false;
  }

  AbelianNormalReport rep;
  rep.order = n;
  std::vector<std::vector<std::size_t>> ordered(found.begin(), found.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& x, const auto& y) { return x.size() < y.size(); });
  for (const auto& s : ordered) {
    AbelianNormalRecord rec;
    rec.members = s;
    std::set<GroupElement> tops;
    for (auto i : s) tops.insert(elems[i].top);
    rec.basic = tops.size() == 1;
    if (!rec.basic) {
      rec.exponent_two = exp2;
      bool central = false;
      if (tops.size() == 2) {
        GroupElement gamma = *tops.begin() == top.identity() ? *std::next(tops.begin()) : *tops.begin();
        rec.gamma = gamma;
        central = top.element_order(gamma) == 2;
        for (const auto& g : top.elements()) {
          if (!(top.mul(g, gamma) == top.mul(gamma, g))) central = false;
        }
      }
      rec.central_top = central;
      if (central && a.is_abelian()) {
        Group quotient = make_group(GroupSpec::central_quotient(top.spec(), rec.gamma->payload()));
        WreathEndo q = hom_from_top_epi(a, quotient_hom(top, quotient));
        std::vector<std::size_t> kernel;
        for (std::size_t i = 0; i < n; ++i) {
          if (q.target.is_identity(q(elems[i]))) kernel.push_back(i);
        }
        rec.equals_kernel = kernel == s;
      } else {
        rec.equals_kernel = false;
      }
    }
    rep.subgroups.push_back(std::move(rec));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// basic normalisation

BasicNormalization normalize_basic_endo(const WreathEndo& phi) {
  const Wreath& w = phi.source;
  const Wreath& t = phi.target;
  if (!(t.top_group() == w.top_group())) fail(ErrorCode::Mismatch, "normalisation needs the same top group on both sides");
  if (!t.base_group().is_abelian()) fail(ErrorCode::NonAbelianBase, t.base_group().name() + " is not abelian");
  EndoProfile prof = profile_endo(phi);
  if (!prof.surjective) fail(ErrorCode::NotSurjective, phi.label + " is not surjective");
  if (!prof.image_of_base_in_base) fail(ErrorCode::NotBasic, phi.label + " moves the base group");

  const Group& top = w.top_group();
  const auto& tops = top.elements();
  BasicNormalization out;
  for (const auto& g : tops) out.alpha.push_back(phi(w.from_top(g)).top);
  std::set<GroupElement> distinct(out.alpha.begin(), out.alpha.end());
  if (distinct.size() != tops.size()) fail(ErrorCode::NotSurjective, "induced top map is not a bijection");

  std::unordered_map<GroupElement, GroupElement, GroupElementHash> alpha;
  for (std::size_t i = 0; i < tops.size(); ++i) alpha.emplace(tops[i], out.alpha[i]);
  auto rule = phi.rule;
  out.psi = WreathEndo{w, t,
                       [w, t, rule, alpha](const WreathElement& x) {
                         WreathElement f = rule(WreathElement{x.base, w.top_group().identity()});
                         // Reindex through alpha^-1: the new value at y is the old value at alpha(y).
                         std::vector<std::pair<GroupElement, GroupElement>> values;
                         for (const auto& [y, a] : alpha) values.emplace_back(y, t.value(f, a));
                         return t.make(std::move(values), x.top);
                       },
                       "normalized", "normalize(" + phi.label + ")"};

  out.psi_is_hom = verify_wreath_hom(out.psi, 1, 1000, 1u << 12).holds;
  EndoProfile pp = profile_endo(out.psi);
  out.kernel_phi = prof.kernel_order;
  out.kernel_psi = pp.kernel_order;
  out.kernels_in_base = prof.kernel_in_base && pp.kernel_in_base;
  return out;
}

// ---------------------------------------------------------------------------
// D8

Wreath c2_wr_c2() { return Wreath(make_group(GroupSpec::cyclic(2)), make_group(GroupSpec::cyclic(2))); }

WreathEndo d8_nonbasic_automorphism() {
  Wreath w = c2_wr_c2();
  static const char* kTable[][2] = {
      {"((0,0),0)", "((0,0),0)"}, {"((0,0),1)", "((0,1),0)"}, {"((0,1),0)", "((0,0),1)"},
      {"((0,1),1)", "((1,0),1)"}, {"((1,0),0)", "((1,1),1)"}, {"((1,0),1)", "((0,1),1)"},
      {"((1,1),0)", "((1,1),0)"}, {"((1,1),1)", "((1,0),0)"},
  };
  std::vector<std::pair<WreathElement, WreathElement>> table;
  for (const auto& row : kTable) table.emplace_back(w.parse(row[0]), w.parse(row[1]));
  return explicit_endo(w, w, std::move(table), "d8_nonbasic");
}

WreathEndo d8_literal_formula_map() {
  Wreath w = c2_wr_c2();
  const auto& top = w.top_group();
  return WreathEndo{w, w,
                    [w, top](const WreathElement& e) {
                      const std::int64_t x = w.value(e, GroupElement{0})[0];
                      const std::int64_t y = w.value(e, GroupElement{1})[0];
                      return w.make({{GroupElement{0}, GroupElement{x}}, {GroupElement{1}, GroupElement{x}}},
                                    GroupElement{(y + e.top[0]) % 2});
                    },
                    "explicit", "d8_literal"};
}

std::optional<std::vector<std::size_t>> find_isomorphism(const Table& a, const Table& b) {
  const std::size_t n = a.size();
  if (b.size() != n) return std::nullopt;
  auto orders = [](const Table& t) {
    std::vector<std::size_t> o(t.size());
    for (std::size_t x = 0; x < t.size(); ++x) {
      std::size_t k = 1, y = x;
      while (y != 0) {
        y = t[y][x];
        ++k;
      }
      o[x] = k;
    }
    return o;
  };
  const auto oa = orders(a), ob = orders(b);

  std::vector<std::size_t> gens;
  std::vector<std::size_t> span{0};
  while (span.size() < n) {
    // Pick the element that enlarges the generated subgroup most.
    std::size_t best = 0, best_size = 0;
    for (std::size_t x = 1; x < n; ++x) {
      if (std::binary_search(span.begin(), span.end(), x)) continue;
      auto g = gens;
      g.push_back(x);
      auto s = closure(a, g).size();
      if (s > best_size) {
        best = x;
        best_size = s;
      }
    }
    gens.push_back(best);
    span = closure(a, gens);
  }

  std::vector<std::size_t> images(gens.size());
  std::function<std::optional<std::vector<std::size_t>>(std::size_t)> search =
      [&](std::size_t k) -> std::optional<std::vector<std::size_t>> {
    if (k == gens.size()) {
      std::vector<std::size_t> map(n, n);
      map[0] = 0;
      std::vector<std::size_t> todo{0};
      for (std::size_t q = 0; q < todo.size(); ++q) {
        for (std::size_t gi = 0; gi < gens.size(); ++gi) {
          std::size_t x = a[todo[q]][gens[gi]];
          std::size_t y = b[map[todo[q]]][images[gi]];
          if (map[x] == n) {
            map[x] = y;
            todo.push_back(x);
          } else if (map[x] != y) {
            return std::nullopt;
          }
        }
      }
      std::vector<bool> hit(n, false);
      for (auto y : map) {
        if (y == n || hit[y]) return std::nullopt;
        hit[y] = true;
      }
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          if (map[a[x][y]] != b[map[x]][map[y]]) return std::nullopt;
        }
      }
      return map;
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (ob[c] != oa[gens[k]]) continue;
      images[k] = c;
      if (auto r = search(k + 1)) return r;
    }
    return std::nullopt;
  };
  return search(0);
}

// ---------------------------------------------------------------------------
// Hopf witness pipeline

std::vector<int> PGroupBasis::exponents(std::size_t i) const {
  std::vector<int> e;
  for (std::size_t k = std::max<std::size_t>(i, 1); k <= parts.size(); ++k) e.insert(e.end(), parts[k - 1], static_cast<int>(k));
  return e;
}

BlockShape PGroupBasis::shape(std::size_t i) const {
  BlockShape s;
  for (std::size_t k = std::max<std::size_t>(i, 1); k <= parts.size(); ++k) {
    if (parts[k - 1] > 0) s.parts.push_back(parts[k - 1]);
  }
  return s;
}

std::vector<std::string> PGroupBasis::labels(std::size_t i) const {
  std::vector<std::string> out;
  for (std::size_t k = std::max<std::size_t>(i, 1); k <= parts.size(); ++k) {
    for (std::size_t j = 1; j <= parts[k - 1]; ++j) out.push_back("a_" + std::to_string(k) + "," + std::to_string(j));
  }
  return out;
}

PGroupBasis PGroupBasis::parse(std::int64_t p, std::string_view text) {
  if (!is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  PGroupBasis b;
  b.p = p;
  for (const auto& item : split_top_level(strip_brackets(trim(text), '(', ')'), ',')) {
    auto t = trim(item);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string_view::npos) {
      fail(ErrorCode::ParseError, "bad part '" + std::string(t) + "'");
    }
    b.parts.push_back(std::stoul(std::string(t)));
  }
  if (b.exponents(1).empty()) fail(ErrorCode::InvalidSpec, "p-group basis needs a positive part");
  return b;
}

PipelineResult hopf_witness_pipeline(const PGroupBasis& basis, std::size_t i, const MatrixRing& ring,
                                     const RingMatrix& y, const RingMatrix& z, std::int64_t window,
                                     std::uint64_t budget) {
  const std::int64_t p = basis.p;
  const CoeffRing& k = ring.base().coeffs();
  if (!k.is_prime_field() || k.modulus() != p) fail(ErrorCode::Mismatch, "matrices must be over F_p[G]");
  PipelineResult out;
  out.exponents = basis.exponents(i);
  const BlockShape shape = basis.shape(i);
  const std::size_t d = out.exponents.size();
  if (d == 0 || ring.dim() != d) fail(ErrorCode::ShapeMismatch, "matrix size does not match the p-group basis");
  if (!ring.is_identity(ring.mul(z, y))) fail(ErrorCode::NotLeftInverse, "ZY is not the identity");
  if (!is_block_upper(ring, y, shape)) fail(ErrorCode::ShapeViolation, "Y is not block upper for " + shape.to_string());
  if (!is_block_upper(ring, z, shape)) fail(ErrorCode::ShapeViolation, "Z is not block upper for " + shape.to_string());

  const Group& top = ring.base().group();
  GroupRing zg(CoeffRing::integers(), top, ring.base().var());
  MatrixRing zring(zg, d);
  const int m = *std::max_element(out.exponents.begin(), out.exponents.end());
  out.y_lift = lift_to_integers(ring, zg, y);
  RingMatrix z_lift = lift_to_integers(ring, zg, z);
  out.z_bar = hensel_lift(zring, z_lift, out.y_lift, p, m);

  std::vector<std::int64_t> moduli;
  for (int e : out.exponents) moduli.push_back(ipow(p, static_cast<unsigned>(e)));
  auto scaled = [&](const RingMatrix& src) {
    RingMatrix s = zring.zero();
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t r = 0; r < d; ++r) {
        const int shift = out.exponents[r] - out.exponents[a];
        if (shift < 0) {
          if (!src.at(a, r).terms.empty()) fail(ErrorCode::ShapeViolation, "nonzero entry below the block diagonal");
          continue;
        }
        s.at(a, r) = zg.scale(Scalar(Integer(ipow(p, static_cast<unsigned>(shift)))), src.at(a, r));
      }
    }
    return s;
  };
  out.phi_matrix = scaled(out.y_lift);
  out.psi_matrix = scaled(out.z_bar);
  out.wreath = mixed_wreath(moduli, top);
  out.phi = WreathEndo{out.wreath, out.wreath, module_rule(out.wreath, zg, out.phi_matrix, moduli), "matrix_induced",
                       "phi~"};
  out.psi = WreathEndo{out.wreath, out.wreath, module_rule(out.wreath, zg, out.psi_matrix, moduli), "matrix_induced",
                       "psi"};

  const Wreath& w = out.wreath;
  auto generator = [&](std::size_t a, std::int64_t scale) {
    Payload pl(d, 0);
    pl[a] = scale;
    return w.point_mass(top.identity(), GroupElement(std::move(pl)));
  };
  out.composition_identity = true;
  out.vi_containment = true;
  for (std::size_t a = 0; a < d; ++a) {
    const WreathElement gen = generator(a, 1);
    if (!(out.phi(out.psi(gen)) == gen)) out.composition_identity = false;
    // b_a = p^(e_a - 1) a_a must land on sum_r b_r (y_ar mod p).
    const WreathElement b = generator(a, ipow(p, static_cast<unsigned>(out.exponents[a] - 1)));
    std::vector<std::pair<GroupElement, GroupElement>> expected;
    std::map<GroupElement, Payload> acc;
    for (std::size_t r = 0; r < d; ++r) {
      for (const auto& [g, c] : y.at(a, r).terms) {
        auto& slot = acc.try_emplace(g, Payload(d, 0)).first->second;
        slot[r] = std::get<std::int64_t>(c) * ipow(p, static_cast<unsigned>(out.exponents[r] - 1));
      }
    }
    for (auto& [g, pl] : acc) expected.emplace_back(g, GroupElement(std::move(pl)));
    if (!(out.phi(b) == w.make(std::move(expected), top.identity()))) out.vi_containment = false;
  }

  // The top coordinate is preserved, so the kernel lives in the base.
  const auto& pelems = w.base_group().elements();
  std::vector<GroupElement> support;
  if (top.is_finite()) {
    support = top.elements();
  } else {
    support = window_elements(top, window);
  }
  std::uint64_t count = 1;
  bool fits = true;
  for (std::size_t s = 0; s < support.size() && fits; ++s) {
    if (count > budget / pelems.size()) fits = false;
    count *= pelems.size();
  }
  if (fits && count <= budget) {
    out.kernel_exhaustive = top.is_finite();
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::uint64_t rest = idx;
      std::vector<std::pair<GroupElement, GroupElement>> values;
      for (const auto& pt : support) {
        values.emplace_back(pt, pelems[rest % pelems.size()]);
        rest /= pelems.size();
      }
      WreathElement e = w.make(std::move(values), top.identity());
      if (w.is_identity(out.phi(e))) {
        ++out.kernel_order;
        if (out.kernel_sample.size() < 16) out.kernel_sample.push_back(e);
      }
    }
  }
  return out;
}

}  // namespace stabfin
