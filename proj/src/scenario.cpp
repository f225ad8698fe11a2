#include "stabfin/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "stabfin/automata.hpp"
#include "stabfin/error.hpp"
#include "stabfin/localembed.hpp"
#include "stabfin/matrices.hpp"
#include "stabfin/text.hpp"
#include "stabfin/wreath.hpp"

namespace stabfin {

using nlohmann::json;

std::string_view status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "bounded-inconclusive";
    case Status::usage_error: return "usage-error";
  }
  return "?";
}

Status parse_status(std::string_view text) {
  text = trim(text);
  if (text == "pass") return Status::pass;
  if (text == "fail") return Status::fail;
  if (text == "bounded-inconclusive" || text == "inconclusive") return Status::inconclusive;
  if (text == "usage-error") return Status::usage_error;
  fail(ErrorCode::UsageError, "unknown status '" + std::string(text) + "' for parameter 'expect'");
}

int exit_code(Status s) {
  switch (s) {
    case Status::pass: return 0;
    case Status::fail: return 1;
    case Status::inconclusive: return 2;
    case Status::usage_error: return 3;
  }
  return 3;
}

namespace {

std::uint64_t parse_u64(const std::string& key, std::string_view v) {
  v = trim(v);
  if (v.empty()) fail(ErrorCode::UsageError, "parameter '" + key + "' is empty");
  std::uint64_t out = 0;
  for (char c : v) {
    if (c < '0' || c > '9') fail(ErrorCode::UsageError, "parameter '" + key + "' must be a non-negative integer");
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return out;
}

class Params {
 public:
  Params(const Scenario& s, std::set<std::string> allowed) : s_(s) {
    for (const auto& [k, v] : s.params) {
      if (!allowed.count(k)) fail(ErrorCode::UsageError, "unknown parameter '" + k + "' for " + s.command);
    }
  }

  bool has(const std::string& key) const { return s_.params.count(key) != 0; }
  std::string get(const std::string& key) const {
    auto it = s_.params.find(key);
    if (it == s_.params.end()) fail(ErrorCode::UsageError, s_.command + " needs parameter '" + key + "'");
    return it->second;
  }
  std::string get_or(const std::string& key, const std::string& def) const { return has(key) ? get(key) : def; }
  std::int64_t get_int(const std::string& key, std::int64_t def) const {
    if (!has(key)) return def;
    std::string v = get(key);
    const bool neg = !v.empty() && v[0] == '-';
    const auto mag = static_cast<std::int64_t>(parse_u64(key, neg ? std::string_view(v).substr(1) : v));
    return neg ? -mag : mag;
  }
  bool get_bool(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const std::string v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(ErrorCode::UsageError, "parameter '" + key + "' must be true or false");
  }
  std::vector<std::string> list(const std::string& key) const {
    std::vector<std::string> out;
    const std::string body(trim(strip_brackets(trim(get(key)), '[', ']')));
    if (body.empty()) return out;
    for (const auto& item : split_top_level(body, ',')) out.emplace_back(trim(item));
    return out;
  }

 private:
  const Scenario& s_;
};

template <class F>
auto param_guard(const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UsageError) throw;
    fail(ErrorCode::UsageError, "parameter '" + key + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// df-check and unit-search

void unit_search_records(Report& r, const UnitSearchReport& u, const MatrixRing& ring) {
  r.records.push_back({{"ring", u.ring},
                       {"d", u.d},
                       {"window", u.window},
                       {"mode", u.mode},
                       {"candidates", u.candidates},
                       {"scanned", u.scanned},
                       {"one_sided", u.one_sided},
                       {"exhaustive", u.exhaustive},
                       {"bounded", u.bounded},
                       {"partial", u.partial}});
  for (const auto& [x, y] : u.witnesses) r.witnesses.push_back({{"x", ring.format(x)}, {"y", ring.format(y)}});
  if (!u.witnesses.empty()) {
    r.status = Status::fail;
  } else if (u.bounded || u.partial || !u.exhaustive) {
    r.status = Status::inconclusive;
  } else {
    r.status = Status::pass;
  }
}

void run_unit_search(const Scenario& s, Report& r, bool df) {
  Params p(s, df ? std::set<std::string>{"ring", "dim", "var", "x", "y", "shape", "coeff_range"}
                 : std::set<std::string>{"ring", "dim", "var", "coeff_range"});
  const GroupRing base = param_guard("ring", [&] { return parse_group_ring(p.get("ring"), p.get_or("var", "")); });
  const auto dim = static_cast<std::size_t>(p.get_int("dim", 1));
  if (dim < 1) fail(ErrorCode::UsageError, "parameter 'dim' must be at least 1");
  const MatrixRing ring(base, dim);
  if (df && p.has("shape")) {
    const BlockShape shape = param_guard("shape", [&] { return BlockShape::parse(p.get("shape")); });
    const auto rep = block_df_reduction_check(base, shape, s.budget, s.seed);
    auto side = [](const BlockDFSide& b) {
      return json{{"elements", b.elements}, {"pairs_scanned", b.pairs_scanned}, {"one_sided", b.one_sided},
                  {"violations", b.violations}, {"sampled", b.sampled}};
    };
    r.records.push_back({{"shape", rep.shape.to_string()},
                         {"block", side(rep.block)},
                         {"full", side(rep.full)},
                         {"equivalence_holds", rep.equivalence_holds()}});
    if (!rep.equivalence_holds() || rep.block.violations || rep.full.violations) {
      r.status = Status::fail;
      r.witnesses.push_back({{"shape", rep.shape.to_string()}, {"block_violations", rep.block.violations},
                             {"full_violations", rep.full.violations}});
    }
    return;
  }
  if (df && (p.has("x") || p.has("y"))) {
    const RingMatrix x = param_guard("x", [&] { return ring.parse(p.get("x")); });
    const RingMatrix y = param_guard("y", [&] { return ring.parse(p.get("y")); });
    const auto c = param_guard("x", [&] { return check_df_pair(ring, x, y); });
    r.records.push_back({{"ring", ring.name()}, {"xy_identity", true}, {"yx", ring.format(c.yx)},
                         {"confirms", c.confirms}});
    if (!c.confirms) {
      r.status = Status::fail;
      r.witnesses.push_back({{"x", ring.format(x)}, {"y", ring.format(y)}});
    }
    return;
  }
  const auto u = one_sided_unit_search(base, dim, s.window, s.budget, s.seed, p.get_int("coeff_range", 1));
  unit_search_records(r, u, ring);
}

// ---------------------------------------------------------------------------
// wreath-verify

GroupHom epi_from(const Params& p, const Group& source, const Group& image) {
  const std::string kind = p.get_or("phi", "reduce");
  if (kind == "reduce") return reduction_hom(source, image);
  if (kind.rfind("project:", 0) == 0) {
    return projection_hom(source, static_cast<std::size_t>(parse_u64("phi", std::string_view(kind).substr(8))));
  }
  if (kind == "quotient") return quotient_hom(source, image);
  fail(ErrorCode::UsageError, "parameter 'phi' must be reduce, project:<i> or quotient");
}

void run_wreath_verify(const Scenario& s, Report& r) {
  Params p(s, {"map", "base", "top", "image", "phi", "ring", "var", "y", "normalize"});
  const std::string map = p.get("map");
  WreathEndo e;
  bool d8 = false;
  if (map == "d8") {
    e = d8_nonbasic_automorphism();
    d8 = true;
  } else if (map == "d8-literal") {
    e = d8_literal_formula_map();
  } else if (map == "identity") {
    e = identity_endo(Wreath(parse_group(p.get("base")), parse_group(p.get("top"))));
  } else if (map == "base-epi") {
    const Group a = param_guard("base", [&] { return parse_group(p.get("base")); });
    const Group b = param_guard("image", [&] { return parse_group(p.get("image")); });
    const Group top = param_guard("top", [&] { return parse_group(p.get("top")); });
    e = hom_from_base_epi(epi_from(p, a, b), top);
  } else if (map == "top-epi") {
    const Group a = param_guard("base", [&] { return parse_group(p.get("base")); });
    const Group top = param_guard("top", [&] { return parse_group(p.get("top")); });
    const Group img = param_guard("image", [&] { return parse_group(p.get("image")); });
    e = hom_from_top_epi(a, epi_from(p, top, img));
  } else if (map == "matrix") {
    const GroupRing base = param_guard("ring", [&] { return parse_group_ring(p.get("ring"), p.get_or("var", "")); });
    const RingMatrix probe = param_guard("y", [&] {
      std::string y = p.get("y");
      std::size_t d = 1;
      auto t = trim(y);
      if (t.size() > 1 && t[0] == '[' && trim(t.substr(1)).front() == '[') {
        d = split_top_level(strip_brackets(t, '[', ']'), ',').size();
      }
      return MatrixRing(base, d).parse(y);
    });
    e = endo_from_matrix(MatrixRing(base, probe.dim), probe);
  } else {
    fail(ErrorCode::UsageError, "parameter 'map' must be d8, d8-literal, identity, base-epi, top-epi or matrix");
  }

  const HomLawCheck law = verify_wreath_hom(e, s.seed, 1000, 256);
  json rec{{"map", e.label.empty() ? map : e.label},
           {"source", e.source.name()},
           {"target", e.target.name()},
           {"hom_law", law.holds},
           {"hom_law_exhaustive", law.exhaustive},
           {"pairs", law.pairs}};
  if (law.counterexample) {
    const auto& [a, b] = *law.counterexample;
    r.witnesses.push_back({{"a", e.source.format(a)},
                           {"b", e.source.format(b)},
                           {"f(ab)", e.target.format(e(e.source.mul(a, b)))},
                           {"f(a)f(b)", e.target.format(e.target.mul(e(a), e(b)))}});
  }
  if (e.source.is_finite() && e.source.order() <= s.budget) {
    const EndoProfile prof = profile_endo(e, s.budget);
    rec["source_order"] = prof.source_order;
    rec["target_order"] = prof.target_order;
    rec["image_order"] = prof.image_order;
    rec["kernel_order"] = prof.kernel_order;
    rec["surjective"] = prof.surjective;
    rec["injective"] = prof.injective;
    rec["kernel_in_base"] = prof.kernel_in_base;
    rec["non_basic"] = !prof.image_of_base_in_base;
    json kernel = json::array();
    for (std::size_t i = 0; i < prof.kernel.size() && i < 16; ++i) kernel.push_back(e.source.format(prof.kernel[i]));
    rec["kernel_sample"] = kernel;
  }
  if (d8) {
    rec["isomorphic_to_D8"] =
        find_isomorphism(wreath_cayley_table(c2_wr_c2()), group_cayley_table(parse_group("D8"))).has_value();
  }
  if (p.get_bool("normalize", false) && law.holds) {
    const auto n = normalize_basic_endo(e);
    rec["normalization"] = {{"psi_is_hom", n.psi_is_hom}, {"kernel_phi", n.kernel_phi}, {"kernel_psi", n.kernel_psi},
                            {"kernels_in_base", n.kernels_in_base}, {"certified", n.certified()}};
    if (!n.certified()) r.witnesses.push_back({{"normalization", "not certified"}});
  }
  r.records.push_back(rec);
  r.status = (law.holds && r.witnesses.empty()) ? Status::pass : Status::fail;
}

// ---------------------------------------------------------------------------
// hopf-pipeline

void run_hopf(const Scenario& s, Report& r) {
  Params p(s, {"p", "parts", "i", "top", "var", "y", "z", "samples"});
  const std::int64_t prime = p.get_int("p", 2);
  const PGroupBasis basis = param_guard("parts", [&] { return PGroupBasis::parse(prime, p.get("parts")); });
  const auto i = static_cast<std::size_t>(p.get_int("i", 1));
  const Group top = param_guard("top", [&] { return parse_group(p.get_or("top", "C2")); });
  const GroupRing base(CoeffRing::gf(prime), top, p.get_or("var", ""));
  const BlockShape shape = basis.shape(i);
  const MatrixRing ring(base, shape.total());

  std::vector<UnitPair> inputs;
  if (p.has("y")) {
    UnitPair u;
    u.y = param_guard("y", [&] { return ring.parse(p.get("y")); });
    if (p.has("z")) {
      u.z = param_guard("z", [&] { return ring.parse(p.get("z")); });
    } else if (is_upper_unitriangular(ring, u.y)) {
      u.z = unitriangular_inverse(ring, u.y).inverse;
    } else {
      auto z = solve_right_inverse(ring, u.y, s.window);
      if (!z) fail(ErrorCode::UsageError, "parameter 'y': no inverse found within the window; pass z explicitly");
      u.z = *z;
    }
    inputs.push_back(u);
  } else {
    Xorshift64Star rng(s.seed);
    const auto n = p.get_int("samples", 10);
    for (std::int64_t k = 0; k < n; ++k) inputs.push_back(random_block_upper_unit(ring, shape, rng));
  }

  std::uint64_t failures = 0;
  bool all_exhaustive = true;
  for (const auto& u : inputs) {
    const PipelineResult res = hopf_witness_pipeline(basis, i, ring, u.y, u.z, s.window, s.budget);
    const bool bij = res.kernel_exhaustive && res.kernel_order == 1;
    all_exhaustive = all_exhaustive && res.kernel_exhaustive;
    json rec{{"y", ring.format(u.y)},
             {"z", ring.format(u.z)},
             {"wreath", res.wreath.name()},
             {"composition_identity", res.composition_identity},
             {"vi_containment", res.vi_containment},
             {"kernel_exhaustive", res.kernel_exhaustive},
             {"kernel_order", res.kernel_order}};
    if (res.wreath.is_finite()) rec["wreath_order"] = res.wreath.order();
    r.records.push_back(rec);
    if (!res.composition_identity || !res.vi_containment || (res.kernel_exhaustive && !bij) ||
        (!res.kernel_exhaustive && res.kernel_order > 1)) {
      ++failures;
      json w{{"y", ring.format(u.y)}, {"z", ring.format(u.z)}};
      json k = json::array();
      for (const auto& x : res.kernel_sample) k.push_back(res.wreath.format(x));
      w["kernel_sample"] = k;
      r.witnesses.push_back(w);
    }
  }
  r.status = failures ? Status::fail : (all_exhaustive ? Status::pass : Status::inconclusive);
}

// ---------------------------------------------------------------------------
// ca-report

json ki_json(const KernelImage& k) {
  return {{"kernel_order", k.kernel_order}, {"image_order", k.image_order}, {"total", k.total},
          {"injective", k.injective}, {"surjective", k.surjective}, {"brute_force", k.brute_force}};
}

void run_ca(const Scenario& s, Report& r) {
  Params p(s, {"group", "alphabet", "memory", "ring", "var", "y"});
  const Group g = param_guard("group", [&] { return parse_group(p.get("group")); });
  if (p.has("memory") || p.has("y")) {
    AdditiveCA ca;
    if (p.has("memory")) {
      const Alphabet a = param_guard("alphabet", [&] { return Alphabet::parse(p.get("alphabet")); });
      ca = param_guard("memory", [&] { return parse_ca(g, a, p.get("memory")); });
    } else {
      const GroupRing base = param_guard("ring", [&] { return parse_group_ring(p.get("ring"), p.get_or("var", "")); });
      if (!(base.group() == g)) fail(ErrorCode::UsageError, "parameter 'ring' must be over the CA's group");
      const RingMatrix y = param_guard("y", [&] {
        const std::string text = p.get("y");
        const auto t = trim(text);
        std::size_t d = 1;
        if (t.size() > 1 && t[0] == '[' && trim(t.substr(1)).front() == '[') {
          d = split_top_level(strip_brackets(t, '[', ']'), ',').size();
        }
        return MatrixRing(base, d).parse(t);
      });
      ca = ca_from_matrix(MatrixRing(base, y.dim), y);
    }
    const Decomposition dec = decompose_ca(ca, s.budget);
    json parts = json::array();
    bool ok = dec.kernel_product_holds;
    for (const auto& c : dec.parts) {
      json part{{"p", c.p}, {"component", ki_json(c.component_ki)}, {"restriction", ki_json(c.restriction_ki)},
                {"restriction_consistent", c.restriction_consistent}, {"inheritance_holds", c.inheritance_holds}};
      if (c.quotient_ki) part["quotient"] = ki_json(*c.quotient_ki);
      parts.push_back(part);
      ok = ok && c.restriction_consistent && c.inheritance_holds;
    }
    r.records.push_back({{"group", g.name()},
                         {"alphabet", ca.alphabet.to_string()},
                         {"memory", format_memory(ca)},
                         {"whole", ki_json(dec.whole)},
                         {"parts", parts},
                         {"kernel_product_holds", dec.kernel_product_holds}});
    if (dec.whole.injective != dec.whole.surjective) {
      ok = false;
      r.witnesses.push_back({{"memory", format_memory(ca)}, {"injective", dec.whole.injective},
                             {"surjective", dec.whole.surjective}});
    }
    if (!ok && r.witnesses.empty()) r.witnesses.push_back({{"memory", format_memory(ca)}});
    r.status = ok ? Status::pass : Status::fail;
    return;
  }
  const Alphabet a = param_guard("alphabet", [&] { return Alphabet::parse(p.get("alphabet")); });
  const SurjunctivityReport rep = surjunctivity_report(g, a, s.budget, s.seed, true);
  r.records.push_back({{"group", rep.group},
                       {"alphabet", rep.alphabet},
                       {"endomorphisms", rep.endomorphisms},
                       {"space", rep.space},
                       {"scanned", rep.scanned},
                       {"exhaustive", rep.exhaustive},
                       {"bijective", rep.bijective},
                       {"violations", rep.violations},
                       {"csc_mismatches", rep.csc_mismatches}});
  for (const auto& c : rep.records) {
    const bool bad = c.injective != c.surjective || (c.unit && *c.unit != (c.injective && c.surjective));
    if (bad) {
      json w{{"memory", c.memory}, {"injective", c.injective}, {"surjective", c.surjective}};
      if (c.unit) w["unit"] = *c.unit;
      r.witnesses.push_back(w);
    }
  }
  r.status = (rep.violations == 0 && rep.csc_mismatches == 0) ? Status::pass : Status::fail;
}

// ---------------------------------------------------------------------------
// localembed

json witness_json(const LocalEmbeddingWitness& w) {
  json table = json::array();
  for (std::size_t i = 0; i < w.domain.size(); ++i) {
    table.push_back({w.source.format(w.domain[i]), w.codomain.format(w.images[i])});
  }
  const EmbedVerdict v = verify_local_embedding(w);
  return {{"source", w.source.name()}, {"codomain", w.codomain.name()}, {"mapping", table},
          {"verified", v.verified}, {"checked_sums", v.sums}, {"checked_products", v.products}};
}

std::vector<FieldElem> parse_domain(const Params& p, const Field& f) {
  std::vector<FieldElem> out;
  for (const auto& item : p.list("domain")) out.push_back(param_guard("domain", [&] { return f.parse(item); }));
  return out;
}

void run_localembed(const Scenario& s, Report& r) {
  Params p(s, {"mode", "field", "p", "tower", "domain"});
  const std::string mode = p.get("mode");
  if (mode == "gf-matrices") {
    const CoeffRing k = param_guard("field", [&] { return parse_coeff_ring(p.get("field")); });
    if (!k.is_field()) fail(ErrorCode::UsageError, "parameter 'field' must name a finite field");
    const auto w = embed_gf_into_matrices(k.field(), 256);
    r.records.push_back(witness_json(w));
  } else if (mode == "eval") {
    const CoeffRing k = param_guard("field", [&] { return parse_coeff_ring(p.get_or("field", "F2")); });
    if (!k.is_field()) fail(ErrorCode::UsageError, "parameter 'field' must name a finite field");
    const Field rational = Field::rational(k.field(), "t");
    const auto e = local_embed_eval(rational, parse_domain(p, rational));
    json rec = witness_json(e.witness);
    rec["alpha"] = e.target.format(e.alpha);
    rec["target"] = e.target.name();
    rec["extensions"] = e.extensions;
    rec["scanned"] = e.scanned;
    r.records.push_back(rec);
  } else if (mode == "pipeline") {
    const auto tower = param_guard("tower", [&] { return parse_tower(p.get_or("tower", "[]")); });
    const Field top = param_guard("tower", [&] { return build_tower(p.get_int("p", 2), tower); });
    const auto pe = local_embed_pipeline(top, parse_domain(p, top), s.budget);
    json rec = witness_json(pe.witness);
    rec["field_stage"] = witness_json(pe.field_stage);
    rec["stages"] = pe.stages.size();
    rec["composition_agrees"] = pe.composition_agrees;
    r.records.push_back(rec);
    if (!pe.composition_agrees) r.witnesses.push_back({{"composition", "stage images disagree"}});
  } else {
    fail(ErrorCode::UsageError, "parameter 'mode' must be gf-matrices, eval or pipeline");
  }
  for (const auto& rec : r.records) {
    if (!rec["verified"].get<bool>()) r.witnesses.push_back({{"unverified", rec["source"]}});
  }
  r.status = r.witnesses.empty() ? Status::pass : Status::fail;
}

// ---------------------------------------------------------------------------
// abelian-normal-scan

void run_abelian(const Scenario& s, Report& r) {
  Params p(s, {"base", "top"});
  const Group a = param_guard("base", [&] { return parse_group(p.get("base")); });
  const Group top = param_guard("top", [&] { return parse_group(p.get("top")); });
  const Wreath w(a, top);
  const auto rep = classify_abelian_normal(w, std::min<std::uint64_t>(s.budget, 4096));
  const auto elems = w.elements();
  for (const auto& sub : rep.subgroups) {
    json members = json::array();
    for (auto m : sub.members) members.push_back(w.format(elems[m]));
    json rec{{"order", sub.members.size()}, {"basic", sub.basic}, {"members", members}};
    auto opt = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
    if (!sub.basic) {
      rec["exponent_two"] = opt(sub.exponent_two);
      rec["central_top"] = opt(sub.central_top);
      rec["equals_kernel"] = opt(sub.equals_kernel);
      if (sub.gamma) rec["gamma"] = top.format(*sub.gamma);
    }
    rec["all_pass"] = sub.all_pass();
    r.records.push_back(rec);
    if (!sub.all_pass()) r.witnesses.push_back(rec);
  }
  r.status = r.witnesses.empty() ? Status::pass : Status::fail;
}

json scenario_json(const Scenario& s) {
  return {{"name", s.name},       {"command", s.command}, {"parameters", s.params}, {"seed", s.seed},
          {"budget", s.budget},   {"window", s.window},   {"expect", std::string(status_name(s.expect))}};
}

bool usage_like(ErrorCode c) {
  switch (c) {
    case ErrorCode::UsageError:
    case ErrorCode::ParseError:
    case ErrorCode::InvalidSpec:
    case ErrorCode::NotPrime:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::NotOneSidedPair:
    case ErrorCode::NotLeftInverse:
    case ErrorCode::NotLinearAlphabet:
    case ErrorCode::NonAbelianBase:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::vector<std::string> known_commands() {
  return {"df-check", "unit-search", "wreath-verify", "hopf-pipeline", "ca-report", "localembed",
          "abelian-normal-scan"};
}

Scenario parse_scenario(std::string_view text, const std::string& fallback_name) {
  Scenario s;
  s.name = fallback_name;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::UsageError, "line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) fail(ErrorCode::UsageError, "line " + std::to_string(lineno) + ": empty key");
    if (key == "name") {
      s.name = value;
    } else if (key == "command") {
      s.command = value;
    } else if (key == "seed") {
      s.seed = parse_u64("seed", value);
    } else if (key == "budget") {
      s.budget = parse_u64("budget", value);
    } else if (key == "window") {
      s.window = static_cast<std::int64_t>(parse_u64("window", value));
    } else if (key == "expect") {
      s.expect = parse_status(value);
      s.expect_given = true;
    } else if (!s.params.emplace(key, value).second) {
      fail(ErrorCode::UsageError, "parameter '" + key + "' given twice");
    }
  }
  const auto cmds = known_commands();
  if (s.command.empty()) fail(ErrorCode::UsageError, "scenario '" + s.name + "' has no 'command'");
  if (std::find(cmds.begin(), cmds.end(), s.command) == cmds.end()) {
    fail(ErrorCode::UsageError, "unknown command '" + s.command + "' in parameter 'command'");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorCode::IOError, "cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), file.stem().string());
}

Report run_scenario(const Scenario& s) {
  Report r;
  r.scenario = s;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (s.command == "df-check") {
      run_unit_search(s, r, true);
    } else if (s.command == "unit-search") {
      run_unit_search(s, r, false);
    } else if (s.command == "wreath-verify") {
      run_wreath_verify(s, r);
    } else if (s.command == "hopf-pipeline") {
      run_hopf(s, r);
    } else if (s.command == "ca-report") {
      run_ca(s, r);
    } else if (s.command == "localembed") {
      run_localembed(s, r);
    } else if (s.command == "abelian-normal-scan") {
      run_abelian(s, r);
    } else {
      fail(ErrorCode::UsageError, "unknown command '" + s.command + "'");
    }
  } catch (const Error& e) {
    r.error = e.what();
    if (usage_like(e.code())) {
      r.status = Status::usage_error;
    } else {
      r.status = Status::fail;
      r.witnesses.push_back({{"error", r.error}});
    }
  }
  r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

json Report::to_json(bool with_timing) const {
  json j{{"schema", 1},
         {"scenario", scenario_json(scenario)},
         {"status", std::string(status_name(status))},
         {"as_expected", as_expected()},
         {"records", records},
         {"witnesses", witnesses}};
  if (!error.empty()) j["error"] = error;
  if (with_timing) j["timing"] = {{"ms", millis}};
  return j;
}

std::string Report::summary(bool show_expectation) const {
  std::string s = scenario.name + ": " + std::string(status_name(status));
  if (show_expectation && !as_expected()) s += " (expected " + std::string(status_name(scenario.expect)) + ")";
  if (show_expectation && as_expected() && scenario.expect != Status::pass) s += " (expected)";
  if (!witnesses.empty()) s += ", " + std::to_string(witnesses.size()) + " witness(es)";
  if (!error.empty()) s += ", " + error;
  return s;
}

SuiteReport run_suite(const std::filesystem::path& dir) {
  SuiteReport out;
  out.path = dir.string();
  if (!std::filesystem::is_directory(dir)) fail(ErrorCode::IOError, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".scn") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      out.reports.push_back(run_scenario(load_scenario(f)));
    } catch (const Error& e) {
      Report r;
      r.scenario.name = f.stem().string();
      r.scenario.command = "?";
      r.status = Status::usage_error;
      r.error = e.what();
      out.reports.push_back(std::move(r));
    }
  }
  std::stable_sort(out.reports.begin(), out.reports.end(),
                   [](const Report& a, const Report& b) { return a.scenario.name < b.scenario.name; });
  for (const auto& r : out.reports) {
    if (!r.as_expected()) out.status = Status::fail;
  }
  return out;
}

json SuiteReport::to_json(bool with_timing) const {
  json list = json::array();
  std::size_t expected_fail = 0;
  std::size_t unexpected = 0;
  for (const auto& r : reports) {
    list.push_back(r.to_json(with_timing));
    if (r.as_expected() && r.scenario.expect != Status::pass) ++expected_fail;
    if (!r.as_expected()) ++unexpected;
  }
  return {{"schema", 1},
          {"suite", path},
          {"status", std::string(status_name(status))},
          {"scenarios", reports.size()},
          {"expected_non_pass", expected_fail},
          {"unexpected", unexpected},
          {"reports", list}};
}

}  // namespace stabfin
