#include "stabfin/automata.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "stabfin/error.hpp"
#include "stabfin/linalg.hpp"
#include "stabfin/text.hpp"

namespace stabfin {

namespace {

constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;

std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) fail(ErrorCode::ParseError, "expected an integer");
  std::size_t pos = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) fail(ErrorCode::ParseError, "expected an integer, got '" + std::string(s) + "'");
  std::int64_t v = 0;
  for (; pos < s.size(); ++pos) {
    if (s[pos] < '0' || s[pos] > '9') fail(ErrorCode::ParseError, "expected an integer, got '" + std::string(s) + "'");
    v = v * 10 + (s[pos] - '0');
  }
  return neg ? -v : v;
}

std::uint64_t power_checked(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > kLimit / base) fail(ErrorCode::Overflow, "count exceeds 2^62");
    r *= base;
  }
  return r;
}

std::uint64_t power_saturating(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > kLimit / base) return kLimit;
    r *= base;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Alphabet

Alphabet Alphabet::vector_space(std::int64_t p, std::size_t d) {
  if (!is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  return Alphabet{{Component{p, 1, d}}};
}

Alphabet Alphabet::parse(std::string_view text) {
  std::vector<Component> raw;
  std::string cleaned(trim(text));
  std::replace(cleaned.begin(), cleaned.end(), 'x', '+');
  for (const auto& part : split_top_level(cleaned, '+')) {
    auto t = trim(part);
    std::size_t mult = 1;
    if (auto caret = t.find('^'); caret != std::string_view::npos) {
      mult = static_cast<std::size_t>(parse_int(t.substr(caret + 1)));
      t = trim(t.substr(0, caret));
    }
    if (mult == 0) fail(ErrorCode::InvalidSpec, "alphabet multiplicity must be positive");
    std::int64_t n = 0;
    if (t.size() > 1 && t[0] == 'F') {
      n = parse_int(t.substr(1));
      if (!is_prime(n)) fail(ErrorCode::NotPrime, "additive alphabets need prime fields, got " + std::string(t));
    } else if (t.size() > 2 && t.substr(0, 2) == "Z/") {
      n = parse_int(t.substr(2));
    } else {
      fail(ErrorCode::ParseError, "unknown alphabet summand '" + std::string(t) + "'");
    }
    if (n < 2) fail(ErrorCode::InvalidSpec, "alphabet modulus must be >= 2");
    std::int64_t rest = n;
    for (std::int64_t p = 2; p * p <= rest; ++p) {
      int e = 0;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      if (e) raw.push_back(Component{p, e, mult});
    }
    if (rest > 1) raw.push_back(Component{rest, 1, mult});
  }
  if (raw.empty()) fail(ErrorCode::ParseError, "empty alphabet");
  std::sort(raw.begin(), raw.end(), [](const Component& a, const Component& b) {
    return a.p != b.p ? a.p < b.p : a.e < b.e;
  });
  Alphabet out;
  for (const auto& c : raw) {
    if (!out.components.empty() && out.components.back().p == c.p && out.components.back().e == c.e) {
      out.components.back().d += c.d;
    } else {
      out.components.push_back(c);
    }
  }
  return out;
}

std::size_t Alphabet::generators() const {
  std::size_t n = 0;
  for (const auto& c : components) n += c.d;
  return n;
}

std::vector<std::int64_t> Alphabet::moduli() const {
  std::vector<std::int64_t> out;
  for (const auto& c : components) out.insert(out.end(), c.d, ipow(c.p, static_cast<unsigned>(c.e)));
  return out;
}

std::vector<std::int64_t> Alphabet::primes() const {
  std::vector<std::int64_t> out;
  for (const auto& c : components) out.insert(out.end(), c.d, c.p);
  return out;
}

std::vector<int> Alphabet::exponents() const {
  std::vector<int> out;
  for (const auto& c : components) out.insert(out.end(), c.d, c.e);
  return out;
}

std::uint64_t Alphabet::size() const {
  std::uint64_t s = 1;
  for (auto m : moduli()) {
    if (s > kLimit / static_cast<std::uint64_t>(m)) fail(ErrorCode::Overflow, "alphabet too large");
    s *= static_cast<std::uint64_t>(m);
  }
  return s;
}

bool Alphabet::is_vector_space() const { return components.size() == 1 && components[0].e == 1; }

std::string Alphabet::to_string() const {
  std::string s;
  for (const auto& c : components) {
    if (!s.empty()) s += "+";
    s += c.e == 1 ? "F" + std::to_string(c.p) : "Z/" + std::to_string(ipow(c.p, static_cast<unsigned>(c.e)));
    if (c.d > 1) s += "^" + std::to_string(c.d);
  }
  return s;
}

Payload Alphabet::element_at(std::uint64_t index) const {
  Payload out;
  for (auto m : moduli()) {
    out.push_back(static_cast<std::int64_t>(index % static_cast<std::uint64_t>(m)));
    index /= static_cast<std::uint64_t>(m);
  }
  return out;
}

std::uint64_t Alphabet::index_of(const Payload& a) const {
  const auto mods = moduli();
  std::uint64_t idx = 0, place = 1;
  for (std::size_t i = 0; i < mods.size(); ++i) {
    idx += place * static_cast<std::uint64_t>(a[i]);
    place *= static_cast<std::uint64_t>(mods[i]);
  }
  return idx;
}

// ---------------------------------------------------------------------------
// construction and text form

AdditiveCA make_ca(const Group& g, const Alphabet& a, std::vector<std::pair<GroupElement, IntMat>> memory) {
  const auto mods = a.moduli();
  const std::size_t n = mods.size();
  for (auto& [s, m] : memory) {
    if (m.size() != n) fail(ErrorCode::Mismatch, "memory matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i].size() != n) fail(ErrorCode::Mismatch, "memory matrix row has the wrong length");
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] = mod_floor(m[i][j], mods[i]);
        if (mul_mod(mods[j], m[i][j], mods[i]) != 0) {
          fail(ErrorCode::InvalidSpec, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                           ") does not define a homomorphism Z/" + std::to_string(mods[j]) +
                                           " -> Z/" + std::to_string(mods[i]));
        }
      }
    }
  }
  std::sort(memory.begin(), memory.end(), [&](const auto& x, const auto& y) { return g.less(x.first, y.first); });
  for (std::size_t k = 1; k < memory.size(); ++k) {
    if (memory[k].first == memory[k - 1].first) fail(ErrorCode::InvalidSpec, "repeated memory point " + g.format(memory[k].first));
  }
  return AdditiveCA{g, a, std::move(memory)};
}

namespace {

IntMat parse_int_matrix(std::string_view text, std::size_t n) {
  text = trim(text);
  IntMat m(n, std::vector<std::int64_t>(n, 0));
  bool nested = false;
  if (!text.empty() && text.front() == '[') {
    auto rest = trim(text.substr(1));
    nested = !rest.empty() && rest.front() == '[';
  }
  if (!nested) {
    if (n != 1) fail(ErrorCode::ParseError, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    m[0][0] = parse_int(strip_brackets(text, '[', ']'));
    return m;
  }
  auto rows = split_top_level(strip_brackets(text, '[', ']'), ',');
  if (rows.size() != n) fail(ErrorCode::ParseError, "expected " + std::to_string(n) + " matrix rows");
  for (std::size_t i = 0; i < n; ++i) {
    auto cells = split_top_level(strip_brackets(trim(rows[i]), '[', ']'), ',');
    if (cells.size() != n) fail(ErrorCode::ParseError, "expected " + std::to_string(n) + " entries per row");
    for (std::size_t j = 0; j < n; ++j) m[i][j] = parse_int(cells[j]);
  }
  return m;
}

std::string format_int_matrix(const IntMat& m) {
  auto row = [](const std::vector<std::int64_t>& r) {
    std::string s = "[";
    for (std::size_t j = 0; j < r.size(); ++j) s += (j ? "," : "") + std::to_string(r[j]);
    return s + "]";
  };
  if (m.size() == 1) return row(m[0]);
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + row(m[i]);
  return s + "]";
}

}  // namespace

AdditiveCA parse_ca(const Group& g, const Alphabet& a, std::string_view memory) {
  std::vector<std::pair<GroupElement, IntMat>> mem;
  auto body = trim(strip_brackets(trim(memory), '[', ']'));
  if (!body.empty()) {
    for (const auto& item : split_top_level(body, ',')) {
      auto t = trim(item);
      if (t.size() < 2 || t.front() != '(' || t.back() != ')') {
        fail(ErrorCode::ParseError, "memory entry must be (element, matrix): " + std::string(t));
      }
      auto parts = split_top_level(t.substr(1, t.size() - 2), ',');
      if (parts.size() != 2) fail(ErrorCode::ParseError, "memory entry must be (element, matrix): " + std::string(t));
      mem.emplace_back(g.parse_element(parts[0]), parse_int_matrix(parts[1], a.generators()));
    }
  }
  return make_ca(g, a, std::move(mem));
}

std::string format_memory(const AdditiveCA& ca) {
  std::string s = "[";
  for (std::size_t k = 0; k < ca.memory.size(); ++k) {
    if (k) s += ",";
    s += "(" + ca.group.format(ca.memory[k].first) + "," + format_int_matrix(ca.memory[k].second) + ")";
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

void accumulate(const IntMat& m, const Payload& v, const std::vector<std::int64_t>& mods, Payload& out) {
  for (std::size_t i = 0; i < mods.size(); ++i) {
    std::int64_t acc = out[i];
    for (std::size_t j = 0; j < mods.size(); ++j) {
      if (m[i][j] != 0 && v[j] != 0) acc = (acc + mul_mod(m[i][j], v[j], mods[i])) % mods[i];
    }
    out[i] = acc;
  }
}

bool is_zero_payload(const Payload& p) {
  return std::all_of(p.begin(), p.end(), [](std::int64_t v) { return v == 0; });
}

}  // namespace

Configuration apply_ca(const AdditiveCA& ca, const Configuration& c) {
  const Group& g = ca.group;
  if (!g.is_finite()) fail(ErrorCode::InfiniteGroup, "full configurations need a finite group; use finite-support evaluation");
  const auto& elems = g.elements();
  if (c.size() != elems.size()) fail(ErrorCode::Mismatch, "configuration length differs from the group order");
  const auto mods = ca.alphabet.moduli();
  Configuration out(elems.size(), Payload(mods.size(), 0));
  for (std::size_t x = 0; x < elems.size(); ++x) {
    for (const auto& [s, m] : ca.memory) accumulate(m, c[g.index_of(g.mul(elems[x], s))], mods, out[x]);
  }
  return out;
}

Configuration translate(const Group& g, const GroupElement& by, const Configuration& c) {
  const auto& elems = g.elements();
  const GroupElement inv = g.inv(by);
  Configuration out(c.size());
  for (std::size_t x = 0; x < elems.size(); ++x) out[x] = c[g.index_of(g.mul(inv, elems[x]))];
  return out;
}

std::map<GroupElement, Payload> apply_ca_finite_support(const AdditiveCA& ca,
                                                        const std::map<GroupElement, Payload>& c) {
  const Group& g = ca.group;
  const auto mods = ca.alphabet.moduli();
  std::map<GroupElement, Payload> out;
  // tau(c)(x) can be nonzero only where x s lands in supp(c), i.e. x = y s^-1.
  for (const auto& [y, v] : c) {
    for (const auto& [s, m] : ca.memory) {
      const GroupElement x = g.mul(y, g.inv(s));
      auto& slot = out.try_emplace(x, Payload(mods.size(), 0)).first->second;
      accumulate(m, v, mods, slot);
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    it = is_zero_payload(it->second) ? out.erase(it) : std::next(it);
  }
  return out;
}

std::uint64_t configuration_count(const AdditiveCA& ca) {
  return power_checked(ca.alphabet.size(), ca.group.order());
}

Configuration configuration_at(const AdditiveCA& ca, std::uint64_t index) {
  const std::uint64_t q = ca.alphabet.size();
  Configuration c(ca.group.order());
  for (auto& v : c) {
    v = ca.alphabet.element_at(index % q);
    index /= q;
  }
  return c;
}

std::uint64_t configuration_index(const AdditiveCA& ca, const Configuration& c) {
  const std::uint64_t q = ca.alphabet.size();
  std::uint64_t idx = 0, place = 1;
  for (const auto& v : c) {
    idx += place * ca.alphabet.index_of(v);
    place *= q;
  }
  return idx;
}

KernelImage ca_kernel_image(const AdditiveCA& ca, std::uint64_t budget) {
  const Group& g = ca.group;
  if (!g.is_finite()) fail(ErrorCode::InfiniteGroup, "kernel and image need a finite group");
  KernelImage ki;
  const std::uint64_t total = power_saturating(ca.alphabet.size(), g.order());
  if (total < kLimit && total <= budget) {
    ki.brute_force = true;
    ki.total = total;
    // Flat evaluation: digits c[x*D + j] in the same mixed radix as configuration_at.
    const auto mods = ca.alphabet.moduli();
    const std::size_t n = g.order(), d = mods.size();
    const auto& elems = g.elements();
    std::vector<std::vector<std::size_t>> shift;
    for (const auto& [s, m] : ca.memory) {
      std::vector<std::size_t> row(n);
      for (std::size_t x = 0; x < n; ++x) row[x] = g.index_of(g.mul(elems[x], s));
      shift.push_back(std::move(row));
    }
    std::vector<std::int64_t> c(n * d, 0), out(n * d);
    std::vector<bool> hit(total, false);
    for (std::uint64_t i = 0; i < total; ++i) {
      std::fill(out.begin(), out.end(), 0);
      for (std::size_t k = 0; k < ca.memory.size(); ++k) {
        const IntMat& m = ca.memory[k].second;
        for (std::size_t x = 0; x < n; ++x) {
          const std::int64_t* v = &c[shift[k][x] * d];
          for (std::size_t a = 0; a < d; ++a) {
            std::int64_t acc = out[x * d + a];
            for (std::size_t b = 0; b < d; ++b) acc += m[a][b] * v[b];
            out[x * d + a] = acc % mods[a];
          }
        }
      }
      std::uint64_t j = 0, place = 1;
      for (std::size_t t = 0; t < n * d; ++t) {
        j += place * static_cast<std::uint64_t>(out[t]);
        place *= static_cast<std::uint64_t>(mods[t % d]);
      }
      if (j == 0) ++ki.kernel_order;
      if (!hit[j]) {
        hit[j] = true;
        ++ki.image_order;
      }
      for (std::size_t t = 0; t < n * d; ++t) {
        if (++c[t] < mods[t % d]) break;
        c[t] = 0;
      }
    }
  } else {
    // Image of each p-part: rows are images of the basis configurations, embedded
    // into (Z/p^E)^n by scaling each coordinate with p^(E - e).
    const auto mods = ca.alphabet.moduli();
    const auto primes = ca.alphabet.primes();
    const auto exps = ca.alphabet.exponents();
    const std::size_t n = g.order();
    ki.total = total < kLimit ? total : 0;
    std::uint64_t image = 1;
    std::uint64_t full = 1;
    for (std::int64_t p : std::set<std::int64_t>(primes.begin(), primes.end())) {
      std::vector<std::size_t> idx;
      int top = 0;
      for (std::size_t j = 0; j < mods.size(); ++j) {
        if (primes[j] == p) {
          idx.push_back(j);
          top = std::max(top, exps[j]);
        }
      }
      linalg::Mat rows;
      for (std::size_t x = 0; x < n; ++x) {
        for (auto j : idx) {
          Configuration c(n, Payload(mods.size(), 0));
          c[x][j] = 1;
          const Configuration img = apply_ca(ca, c);
          linalg::Row row;
          for (std::size_t y = 0; y < n; ++y) {
            for (auto i : idx) row.push_back(img[y][i] * ipow(p, static_cast<unsigned>(top - exps[i])));
          }
          rows.push_back(std::move(row));
        }
      }
      int log_full = 0;
      for (auto i : idx) log_full += exps[i];
      log_full *= static_cast<int>(n);
      image *= power_checked(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(linalg::subgroup_log_order(rows, p, top)));
      full *= power_checked(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(log_full));
    }
    ki.total = full;
    ki.image_order = image;
    ki.kernel_order = full / image;
  }
  ki.injective = ki.kernel_order == 1;
  ki.surjective = ki.image_order == ki.total;
  return ki;
}

// ---------------------------------------------------------------------------
// matrices

AdditiveCA ca_from_matrix(const MatrixRing& ring, const RingMatrix& y) {
  const CoeffRing& k = ring.base().coeffs();
  if (!k.is_prime_field()) fail(ErrorCode::NotLinearAlphabet, "matrix must be over F_p[G]");
  const Group& g = ring.base().group();
  const std::size_t d = ring.dim();
  std::set<GroupElement> support;
  for (const auto& e : y.entries) {
    for (const auto& [s, c] : e.terms) support.insert(s);
  }
  std::vector<std::pair<GroupElement, IntMat>> memory;
  for (const auto& s : support) {
    IntMat m(d, std::vector<std::int64_t>(d, 0));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) m[i][j] = std::get<std::int64_t>(ring.base().coefficient(y.at(i, j), s));
    }
    memory.emplace_back(s, std::move(m));
  }
  return make_ca(g, Alphabet::vector_space(k.modulus(), d), std::move(memory));
}

RingMatrix matrix_from_ca(const MatrixRing& ring, const AdditiveCA& ca) {
  if (!ca.alphabet.is_vector_space()) fail(ErrorCode::NotLinearAlphabet, ca.alphabet.to_string() + " is not F_p^d");
  const auto& comp = ca.alphabet.components[0];
  const CoeffRing& k = ring.base().coeffs();
  if (!k.is_prime_field() || k.modulus() != comp.p || ring.dim() != comp.d || !(ring.base().group() == ca.group)) {
    fail(ErrorCode::Mismatch, "matrix ring does not match the automaton");
  }
  RingMatrix y = ring.zero();
  for (std::size_t i = 0; i < comp.d; ++i) {
    for (std::size_t j = 0; j < comp.d; ++j) {
      std::vector<std::pair<GroupElement, Scalar>> terms;
      for (const auto& [s, m] : ca.memory) {
        if (m[i][j] != 0) terms.emplace_back(s, Scalar(m[i][j]));
      }
      y.at(i, j) = ring.base().normalize(std::move(terms));
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// decomposition

namespace {

AdditiveCA sub_automaton(const AdditiveCA& ca, const Alphabet& alphabet, const std::vector<std::size_t>& idx,
                         const std::function<std::int64_t(std::int64_t, std::size_t, std::size_t)>& entry) {
  std::vector<std::pair<GroupElement, IntMat>> memory;
  for (const auto& [s, m] : ca.memory) {
    IntMat sub(idx.size(), std::vector<std::int64_t>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) sub[a][b] = entry(m[idx[a]][idx[b]], idx[a], idx[b]);
    }
    memory.emplace_back(s, std::move(sub));
  }
  return make_ca(ca.group, alphabet, std::move(memory));
}

}  // namespace

Decomposition decompose_ca(const AdditiveCA& ca, std::uint64_t budget) {
  Decomposition out;
  out.whole = ca_kernel_image(ca, budget);
  const auto primes = ca.alphabet.primes();
  const auto exps = ca.alphabet.exponents();
  std::uint64_t kernel_product = 1;

  for (std::int64_t p : std::set<std::int64_t>(primes.begin(), primes.end())) {
    ComponentDecomposition part;
    part.p = p;
    std::vector<std::size_t> idx;
    Alphabet comp_alpha;
    for (const auto& c : ca.alphabet.components) {
      if (c.p == p) comp_alpha.components.push_back(c);
    }
    for (std::size_t j = 0; j < primes.size(); ++j) {
      if (primes[j] == p) idx.push_back(j);
    }
    part.component = sub_automaton(ca, comp_alpha, idx, [](std::int64_t v, std::size_t, std::size_t) { return v; });

    // Q-restriction: b_j = p^(e_j-1) a_j maps to sum_i M_ij p^(e_j-1) a_i, whose i-th
    // coordinate is divisible by p^(e_i-1).
    part.restriction = sub_automaton(ca, Alphabet::vector_space(p, idx.size()), idx,
                                     [&](std::int64_t v, std::size_t i, std::size_t j) {
                                       const std::int64_t qi = ipow(p, static_cast<unsigned>(exps[i]));
                                       const std::int64_t c =
                                           mul_mod(v, ipow(p, static_cast<unsigned>(exps[j] - 1)), qi);
                                       return (c / ipow(p, static_cast<unsigned>(exps[i] - 1))) % p;
                                     });

    std::vector<std::size_t> qidx;
    Alphabet quot_alpha;
    for (const auto& c : comp_alpha.components) {
      if (c.e >= 2) quot_alpha.components.push_back(Alphabet::Component{c.p, c.e - 1, c.d});
    }
    for (auto j : idx) {
      if (exps[j] >= 2) qidx.push_back(j);
    }
    if (!qidx.empty()) {
      part.quotient = sub_automaton(ca, quot_alpha, qidx, [&](std::int64_t v, std::size_t i, std::size_t) {
        return mod_floor(v, ipow(p, static_cast<unsigned>(exps[i] - 1)));
      });
    }

    part.component_ki = ca_kernel_image(part.component, budget);
    part.restriction_ki = ca_kernel_image(part.restriction, budget);
    if (part.quotient) part.quotient_ki = ca_kernel_image(*part.quotient, budget);

    // Embed Q-configurations and compare the component automaton with the restriction.
    const auto comp_exps = comp_alpha.exponents();
    auto embed = [&](const Configuration& c) {
      Configuration e = c;
      for (auto& v : e) {
        for (std::size_t j = 0; j < v.size(); ++j) v[j] *= ipow(p, static_cast<unsigned>(comp_exps[j] - 1));
      }
      return e;
    };
    const std::uint64_t qcount = power_saturating(part.restriction.alphabet.size(), ca.group.order());
    Xorshift64Star rng(0x51ed);
    const bool all = qcount <= budget;
    const std::uint64_t trials = all ? qcount : 256;
    for (std::uint64_t t = 0; t < trials && part.restriction_consistent; ++t) {
      const std::uint64_t index = all ? t : rng.below(qcount);
      const Configuration c = configuration_at(part.restriction, index);
      if (!(apply_ca(part.component, embed(c)) == embed(apply_ca(part.restriction, c)))) part.restriction_consistent = false;
    }

    if (part.component_ki.injective) {
      part.inheritance_holds =
          part.restriction_ki.injective && (!part.quotient_ki || part.quotient_ki->injective);
    }
    kernel_product *= part.component_ki.kernel_order;
    out.parts.push_back(std::move(part));
  }
  out.kernel_product_holds = kernel_product == out.whole.kernel_order;
  return out;
}

// ---------------------------------------------------------------------------
// surjunctivity sweep

SurjunctivityReport surjunctivity_report(const Group& g, const Alphabet& a, std::uint64_t budget, std::uint64_t seed,
                                         bool keep_records) {
  if (!g.is_finite()) fail(ErrorCode::InfiniteGroup, "surjunctivity sweeps need a finite group");
  const auto mods = a.moduli();
  const std::size_t n = mods.size();
  // Entry (i,j) ranges over multiples of q_i / gcd(q_i, q_j).
  std::vector<std::int64_t> radix, step;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t gcd = std::gcd(mods[i], mods[j]);
      radix.push_back(gcd);
      step.push_back(mods[i] / gcd);
    }
  }
  auto endo_at = [&](std::uint64_t index) {
    IntMat m(n, std::vector<std::int64_t>(n));
    for (std::size_t k = 0; k < n * n; ++k) {
      const auto r = static_cast<std::uint64_t>(radix[k]);
      m[k / n][k % n] = static_cast<std::int64_t>(index % r) * step[k];
      index /= r;
    }
    return m;
  };

  SurjunctivityReport rep;
  rep.group = g.name();
  rep.alphabet = a.to_string();
  rep.endomorphisms = 1;
  for (auto r : radix) {
    if (rep.endomorphisms > kLimit / static_cast<std::uint64_t>(r)) fail(ErrorCode::Overflow, "End(A) too large");
    rep.endomorphisms *= static_cast<std::uint64_t>(r);
  }
  rep.space = power_saturating(rep.endomorphisms, g.order());
  rep.exhaustive = rep.space < kLimit && rep.space <= budget;
  const std::uint64_t count = rep.exhaustive ? rep.space : budget;

  std::optional<MatrixRing> ring;
  if (a.is_vector_space()) {
    ring.emplace(GroupRing(CoeffRing::gf(a.components[0].p), g), a.components[0].d);
  }
  const auto& elems = g.elements();
  Xorshift64Star rng(seed);
  for (std::uint64_t t = 0; t < count; ++t) {
    std::uint64_t index = rep.exhaustive ? t : rng.below(rep.space);
    std::vector<std::pair<GroupElement, IntMat>> memory;
    for (const auto& s : elems) {
      IntMat m = endo_at(index % rep.endomorphisms);
      index /= rep.endomorphisms;
      bool zero = true;
      for (const auto& row : m) {
        for (auto v : row) zero = zero && v == 0;
      }
      if (!zero) memory.emplace_back(s, std::move(m));
    }
    AdditiveCA ca = make_ca(g, a, std::move(memory));
    KernelImage ki = ca_kernel_image(ca);
    CARecord rec;
    rec.memory = format_memory(ca);
    rec.injective = ki.injective;
    rec.surjective = ki.surjective;
    rec.kernel_order = ki.kernel_order;
    if (ki.injective != ki.surjective) ++rep.violations;
    if (ki.injective && ki.surjective) ++rep.bijective;
    if (ring) {
      const RingMatrix y = matrix_from_ca(*ring, ca);
      auto inv = solve_right_inverse(*ring, y, 0);
      rec.unit = inv && ring->is_identity(ring->mul(*inv, y));
      if (*rec.unit != (ki.injective && ki.surjective)) ++rep.csc_mismatches;
    }
    ++rep.scanned;
    if (keep_records) rep.records.push_back(std::move(rec));
  }
  return rep;
}

}  // namespace stabfin
