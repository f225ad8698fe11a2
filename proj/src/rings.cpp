#include "stabfin/rings.hpp"

#include <algorithm>
#include <cctype>

#include "stabfin/error.hpp"
#include "stabfin/text.hpp"

namespace stabfin {

namespace {

std::int64_t res(const Scalar& s) { return std::get<std::int64_t>(s); }
const Integer& big(const Scalar& s) { return std::get<Integer>(s); }
const FieldElem& fe(const Scalar& s) { return std::get<FieldElem>(s); }

Integer parse_integer(std::string_view text) {
  text = trim(text);
  if (text.empty()) fail(ErrorCode::ParseError, "expected an integer");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) fail(ErrorCode::ParseError, "expected an integer in '" + std::string(text) + "'");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      fail(ErrorCode::ParseError, "expected an integer in '" + std::string(text) + "'");
    }
  }
  Integer v(std::string(text.substr(start)));
  return text[0] == '-' ? Integer(-v) : v;
}

}  // namespace

// ---------------------------------------------------------------------------
// CoeffRing

CoeffRing CoeffRing::integers() { return CoeffRing(); }

CoeffRing CoeffRing::z_mod(std::int64_t n) {
  if (n < 2) fail(ErrorCode::InvalidSpec, "z_mod modulus must be >= 2");
  CoeffRing r;
  r.kind_ = Kind::z_mod;
  r.n_ = n;
  return r;
}

CoeffRing CoeffRing::gf(std::int64_t p, int k) {
  Field f = make_gf(p, k);
  if (k == 1) {
    CoeffRing r;
    r.kind_ = Kind::z_mod;
    r.n_ = p;
    r.prime_ = true;
    r.field_ = f;
    return r;
  }
  return of_field(f);
}

CoeffRing CoeffRing::rat_fun(const CoeffRing& base, std::string var) {
  if (!base.is_field()) fail(ErrorCode::InvalidSpec, "rational functions need a field of coefficients");
  return of_field(Field::rational(base.field(), std::move(var)));
}

CoeffRing CoeffRing::of_field(const Field& f) {
  CoeffRing r;
  r.kind_ = Kind::field;
  r.n_ = f.characteristic();
  r.field_ = f;
  return r;
}

const Field& CoeffRing::field() const {
  if (!is_field()) fail(ErrorCode::RingMismatch, name() + " is not a field");
  return field_;
}

std::int64_t CoeffRing::characteristic() const { return n_; }

bool CoeffRing::is_finite() const {
  switch (kind_) {
    case Kind::integers: return false;
    case Kind::z_mod: return true;
    case Kind::field: return field_.is_finite();
  }
  return false;
}

std::uint64_t CoeffRing::size() const {
  if (!is_finite()) fail(ErrorCode::Unsupported, name() + " is infinite");
  return kind_ == Kind::z_mod ? static_cast<std::uint64_t>(n_) : field_.size();
}

std::string CoeffRing::name() const {
  switch (kind_) {
    case Kind::integers: return "Z";
    case Kind::z_mod: return prime_ ? "F" + std::to_string(n_) : "Z/" + std::to_string(n_);
    case Kind::field: return field_.name();
  }
  return "?";
}

bool operator==(const CoeffRing& a, const CoeffRing& b) {
  if (a.kind_ != b.kind_ || a.n_ != b.n_) return false;
  if (a.kind_ == CoeffRing::Kind::field) return a.field_ == b.field_;
  return true;
}

Scalar CoeffRing::zero() const { return from_int(0); }
Scalar CoeffRing::one() const { return from_int(1); }

Scalar CoeffRing::from_int(const Integer& v) const {
  switch (kind_) {
    case Kind::integers: return v;
    case Kind::z_mod: return static_cast<std::int64_t>(mod_floor(v, Integer(n_)));
    case Kind::field: return field_.from_int(static_cast<std::int64_t>(mod_floor(v, Integer(n_))));
  }
  return {};
}

Scalar CoeffRing::add(const Scalar& a, const Scalar& b) const {
  switch (kind_) {
    case Kind::integers: return Integer(big(a) + big(b));
    case Kind::z_mod: return (res(a) + res(b)) % n_;
    case Kind::field: return field_.add(fe(a), fe(b));
  }
  return {};
}

Scalar CoeffRing::neg(const Scalar& a) const {
  switch (kind_) {
    case Kind::integers: return Integer(-big(a));
    case Kind::z_mod: return (n_ - res(a)) % n_;
    case Kind::field: return field_.neg(fe(a));
  }
  return {};
}

Scalar CoeffRing::sub(const Scalar& a, const Scalar& b) const { return add(a, neg(b)); }

Scalar CoeffRing::mul(const Scalar& a, const Scalar& b) const {
  switch (kind_) {
    case Kind::integers: return Integer(big(a) * big(b));
    case Kind::z_mod: return mul_mod(res(a), res(b), n_);
    case Kind::field: return field_.mul(fe(a), fe(b));
  }
  return {};
}

bool CoeffRing::is_unit(const Scalar& a) const {
  switch (kind_) {
    case Kind::integers: return big(a) == 1 || big(a) == -1;
    case Kind::z_mod: return inverse_mod(res(a), n_) != 0 || (n_ == 1);
    case Kind::field: return !field_.is_zero(fe(a));
  }
  return false;
}

Scalar CoeffRing::inv(const Scalar& a) const {
  if (!is_unit(a)) fail(ErrorCode::NotAUnit, format(a) + " is not a unit in " + name());
  switch (kind_) {
    case Kind::integers: return big(a);
    case Kind::z_mod: return inverse_mod(res(a), n_);
    case Kind::field: return field_.inv(fe(a));
  }
  return {};
}

bool CoeffRing::is_zero(const Scalar& a) const {
  switch (kind_) {
    case Kind::integers: return big(a) == 0;
    case Kind::z_mod: return res(a) == 0;
    case Kind::field: return field_.is_zero(fe(a));
  }
  return false;
}

bool CoeffRing::is_one(const Scalar& a) const { return a == one(); }

std::uint64_t CoeffRing::index_of(const Scalar& a) const {
  switch (kind_) {
    case Kind::integers: fail(ErrorCode::Unsupported, "Z is infinite");
    case Kind::z_mod: return static_cast<std::uint64_t>(res(a));
    case Kind::field: return field_.index_of(fe(a));
  }
  return 0;
}

Scalar CoeffRing::element_at(std::uint64_t index) const {
  switch (kind_) {
    case Kind::integers: fail(ErrorCode::Unsupported, "Z is infinite");
    case Kind::z_mod:
      if (index >= static_cast<std::uint64_t>(n_)) fail(ErrorCode::Mismatch, "index out of range");
      return static_cast<std::int64_t>(index);
    case Kind::field: return field_.element_at(index);
  }
  return {};
}

Integer CoeffRing::to_integer(const Scalar& a) const {
  if (kind_ == Kind::integers) return big(a);
  if (kind_ == Kind::z_mod) return Integer(res(a));
  fail(ErrorCode::RingMismatch, name() + " scalars are not integers");
}

FieldElem CoeffRing::to_field(const Scalar& a) const {
  if (kind_ == Kind::field) return fe(a);
  if (prime_) return field_.from_int(res(a));
  fail(ErrorCode::RingMismatch, name() + " is not a field");
}

Scalar CoeffRing::from_field(const FieldElem& a) const {
  if (kind_ == Kind::field) return a;
  if (prime_) {
    Poly c = field_.coefficients(a);
    return c.empty() ? std::int64_t{0} : c[0].c;
  }
  fail(ErrorCode::RingMismatch, name() + " is not a field");
}

Scalar CoeffRing::random(Xorshift64Star& rng, std::int64_t range) const {
  switch (kind_) {
    case Kind::integers: return Integer(rng.between(-range, range));
    case Kind::z_mod: return static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n_)));
    case Kind::field:
      if (field_.is_finite()) return field_.element_at(rng.below(field_.size()));
      if (field_.kind() == Field::Kind::rational) {
        const Field& k = field_.base();
        CoeffRing base_ring = of_field(k);
        Poly num, den;
        for (int i = 0; i < 3; ++i) num.push_back(std::get<FieldElem>(base_ring.random(rng, range)));
        den.push_back(std::get<FieldElem>(base_ring.random(rng, range)));
        den.push_back(k.one());
        return field_.fraction(num, den);
      }
      fail(ErrorCode::Unsupported, "random elements of " + name());
  }
  return {};
}

std::string CoeffRing::format(const Scalar& a) const {
  switch (kind_) {
    case Kind::integers: return big(a).str();
    case Kind::z_mod: return std::to_string(res(a));
    case Kind::field: return field_.format(fe(a));
  }
  return "?";
}

bool CoeffRing::compound(const Scalar& a) const {
  if (kind_ != Kind::field) return false;
  return format(a).find_first_of("+-/*") != std::string::npos;
}

Scalar CoeffRing::parse(std::string_view text) const {
  switch (kind_) {
    case Kind::integers: return parse_integer(text);
    case Kind::z_mod: return from_int(parse_integer(text));
    case Kind::field: return field_.parse(text);
  }
  return {};
}

// ---------------------------------------------------------------------------
// GroupRing

GroupRing::GroupRing(CoeffRing coeffs, Group group, std::string var)
    : coeffs_(std::move(coeffs)), group_(std::move(group)), var_(std::move(var)) {
  if (var_.empty()) {
    const auto& spec = group_.spec();
    if (spec.kind == GroupSpec::Kind::cyclic) var_ = spec.n == 0 ? "x" : "g";
    if (spec.kind == GroupSpec::Kind::free_abelian) var_ = "x";
  }
}

std::string GroupRing::name() const {
  if (group_.is_finite() && group_.order() == 1) return coeffs_.name();
  return coeffs_.name() + "[" + group_.name() + "]";
}

GRElem GroupRing::one() const { return scalar(coeffs_.one()); }

GRElem GroupRing::scalar(const Scalar& s) const { return monomial(s, group_.identity()); }

GRElem GroupRing::monomial(const Scalar& s, const GroupElement& g) const {
  GRElem r;
  if (!coeffs_.is_zero(s)) r.terms.emplace_back(g, s);
  return r;
}

GRElem GroupRing::normalize(std::vector<std::pair<GroupElement, Scalar>> terms) const {
  const Group& g = group_;
  std::stable_sort(terms.begin(), terms.end(),
                   [&g](const auto& a, const auto& b) { return g.less(a.first, b.first); });
  GRElem out;
  for (auto& t : terms) {
    if (!out.terms.empty() && out.terms.back().first == t.first) {
      out.terms.back().second = coeffs_.add(out.terms.back().second, t.second);
    } else {
      if (!out.terms.empty() && coeffs_.is_zero(out.terms.back().second)) out.terms.pop_back();
      out.terms.push_back(std::move(t));
    }
  }
  if (!out.terms.empty() && coeffs_.is_zero(out.terms.back().second)) out.terms.pop_back();
  return out;
}

GRElem GroupRing::add(const GRElem& a, const GRElem& b) const {
  GRElem out;
  std::size_t i = 0, j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    if (j == b.terms.size() || (i < a.terms.size() && group_.less(a.terms[i].first, b.terms[j].first))) {
      out.terms.push_back(a.terms[i++]);
    } else if (i == a.terms.size() || group_.less(b.terms[j].first, a.terms[i].first)) {
      out.terms.push_back(b.terms[j++]);
    } else {
      Scalar s = coeffs_.add(a.terms[i].second, b.terms[j].second);
      if (!coeffs_.is_zero(s)) out.terms.emplace_back(a.terms[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return out;
}

GRElem GroupRing::neg(const GRElem& a) const {
  GRElem out = a;
  for (auto& t : out.terms) t.second = coeffs_.neg(t.second);
  return out;
}

GRElem GroupRing::sub(const GRElem& a, const GRElem& b) const { return add(a, neg(b)); }

GRElem GroupRing::mul(const GRElem& a, const GRElem& b) const {
  if (a.terms.empty() || b.terms.empty()) return {};
  std::vector<std::pair<GroupElement, Scalar>> prod;
  prod.reserve(a.terms.size() * b.terms.size());
  for (const auto& [x, ax] : a.terms) {
    for (const auto& [y, by] : b.terms) prod.emplace_back(group_.mul(x, y), coeffs_.mul(ax, by));
  }
  return normalize(std::move(prod));
}

GRElem GroupRing::scale(const Scalar& s, const GRElem& a) const {
  std::vector<std::pair<GroupElement, Scalar>> terms;
  for (const auto& [x, c] : a.terms) {
    Scalar v = coeffs_.mul(s, c);
    if (!coeffs_.is_zero(v)) terms.emplace_back(x, std::move(v));
  }
  GRElem out;
  out.terms = std::move(terms);
  return out;
}

GRElem GroupRing::shift(const GroupElement& g, const GRElem& a) const {
  std::vector<std::pair<GroupElement, Scalar>> terms;
  for (const auto& [x, c] : a.terms) terms.emplace_back(group_.mul(g, x), c);
  return normalize(std::move(terms));
}

Scalar GroupRing::coefficient(const GRElem& a, const GroupElement& g) const {
  for (const auto& [x, c] : a.terms) {
    if (x == g) return c;
  }
  return coeffs_.zero();
}

Scalar GroupRing::augmentation(const GRElem& a) const {
  Scalar s = coeffs_.zero();
  for (const auto& t : a.terms) s = coeffs_.add(s, t.second);
  return s;
}

bool GroupRing::is_finite() const { return coeffs_.is_finite() && group_.is_finite(); }

std::uint64_t GroupRing::size() const {
  if (!is_finite()) fail(ErrorCode::Unsupported, name() + " is infinite");
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < group_.order(); ++i) {
    if (s > (std::uint64_t{1} << 62) / coeffs_.size()) fail(ErrorCode::Overflow, name() + " is too large to index");
    s *= coeffs_.size();
  }
  return s;
}

GRElem GroupRing::element_at(std::uint64_t index) const {
  const std::uint64_t q = coeffs_.size();
  GRElem out;
  for (const auto& g : group_.elements()) {
    Scalar c = coeffs_.element_at(index % q);
    index /= q;
    if (!coeffs_.is_zero(c)) out.terms.emplace_back(g, std::move(c));
  }
  return out;
}

std::uint64_t GroupRing::index_of(const GRElem& a) const {
  const std::uint64_t q = coeffs_.size();
  std::uint64_t idx = 0, place = 1;
  const auto& elems = group_.elements();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    idx += place * coeffs_.index_of(coefficient(a, elems[i]));
    place *= q;
  }
  return idx;
}

GRElem GroupRing::random(Xorshift64Star& rng, std::size_t max_terms, std::int64_t window,
                         std::int64_t coeff_range) const {
  std::vector<std::pair<GroupElement, Scalar>> terms;
  const std::size_t n = static_cast<std::size_t>(rng.below(max_terms + 1));
  for (std::size_t i = 0; i < n; ++i) {
    terms.emplace_back(group_.random_element(rng, window), coeffs_.random(rng, coeff_range));
  }
  return normalize(std::move(terms));
}

std::string GroupRing::format_monomial(const GroupElement& g) const {
  if (group_.is_identity(g)) return "";
  const auto& spec = group_.spec();
  auto power = [](const std::string& v, std::int64_t k) {
    return k == 1 ? v : v + "^" + std::to_string(k);
  };
  if (spec.kind == GroupSpec::Kind::cyclic) return power(var_, g[0]);
  if (spec.kind == GroupSpec::Kind::free_abelian && spec.n == 1) return power(var_, g[0]);
  if (spec.kind == GroupSpec::Kind::free_abelian && spec.n <= 3) {
    static const char* letters[] = {"x", "y", "z"};
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] == 0) continue;
      if (!s.empty()) s += "*";
      s += power(letters[i], g[i]);
    }
    return s;
  }
  return "[" + group_.format(g) + "]";
}

std::string GroupRing::format(const GRElem& a) const {
  if (a.terms.empty()) return "0";
  std::string out;
  for (const auto& [g, c] : a.terms) {
    std::string m = format_monomial(g);
    std::string cs = coeffs_.format(c);
    std::string t;
    if (m.empty()) {
      t = coeffs_.compound(c) ? "(" + cs + ")" : cs;
    } else if (coeffs_.is_one(c)) {
      t = m;
    } else if (cs == "-1") {
      t = "-" + m;
    } else {
      t = (coeffs_.compound(c) ? "(" + cs + ")" : cs) + "*" + m;
    }
    if (out.empty()) {
      out = t;
    } else if (t[0] == '-') {
      out += " - " + t.substr(1);
    } else {
      out += " + " + t;
    }
  }
  return out;
}

GroupElement GroupRing::parse_monomial_factor(std::string_view text) const {
  text = trim(text);
  std::int64_t exponent = 1;
  std::string_view base = text;
  std::size_t caret = std::string_view::npos;
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '[' || text[i] == '(') ++depth;
    if (text[i] == ']' || text[i] == ')') --depth;
    if (text[i] == '^' && depth == 0) caret = i;
  }
  if (caret != std::string_view::npos) {
    base = trim(text.substr(0, caret));
    exponent = static_cast<std::int64_t>(parse_integer(strip_brackets(text.substr(caret + 1), '(', ')')));
  }
  GroupElement g;
  if (!base.empty() && base.front() == '[') {
    g = group_.parse_element(strip_brackets(base, '[', ']'));
  } else {
    const auto& spec = group_.spec();
    if (spec.kind == GroupSpec::Kind::cyclic || (spec.kind == GroupSpec::Kind::free_abelian && spec.n == 1)) {
      if (base != var_) fail(ErrorCode::ParseError, "unknown generator '" + std::string(base) + "'");
      g = group_.parse_element("1");
    } else if (spec.kind == GroupSpec::Kind::free_abelian && spec.n <= 3) {
      static const std::string letters = "xyz";
      std::size_t k = base.size() == 1 ? letters.find(base[0]) : std::string::npos;
      if (k == std::string::npos || k >= static_cast<std::size_t>(spec.n)) {
        fail(ErrorCode::ParseError, "unknown generator '" + std::string(base) + "'");
      }
      Payload p(static_cast<std::size_t>(spec.n), 0);
      p[k] = 1;
      g = GroupElement(p);
    } else {
      fail(ErrorCode::ParseError, "group elements of " + group_.name() + " must be written [..]");
    }
  }
  return group_.pow(g, exponent);
}

bool GroupRing::names_generator(std::string_view factor) const {
  std::string_view name = trim(factor.substr(0, factor.find('^')));
  const auto& spec = group_.spec();
  if (spec.kind == GroupSpec::Kind::cyclic || (spec.kind == GroupSpec::Kind::free_abelian && spec.n == 1)) {
    return name == var_;
  }
  if (spec.kind == GroupSpec::Kind::free_abelian) {
    return name.size() == 1 && std::string_view("xyz").substr(0, static_cast<std::size_t>(spec.n)).find(name[0]) !=
                                    std::string_view::npos;
  }
  return false;
}

GRElem GroupRing::parse(std::string_view text) const {
  text = trim(text);
  if (text.empty()) fail(ErrorCode::ParseError, "empty group ring element");
  // Split into signed terms at top-level + and - that are not exponent signs.
  std::vector<std::pair<bool, std::string>> terms;
  std::string cur;
  bool negative = false;
  int depth = 0;
  char prev = 0;
  for (char c : text) {
    if (c == '(' || c == '[' || c == '<') ++depth;
    if (c == ')' || c == ']' || c == '>') --depth;
    if ((c == '+' || c == '-') && depth == 0 && prev != '^' && prev != '*' && prev != 0) {
      terms.emplace_back(negative, cur);
      cur.clear();
      negative = c == '-';
      prev = c;
      continue;
    }
    if ((c == '+' || c == '-') && depth == 0 && prev == 0) {
      negative = c == '-';
      prev = c;
      continue;
    }
    cur += c;
    if (!std::isspace(static_cast<unsigned char>(c))) prev = c;
  }
  terms.emplace_back(negative, cur);

  std::vector<std::pair<GroupElement, Scalar>> out;
  for (const auto& [neg_sign, term] : terms) {
    if (trim(term).empty()) fail(ErrorCode::ParseError, "empty term in '" + std::string(text) + "'");
    Scalar coeff = coeffs_.one();
    GroupElement g = group_.identity();
    for (const auto& factor : split_top_level(term, '*')) {
      std::string_view f = trim(factor);
      if (f.empty()) fail(ErrorCode::ParseError, "empty factor in '" + std::string(text) + "'");
      if (std::isdigit(static_cast<unsigned char>(f.front()))) {
        coeff = coeffs_.mul(coeff, coeffs_.from_int(parse_integer(f)));
      } else if (f.front() == '(') {
        coeff = coeffs_.mul(coeff, coeffs_.parse(strip_brackets(f, '(', ')')));
      } else if (f.front() != '[' && coeffs_.kind() == CoeffRing::Kind::field && !names_generator(f)) {
        coeff = coeffs_.mul(coeff, coeffs_.parse(f));
      } else {
        g = group_.mul(g, parse_monomial_factor(f));
      }
    }
    if (neg_sign) coeff = coeffs_.neg(coeff);
    out.emplace_back(g, coeff);
  }
  return normalize(std::move(out));
}

// ---------------------------------------------------------------------------

GRElem pushforward(const GroupHom& h, const GroupRing& source, const GroupRing& target, const GRElem& f) {
  if (!(source.group() == h.source) || !(target.group() == h.target) || !(source.coeffs() == target.coeffs())) {
    fail(ErrorCode::Mismatch, "pushforward: rings do not match the homomorphism");
  }
  std::vector<std::pair<GroupElement, Scalar>> terms;
  for (const auto& [x, c] : f.terms) terms.emplace_back(h(x), c);
  return target.normalize(std::move(terms));
}

GRElem coeff_reduce(const GroupRing& source, const GroupRing& target, const GRElem& f) {
  if (source.coeffs().kind() != CoeffRing::Kind::integers || target.coeffs().kind() != CoeffRing::Kind::z_mod ||
      !(source.group() == target.group())) {
    fail(ErrorCode::Mismatch, "coeff_reduce maps Z[G] to (Z/m)[G]");
  }
  GRElem out;
  for (const auto& [x, c] : f.terms) {
    Scalar r = target.coeffs().from_int(std::get<Integer>(c));
    if (!target.coeffs().is_zero(r)) out.terms.emplace_back(x, r);
  }
  return out;
}

GRElem integer_lift(const GroupRing& source, const GroupRing& target, const GRElem& f) {
  if (source.coeffs().kind() != CoeffRing::Kind::z_mod || target.coeffs().kind() != CoeffRing::Kind::integers ||
      !(source.group() == target.group())) {
    fail(ErrorCode::Mismatch, "integer_lift maps (Z/m)[G] to Z[G]");
  }
  GRElem out;
  for (const auto& [x, c] : f.terms) out.terms.emplace_back(x, Integer(std::get<std::int64_t>(c)));
  return out;
}

GRElem reduce_in_place_mod(const GroupRing& integral, const GRElem& f, const Integer& m) {
  (void)integral;
  GRElem out;
  for (const auto& [x, c] : f.terms) {
    Integer r = mod_floor(std::get<Integer>(c), m);
    if (r != 0) out.terms.emplace_back(x, r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// text descriptors

CoeffRing parse_coeff_ring(std::string_view text) {
  text = trim(text);
  if (text == "Z") return CoeffRing::integers();
  auto number = [&](std::string_view digits) -> std::int64_t {
    if (digits.empty() || digits.size() > 12) fail(ErrorCode::ParseError, "bad coefficient ring '" + std::string(text) + "'");
    std::int64_t v = 0;
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        fail(ErrorCode::ParseError, "bad coefficient ring '" + std::string(text) + "'");
      }
      v = v * 10 + (c - '0');
    }
    return v;
  };
  if (text.rfind("Z/", 0) == 0) {
    const std::int64_t n = number(text.substr(2));
    if (n < 2) fail(ErrorCode::InvalidSpec, "Z/n needs n >= 2");
    return CoeffRing::z_mod(n);
  }
  if (text.rfind("F", 0) == 0 || text.rfind("GF", 0) == 0) {
    const std::int64_t q = number(text.substr(text[0] == 'G' ? 2 : 1));
    for (std::int64_t p = 2; p <= q; ++p) {
      if (!is_prime(p) || q % p != 0) continue;
      std::int64_t r = q;
      int k = 0;
      while (r % p == 0) {
        r /= p;
        ++k;
      }
      if (r != 1) break;
      return CoeffRing::gf(p, k);
    }
    fail(ErrorCode::InvalidSpec, std::string(text) + " is not a prime power field");
  }
  fail(ErrorCode::ParseError, "unknown coefficient ring '" + std::string(text) + "'");
}

GroupRing parse_group_ring(std::string_view text, std::string var) {
  text = trim(text);
  const auto open = text.find('[');
  if (open == std::string_view::npos) return GroupRing(parse_coeff_ring(text), parse_group("1"), std::move(var));
  if (text.back() != ']') fail(ErrorCode::ParseError, "group ring '" + std::string(text) + "' lacks a closing ]");
  return GroupRing(parse_coeff_ring(text.substr(0, open)), parse_group(text.substr(open + 1, text.size() - open - 2)),
                   std::move(var));
}

}  // namespace stabfin
