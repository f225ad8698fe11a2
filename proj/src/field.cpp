#include "stabfin/field.hpp"

#include <cctype>

#include "stabfin/error.hpp"
#include "stabfin/integer.hpp"

namespace stabfin {

namespace detail {

struct FieldData {
  Field::Kind kind = Field::Kind::prime;
  std::int64_t p = 2;
  Field base;
  Poly modulus;
  std::string var;
  bool finite = true;
  std::uint64_t size = 0;
};

}  // namespace detail

namespace {

constexpr std::uint64_t kMaxFiniteSize = std::uint64_t{1} << 40;

}  // namespace

Field Field::prime(std::int64_t p) {
  if (!is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  auto d = std::make_shared<detail::FieldData>();
  d->kind = Kind::prime;
  d->p = p;
  d->size = static_cast<std::uint64_t>(p);
  Field f;
  f.d_ = std::move(d);
  return f;
}

Field Field::extension(const Field& base, Poly modulus, std::string var) {
  modulus = poly::trim(base, std::move(modulus));
  if (poly::degree(modulus) < 1 || !poly::is_monic(base, modulus)) {
    fail(ErrorCode::InvalidSpec, "extension modulus must be monic of degree >= 1");
  }
  if (base.is_finite() && !poly::is_irreducible(base, modulus)) {
    fail(ErrorCode::InvalidSpec, "modulus " + poly::format(base, modulus, var) + " is reducible");
  }
  auto d = std::make_shared<detail::FieldData>();
  d->kind = Kind::extension;
  d->p = base.characteristic();
  d->base = base;
  d->modulus = std::move(modulus);
  d->var = std::move(var);
  d->finite = base.is_finite();
  if (d->finite) {
    std::uint64_t s = 1;
    for (int i = 0; i < poly::degree(d->modulus); ++i) {
      if (s > kMaxFiniteSize / base.size()) fail(ErrorCode::Overflow, "field too large");
      s *= base.size();
    }
    d->size = s;
  }
  Field f;
  f.d_ = std::move(d);
  return f;
}

Field Field::rational(const Field& base, std::string var) {
  auto d = std::make_shared<detail::FieldData>();
  d->kind = Kind::rational;
  d->p = base.characteristic();
  d->base = base;
  d->var = std::move(var);
  d->finite = false;
  Field f;
  f.d_ = std::move(d);
  return f;
}

Field::Kind Field::kind() const { return d_->kind; }
const Field& Field::base() const { return d_->base; }
const Poly& Field::modulus() const { return d_->modulus; }
const std::string& Field::var() const { return d_->var; }
std::int64_t Field::characteristic() const { return d_->p; }
int Field::degree() const { return d_->kind == Kind::extension ? poly::degree(d_->modulus) : 1; }
bool Field::is_finite() const { return d_->finite; }

std::uint64_t Field::size() const {
  if (!d_->finite) fail(ErrorCode::Unsupported, name() + " is infinite");
  return d_->size;
}

std::string Field::name() const {
  switch (d_->kind) {
    case Kind::prime:
      return "F" + std::to_string(d_->p);
    case Kind::extension:
      if (d_->base.kind() == Kind::prime && d_->finite) return "F" + std::to_string(d_->size);
      return d_->base.name() + "[" + d_->var + "]/(" + poly::format(d_->base, d_->modulus, d_->var) + ")";
    case Kind::rational:
      return d_->base.name() + "(" + d_->var + ")";
  }
  return "?";
}

bool operator==(const Field& a, const Field& b) {
  if (a.d_ == b.d_) return true;
  if (!a.d_ || !b.d_) return false;
  if (a.d_->kind != b.d_->kind || a.d_->p != b.d_->p) return false;
  if (a.d_->kind == Field::Kind::prime) return true;
  return a.d_->var == b.d_->var && a.d_->modulus == b.d_->modulus && a.d_->base == b.d_->base;
}

FieldElem Field::zero() const {
  FieldElem z;
  if (d_->kind == Kind::rational) z.b = {d_->base.one()};
  return z;
}

FieldElem Field::one() const { return from_int(1); }

FieldElem Field::from_int(std::int64_t n) const {
  switch (d_->kind) {
    case Kind::prime: {
      FieldElem e;
      e.c = mod_floor(n, d_->p);
      return e;
    }
    case Kind::extension:
      return lift(d_->base.from_int(n));
    case Kind::rational:
      return lift(d_->base.from_int(n));
  }
  return {};
}

FieldElem Field::gen() const {
  if (d_->kind == Kind::prime) fail(ErrorCode::Unsupported, "prime field has no generator");
  if (d_->kind == Kind::extension) {
    if (degree() == 1) {
      // x is a root of x + c, i.e. x = -c.
      return lift(d_->base.neg(d_->modulus[0]));
    }
    return from_coefficients({d_->base.zero(), d_->base.one()});
  }
  return fraction({d_->base.zero(), d_->base.one()}, {d_->base.one()});
}

FieldElem Field::lift(const FieldElem& base_elem) const {
  if (d_->kind == Kind::prime) return base_elem;
  if (d_->kind == Kind::extension) return from_coefficients({base_elem});
  return fraction({base_elem}, {d_->base.one()});
}

FieldElem Field::from_coefficients(const Poly& coeffs) const {
  if (d_->kind != Kind::extension) fail(ErrorCode::Unsupported, "not an extension field");
  Poly r = poly::trim(d_->base, coeffs);
  if (poly::degree(r) >= degree()) r = poly::divmod(d_->base, r, d_->modulus).second;
  FieldElem e;
  e.a = std::move(r);
  return e;
}

Poly Field::coefficients(const FieldElem& x) const {
  Poly c = x.a;
  c.resize(static_cast<std::size_t>(degree()), d_->base.zero());
  return c;
}

FieldElem Field::fraction(const Poly& num, const Poly& den) const {
  if (d_->kind != Kind::rational) fail(ErrorCode::Unsupported, "not a rational function field");
  const Field& k = d_->base;
  Poly n = poly::trim(k, num);
  Poly q = poly::trim(k, den);
  if (q.empty()) fail(ErrorCode::NotAUnit, "zero denominator");
  FieldElem e;
  if (n.empty()) {
    e.b = {k.one()};
    return e;
  }
  Poly g = poly::gcd(k, n, q);
  n = poly::divmod(k, n, g).first;
  q = poly::divmod(k, q, g).first;
  FieldElem lead_inv = k.inv(q.back());
  e.a = poly::scale(k, n, lead_inv);
  e.b = poly::scale(k, q, lead_inv);
  return e;
}

const Poly& Field::numerator(const FieldElem& x) const { return x.a; }
const Poly& Field::denominator(const FieldElem& x) const { return x.b; }

FieldElem Field::add(const FieldElem& x, const FieldElem& y) const {
  switch (d_->kind) {
    case Kind::prime: {
      FieldElem e;
      e.c = (x.c + y.c) % d_->p;
      return e;
    }
    case Kind::extension: {
      FieldElem e;
      e.a = poly::add(d_->base, x.a, y.a);
      return e;
    }
    case Kind::rational: {
      const Field& k = d_->base;
      if (x.b == y.b) return fraction(poly::add(k, x.a, y.a), x.b);
      return fraction(poly::add(k, poly::mul(k, x.a, y.b), poly::mul(k, y.a, x.b)), poly::mul(k, x.b, y.b));
    }
  }
  return {};
}

FieldElem Field::neg(const FieldElem& x) const {
  switch (d_->kind) {
    case Kind::prime: {
      FieldElem e;
      e.c = (d_->p - x.c) % d_->p;
      return e;
    }
    case Kind::extension: {
      FieldElem e;
      for (const auto& c : x.a) e.a.push_back(d_->base.neg(c));
      return e;
    }
    case Kind::rational: {
      FieldElem e = x;
      for (auto& c : e.a) c = d_->base.neg(c);
      return e;
    }
  }
  return {};
}

FieldElem Field::sub(const FieldElem& x, const FieldElem& y) const { return add(x, neg(y)); }

FieldElem Field::mul(const FieldElem& x, const FieldElem& y) const {
  switch (d_->kind) {
    case Kind::prime: {
      FieldElem e;
      e.c = mul_mod(x.c, y.c, d_->p);
      return e;
    }
    case Kind::extension:
      return from_coefficients(poly::mul(d_->base, x.a, y.a));
    case Kind::rational: {
      const Field& k = d_->base;
      return fraction(poly::mul(k, x.a, y.a), poly::mul(k, x.b, y.b));
    }
  }
  return {};
}

FieldElem Field::inv(const FieldElem& x) const {
  if (is_zero(x)) fail(ErrorCode::NotAUnit, "zero has no inverse in " + name());
  switch (d_->kind) {
    case Kind::prime: {
      FieldElem e;
      e.c = inverse_mod(x.c, d_->p);
      return e;
    }
    case Kind::extension: {
      // Extended Euclid: track s with s*x = r (mod modulus).
      const Field& k = d_->base;
      Poly r0 = d_->modulus, r1 = x.a;
      Poly s0, s1 = {k.one()};
      while (!r1.empty()) {
        auto [q, r] = poly::divmod(k, r0, r1);
        Poly s = poly::sub(k, s0, poly::mul(k, q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
      }
      if (poly::degree(r0) != 0) fail(ErrorCode::NotAUnit, "modulus is not irreducible");
      return from_coefficients(poly::scale(k, s0, k.inv(r0[0])));
    }
    case Kind::rational:
      return fraction(x.b, x.a);
  }
  return {};
}

FieldElem Field::div(const FieldElem& x, const FieldElem& y) const { return mul(x, inv(y)); }

FieldElem Field::pow(const FieldElem& x, std::uint64_t e) const {
  FieldElem r = one(), b = x;
  while (e) {
    if (e & 1) r = mul(r, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return r;
}

bool Field::is_zero(const FieldElem& x) const {
  return d_->kind == Kind::prime ? x.c == 0 : x.a.empty();
}

bool Field::is_one(const FieldElem& x) const { return x == one(); }

std::uint64_t Field::index_of(const FieldElem& x) const {
  if (!d_->finite) fail(ErrorCode::Unsupported, name() + " is infinite");
  if (d_->kind == Kind::prime) return static_cast<std::uint64_t>(x.c);
  std::uint64_t idx = 0;
  const std::uint64_t q = d_->base.size();
  for (std::size_t i = x.a.size(); i-- > 0;) idx = idx * q + d_->base.index_of(x.a[i]);
  return idx;
}

FieldElem Field::element_at(std::uint64_t index) const {
  if (!d_->finite) fail(ErrorCode::Unsupported, name() + " is infinite");
  if (index >= d_->size) fail(ErrorCode::Mismatch, "element index out of range");
  if (d_->kind == Kind::prime) {
    FieldElem e;
    e.c = static_cast<std::int64_t>(index);
    return e;
  }
  const std::uint64_t q = d_->base.size();
  Poly coeffs;
  for (int i = 0; i < degree(); ++i) {
    coeffs.push_back(d_->base.element_at(index % q));
    index /= q;
  }
  return from_coefficients(coeffs);
}

namespace {

bool needs_parens(const Field& k, const FieldElem& c) {
  if (k.kind() == Field::Kind::prime) return false;
  if (k.kind() == Field::Kind::rational) return true;
  int terms = 0;
  for (const auto& x : c.a) {
    if (!k.base().is_zero(x)) ++terms;
  }
  return terms > 1 || (terms == 1 && needs_parens(k.base(), c.a[static_cast<std::size_t>(poly::degree(c.a))]));
}

}  // namespace

std::string Field::format(const FieldElem& x) const {
  switch (d_->kind) {
    case Kind::prime:
      return std::to_string(x.c);
    case Kind::extension:
      return poly::format(d_->base, x.a, d_->var);
    case Kind::rational: {
      std::string num = poly::format(d_->base, x.a, d_->var);
      if (x.b.size() == 1) return num;
      std::string den = poly::format(d_->base, x.b, d_->var);
      auto wrap = [](const std::string& s) {
        return s.find_first_of("+-") != std::string::npos ? "(" + s + ")" : s;
      };
      return wrap(num) + "/" + wrap(den);
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

class ExprParser {
 public:
  ExprParser(const Field& f, std::string_view text) : f_(f), s_(text) {}

  FieldElem run() {
    FieldElem v = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& what) {
    fail(ErrorCode::ParseError, what + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  FieldElem expr() {
    FieldElem v = term();
    for (;;) {
      if (eat('+')) {
        v = f_.add(v, term());
      } else if (eat('-')) {
        v = f_.sub(v, term());
      } else {
        return v;
      }
    }
  }
  FieldElem term() {
    FieldElem v = unary();
    for (;;) {
      if (eat('*')) {
        v = f_.mul(v, unary());
      } else if (eat('/')) {
        v = f_.div(v, unary());
      } else {
        return v;
      }
    }
  }
  FieldElem unary() {
    if (eat('-')) return f_.neg(unary());
    return power();
  }
  FieldElem power() {
    FieldElem v = atom();
    if (eat('^')) {
      bool negative = eat('-');
      skip();
      std::uint64_t e = 0;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("expected exponent");
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        e = e * 10 + static_cast<std::uint64_t>(s_[pos_++] - '0');
      }
      v = f_.pow(v, e);
      if (negative) v = f_.inv(v);
    }
    return v;
  }
  FieldElem atom() {
    skip();
    if (eat('(')) {
      FieldElem v = expr();
      if (!eat(')')) error("expected ')'");
      return v;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::int64_t n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        n = (n * 10 + (s_[pos_++] - '0')) % f_.characteristic();
      }
      return f_.from_int(n);
    }
    std::string name;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      name += s_[pos_++];
    }
    if (name.empty()) error("expected a value");
    return variable(name);
  }
  FieldElem variable(const std::string& name) {
    std::vector<Field> chain{f_};
    while (chain.back().kind() != Field::Kind::prime) chain.push_back(chain.back().base());
    for (std::size_t level = 0; level + 1 < chain.size(); ++level) {
      if (chain[level].var() != name) continue;
      FieldElem v = chain[level].gen();
      for (std::size_t up = level; up-- > 0;) v = chain[up].lift(v);
      return v;
    }
    error("unknown variable '" + name + "'");
  }

  const Field& f_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

FieldElem Field::parse(std::string_view text) const { return ExprParser(*this, text).run(); }

// ---------------------------------------------------------------------------
// Polynomials

namespace poly {

Poly trim(const Field& k, Poly p) {
  while (!p.empty() && k.is_zero(p.back())) p.pop_back();
  return p;
}

int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Poly add(const Field& k, const Poly& x, const Poly& y) {
  Poly r(std::max(x.size(), y.size()), k.zero());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i];
  for (std::size_t i = 0; i < y.size(); ++i) r[i] = k.add(r[i], y[i]);
  return trim(k, std::move(r));
}

Poly sub(const Field& k, const Poly& x, const Poly& y) {
  Poly r(std::max(x.size(), y.size()), k.zero());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i];
  for (std::size_t i = 0; i < y.size(); ++i) r[i] = k.sub(r[i], y[i]);
  return trim(k, std::move(r));
}

Poly mul(const Field& k, const Poly& x, const Poly& y) {
  if (x.empty() || y.empty()) return {};
  Poly r(x.size() + y.size() - 1, k.zero());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (k.is_zero(x[i])) continue;
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(x[i], y[j]));
  }
  return trim(k, std::move(r));
}

Poly scale(const Field& k, const Poly& x, const FieldElem& s) {
  Poly r;
  for (const auto& c : x) r.push_back(k.mul(c, s));
  return trim(k, std::move(r));
}

std::pair<Poly, Poly> divmod(const Field& k, const Poly& x, const Poly& y) {
  if (y.empty()) fail(ErrorCode::NotAUnit, "polynomial division by zero");
  Poly r = x;
  const int dy = degree(y);
  if (degree(r) < dy) return {{}, r};
  Poly q(static_cast<std::size_t>(degree(r) - dy + 1), k.zero());
  const FieldElem lead_inv = k.inv(y.back());
  while (!r.empty() && degree(r) >= dy) {
    const std::size_t shift = static_cast<std::size_t>(degree(r) - dy);
    FieldElem c = k.mul(r.back(), lead_inv);
    q[shift] = c;
    for (std::size_t i = 0; i < y.size(); ++i) r[shift + i] = k.sub(r[shift + i], k.mul(c, y[i]));
    r = trim(k, std::move(r));
  }
  return {trim(k, std::move(q)), r};
}

Poly monic(const Field& k, const Poly& x) {
  if (x.empty()) return x;
  return scale(k, x, k.inv(x.back()));
}

Poly gcd(const Field& k, Poly x, Poly y) {
  x = trim(k, std::move(x));
  y = trim(k, std::move(y));
  while (!y.empty()) {
    Poly r = divmod(k, x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return monic(k, x);
}

FieldElem eval(const Field& k, const Poly& p, const FieldElem& at) {
  FieldElem r = k.zero();
  for (std::size_t i = p.size(); i-- > 0;) r = k.add(k.mul(r, at), p[i]);
  return r;
}

Poly map(const Field& to, const Poly& p, const std::function<FieldElem(const FieldElem&)>& f) {
  Poly r;
  for (const auto& c : p) r.push_back(f(c));
  return trim(to, std::move(r));
}

bool is_monic(const Field& k, const Poly& p) { return !p.empty() && k.is_one(p.back()); }

bool is_irreducible(const Field& k, const Poly& p) {
  const int n = degree(p);
  if (n < 1) return false;
  if (n == 1) return true;
  const std::uint64_t q = k.size();
  for (int d = 1; d <= n / 2; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= q;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly divisor;
      std::uint64_t rest = idx;
      for (int i = 0; i < d; ++i) {
        divisor.push_back(k.element_at(rest % q));
        rest /= q;
      }
      divisor.push_back(k.one());
      if (divmod(k, p, divisor).second.empty()) return false;
    }
  }
  return true;
}

std::vector<FieldElem> roots(const Field& k, const Poly& p) {
  std::vector<FieldElem> out;
  for (std::uint64_t i = 0; i < k.size(); ++i) {
    FieldElem x = k.element_at(i);
    if (k.is_zero(eval(k, p, x))) out.push_back(x);
  }
  return out;
}

std::string format(const Field& k, const Poly& p, const std::string& var) {
  if (p.empty()) return "0";
  std::string s;
  for (std::size_t i = p.size(); i-- > 0;) {
    const FieldElem& c = p[i];
    if (k.is_zero(c)) continue;
    std::string coeff = k.format(c);
    if (!s.empty()) s += "+";
    if (i == 0) {
      s += needs_parens(k, c) ? "(" + coeff + ")" : coeff;
      continue;
    }
    if (!k.is_one(c)) s += (needs_parens(k, c) ? "(" + coeff + ")" : coeff) + "*";
    s += var;
    if (i > 1) s += "^" + std::to_string(i);
  }
  return s;
}

}  // namespace poly

Poly smallest_irreducible(const Field& base, int degree) {
  if (degree < 1) fail(ErrorCode::InvalidSpec, "degree must be >= 1");
  const std::uint64_t q = base.size();
  std::uint64_t count = 1;
  for (int i = 0; i < degree; ++i) count *= q;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly candidate;
    std::uint64_t rest = idx;
    for (int i = 0; i < degree; ++i) {
      candidate.push_back(base.element_at(rest % q));
      rest /= q;
    }
    candidate.push_back(base.one());
    if (poly::is_irreducible(base, candidate)) return candidate;
  }
  fail(ErrorCode::InvalidSpec, "no irreducible polynomial found");
}

Field make_gf(std::int64_t p, int k) {
  if (!is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (k < 1) fail(ErrorCode::InvalidSpec, "extension degree must be >= 1");
  Field fp = Field::prime(p);
  return Field::extension(fp, smallest_irreducible(fp, k), "x");
}

FieldMap finite_field_embedding(const Field& small, const Field& big) {
  if (small.characteristic() != big.characteristic()) {
    fail(ErrorCode::Unsupported, "fields of different characteristic");
  }
  if (small.kind() == Field::Kind::prime) {
    return {small, big, [big](const FieldElem& x) { return big.from_int(x.c); }};
  }
  if (small.kind() != Field::Kind::extension || !small.is_finite() || !big.is_finite()) {
    fail(ErrorCode::Unsupported, "finite field embedding needs finite fields");
  }
  FieldMap base_map = finite_field_embedding(small.base(), big);
  Poly image_modulus = poly::map(big, small.modulus(), base_map.apply);
  auto rts = poly::roots(big, image_modulus);
  if (rts.empty()) fail(ErrorCode::Unsupported, small.name() + " does not embed in " + big.name());
  FieldElem r = rts.front();
  auto inner = base_map.apply;
  return {small, big, [big, r, inner](const FieldElem& x) {
            FieldElem acc = big.zero();
            for (std::size_t i = x.a.size(); i-- > 0;) acc = big.add(big.mul(acc, r), inner(x.a[i]));
            return acc;
          }};
}

}  // namespace stabfin
