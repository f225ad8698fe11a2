#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stabfin {

// One value type for every field in a tower. Which members are live depends on
// the owning field:
//   prime      c (residue in [0, p))
//   extension  a = coefficients over the base, low to high, no trailing zeros
//   rational   a = numerator, b = monic denominator, coprime
struct FieldElem {
  std::vector<FieldElem> a;
  std::vector<FieldElem> b;
  std::int64_t c = 0;

  friend bool operator==(const FieldElem& x, const FieldElem& y) {
    return x.c == y.c && x.a == y.a && x.b == y.b;
  }
  friend bool operator<(const FieldElem& x, const FieldElem& y) {
    if (x.c != y.c) return x.c < y.c;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

using Poly = std::vector<FieldElem>;

namespace detail {
struct FieldData;
}

class Field {
 public:
  enum class Kind { prime, extension, rational };

  Field() = default;

  static Field prime(std::int64_t p);
  // Base field extended by a root of `modulus` (monic, irreducible over a finite base).
  static Field extension(const Field& base, Poly modulus, std::string var = "x");
  static Field rational(const Field& base, std::string var = "t");

  Kind kind() const;
  const Field& base() const;
  const Poly& modulus() const;
  const std::string& var() const;
  std::int64_t characteristic() const;
  // Degree of the modulus for extensions, 1 otherwise.
  int degree() const;
  bool is_finite() const;
  // Number of elements; only for finite fields.
  std::uint64_t size() const;
  std::string name() const;

  FieldElem zero() const;
  FieldElem one() const;
  FieldElem from_int(std::int64_t n) const;
  // The adjoined element (x or t). Throws for prime fields.
  FieldElem gen() const;
  // Image of a base-field element under the structural inclusion.
  FieldElem lift(const FieldElem& base_elem) const;

  FieldElem add(const FieldElem& x, const FieldElem& y) const;
  FieldElem sub(const FieldElem& x, const FieldElem& y) const;
  FieldElem neg(const FieldElem& x) const;
  FieldElem mul(const FieldElem& x, const FieldElem& y) const;
  FieldElem inv(const FieldElem& x) const;
  FieldElem div(const FieldElem& x, const FieldElem& y) const;
  FieldElem pow(const FieldElem& x, std::uint64_t e) const;
  bool is_zero(const FieldElem& x) const;
  bool is_one(const FieldElem& x) const;

  // Canonical enumeration of a finite field: coefficient digits form a base-|base|
  // number with the constant coefficient least significant.
  std::uint64_t index_of(const FieldElem& x) const;
  FieldElem element_at(std::uint64_t index) const;

  // Rational-function accessors.
  const Poly& numerator(const FieldElem& x) const;
  const Poly& denominator(const FieldElem& x) const;
  FieldElem fraction(const Poly& num, const Poly& den) const;
  // Extension accessor: coefficient vector padded to degree().
  Poly coefficients(const FieldElem& x) const;
  FieldElem from_coefficients(const Poly& coeffs) const;

  std::string format(const FieldElem& x) const;
  // Arithmetic expression in integers and the tower's variable names.
  FieldElem parse(std::string_view text) const;

  friend bool operator==(const Field& a, const Field& b);

 private:
  std::shared_ptr<const detail::FieldData> d_;
};

// Polynomials over a field, low to high coefficient, no trailing zeros.
namespace poly {
Poly trim(const Field& k, Poly p);
int degree(const Poly& p);
Poly add(const Field& k, const Poly& x, const Poly& y);
Poly sub(const Field& k, const Poly& x, const Poly& y);
Poly mul(const Field& k, const Poly& x, const Poly& y);
Poly scale(const Field& k, const Poly& x, const FieldElem& s);
// Returns {quotient, remainder}; divisor nonzero.
std::pair<Poly, Poly> divmod(const Field& k, const Poly& x, const Poly& y);
Poly monic(const Field& k, const Poly& x);
Poly gcd(const Field& k, Poly x, Poly y);
FieldElem eval(const Field& k, const Poly& p, const FieldElem& at);
// Maps coefficients through f into field `to`.
Poly map(const Field& to, const Poly& p, const std::function<FieldElem(const FieldElem&)>& f);
bool is_monic(const Field& k, const Poly& p);
// Trial division by every monic polynomial of degree <= deg/2. Finite fields only.
bool is_irreducible(const Field& k, const Poly& p);
// All roots in a finite field, in canonical order.
std::vector<FieldElem> roots(const Field& k, const Poly& p);
std::string format(const Field& k, const Poly& p, const std::string& var);
}  // namespace poly

// GF(p^k) with the lexicographically smallest monic irreducible modulus.
Field make_gf(std::int64_t p, int k);
Poly smallest_irreducible(const Field& base, int degree);

// A field homomorphism given by its action on elements.
struct FieldMap {
  Field source;
  Field target;
  std::function<FieldElem(const FieldElem&)> apply;
};

// Embeds a finite field into a larger finite field of the same characteristic by
// sending the generator to the first root of its modulus in canonical order.
// Fails with Unsupported if no root exists.
FieldMap finite_field_embedding(const Field& small, const Field& big);

}  // namespace stabfin
