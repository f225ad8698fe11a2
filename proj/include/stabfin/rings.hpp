#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "stabfin/field.hpp"
#include "stabfin/groups.hpp"
#include "stabfin/integer.hpp"
#include "stabfin/rng.hpp"

namespace stabfin {

// int64 residue for Z/n and prime fields, Integer for Z, FieldElem otherwise.
using Scalar = std::variant<std::int64_t, Integer, FieldElem>;

class CoeffRing {
 public:
  enum class Kind { integers, z_mod, field };

  CoeffRing() = default;

  static CoeffRing integers();
  static CoeffRing z_mod(std::int64_t n);
  // GF(p^k); k = 1 uses residue arithmetic but keeps the field descriptor.
  static CoeffRing gf(std::int64_t p, int k = 1);
  static CoeffRing rat_fun(const CoeffRing& base, std::string var = "t");
  static CoeffRing of_field(const Field& f);

  Kind kind() const { return kind_; }
  // n for z_mod (p for prime fields); 0 for the integers.
  std::int64_t modulus() const { return n_; }
  bool is_field() const { return kind_ == Kind::field || prime_; }
  bool is_prime_field() const { return prime_; }
  const Field& field() const;
  std::int64_t characteristic() const;
  bool is_finite() const;
  std::uint64_t size() const;
  std::string name() const;

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(const Integer& v) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  // Two-sided inverse; NotAUnit otherwise.
  Scalar inv(const Scalar& a) const;
  bool is_unit(const Scalar& a) const;
  bool is_zero(const Scalar& a) const;
  bool is_one(const Scalar& a) const;

  // Canonical enumeration of a finite ring.
  std::uint64_t index_of(const Scalar& a) const;
  Scalar element_at(std::uint64_t index) const;

  // Integer value of an integers/z_mod scalar (the residue in [0, n) for z_mod).
  Integer to_integer(const Scalar& a) const;
  // As an element of field(); prime fields and field kinds only.
  FieldElem to_field(const Scalar& a) const;
  Scalar from_field(const FieldElem& a) const;

  // Nonzero-biased random scalar; integers drawn from [-range, range].
  Scalar random(Xorshift64Star& rng, std::int64_t range = 3) const;

  std::string format(const Scalar& a) const;
  Scalar parse(std::string_view text) const;
  // True when format(a) needs parentheses before a '*'.
  bool compound(const Scalar& a) const;

  friend bool operator==(const CoeffRing& a, const CoeffRing& b);

 private:
  Kind kind_ = Kind::integers;
  std::int64_t n_ = 0;
  bool prime_ = false;
  Field field_;
};

// Finitely supported map G -> R, sorted by the group's canonical order, no zero coefficients.
struct GRElem {
  std::vector<std::pair<GroupElement, Scalar>> terms;
  friend bool operator==(const GRElem& a, const GRElem& b) { return a.terms == b.terms; }
};

class GroupRing {
 public:
  GroupRing() = default;
  // `var` names the generator of a cyclic group in text form ("g", "s", "x").
  GroupRing(CoeffRing coeffs, Group group, std::string var = "");

  const CoeffRing& coeffs() const { return coeffs_; }
  const Group& group() const { return group_; }
  const std::string& var() const { return var_; }
  std::string name() const;

  GRElem zero() const { return {}; }
  GRElem one() const;
  GRElem scalar(const Scalar& s) const;
  GRElem monomial(const Scalar& s, const GroupElement& g) const;
  GRElem from_int(const Integer& v) const { return scalar(coeffs_.from_int(v)); }
  // Sorts, merges duplicate group elements and strips zeros.
  GRElem normalize(std::vector<std::pair<GroupElement, Scalar>> terms) const;

  GRElem add(const GRElem& a, const GRElem& b) const;
  GRElem sub(const GRElem& a, const GRElem& b) const;
  GRElem neg(const GRElem& a) const;
  GRElem mul(const GRElem& a, const GRElem& b) const;
  GRElem scale(const Scalar& s, const GRElem& a) const;
  // Left multiplication by a group element: (g·a)(x) = a(g^-1 x).
  GRElem shift(const GroupElement& g, const GRElem& a) const;
  bool is_zero(const GRElem& a) const { return a.terms.empty(); }
  bool is_one(const GRElem& a) const { return a == one(); }

  Scalar coefficient(const GRElem& a, const GroupElement& g) const;
  Scalar augmentation(const GRElem& a) const;

  bool is_finite() const;
  std::uint64_t size() const;
  // Canonical enumeration of a finite group ring: coefficients of group.elements()
  // in order, the identity coefficient least significant.
  GRElem element_at(std::uint64_t index) const;
  std::uint64_t index_of(const GRElem& a) const;

  // Support points drawn by group.random_element(window), up to max_terms of them.
  GRElem random(Xorshift64Star& rng, std::size_t max_terms = 3, std::int64_t window = 3,
                std::int64_t coeff_range = 3) const;

  std::string format(const GRElem& a) const;
  GRElem parse(std::string_view text) const;

  friend bool operator==(const GroupRing& a, const GroupRing& b) {
    return a.coeffs_ == b.coeffs_ && a.group_ == b.group_;
  }

 private:
  std::string format_monomial(const GroupElement& g) const;
  GroupElement parse_monomial_factor(std::string_view text) const;
  bool names_generator(std::string_view factor) const;

  CoeffRing coeffs_;
  Group group_;
  std::string var_;
};

// Pushforward along h: (h_* f)(x) = sum of f(y) over y with h(y) = x.
GRElem pushforward(const GroupHom& h, const GroupRing& source, const GroupRing& target, const GRElem& f);

// Coefficientwise reduction from an integer group ring into Z/m over the same group.
GRElem coeff_reduce(const GroupRing& source, const GroupRing& target, const GRElem& f);

// Coefficientwise lift of a Z/n (or prime field) group ring into Z, representatives in [0, n).
GRElem integer_lift(const GroupRing& source, const GroupRing& target, const GRElem& f);

// Reduces every coefficient of an integer group-ring element into [0, m).
GRElem reduce_in_place_mod(const GroupRing& integral, const GRElem& f, const Integer& m);

// "Z", "Z/4", "F2", "F4" (GF(4)), "F3".
CoeffRing parse_coeff_ring(std::string_view text);
// "F2[C2]", "Z/4[C2xC2]", "Z[Z]"; a bare coefficient ring means the trivial group.
GroupRing parse_group_ring(std::string_view text, std::string var = "");

}  // namespace stabfin
