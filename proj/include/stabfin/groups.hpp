#pragma once

#include <boost/container/small_vector.hpp>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stabfin/rng.hpp"

namespace stabfin {

using Payload = boost::container::small_vector<std::int64_t, 4>;

/// Canonical group element. Equality is equality of payloads; the payload layout
/// is fixed by the owning group (residue, integer vector, one-line permutation,
/// table index, concatenated tuple or coset representative).
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(Payload payload) : payload_(std::move(payload)) {}
  GroupElement(std::initializer_list<std::int64_t> values) : payload_(values) {}

  const Payload& payload() const noexcept { return payload_; }
  std::int64_t operator[](std::size_t i) const { return payload_[i]; }
  std::size_t size() const noexcept { return payload_.size(); }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.payload_ == b.payload_;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    return a.payload_ < b.payload_;
  }

 private:
  Payload payload_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& e) const noexcept;
};

/// Declarative description of a catalogue group.
struct GroupSpec {
  enum class Kind { cyclic, free_abelian, permutation, table, product, central_quotient };

  Kind kind = Kind::cyclic;
  // cyclic: order (0 = infinite cyclic); free_abelian: rank; permutation: degree.
  std::int64_t n = 1;
  // permutation generators as 0-based one-line images.
  std::vector<std::vector<int>> generators;
  // table[i][j] = index of element i * element j.
  std::vector<std::vector<int>> table;
  // product factors, or the single parent of a central quotient.
  std::vector<GroupSpec> factors;
  // central quotient: the central element, as a parent payload.
  Payload central;

  static GroupSpec cyclic(std::int64_t order);
  static GroupSpec integers() { return cyclic(0); }
  static GroupSpec free_abelian(std::int64_t rank);
  static GroupSpec permutation(std::int64_t degree, std::vector<std::vector<int>> generators);
  static GroupSpec symmetric(int degree);
  static GroupSpec dihedral(int order);
  static GroupSpec from_table(std::vector<std::vector<int>> table);
  static GroupSpec product(std::vector<GroupSpec> factors);
  static GroupSpec central_quotient(GroupSpec parent, Payload central);
  static GroupSpec trivial() { return cyclic(1); }

  /// Text form accepted by parse_group_spec.
  std::string to_string() const;
};

namespace detail {
class GroupImpl;
struct GroupData;
}  // namespace detail

/// Shared, immutable handle to a constructed group.
class Group {
 public:
  static constexpr std::size_t kDefaultOrderCap = 4096;

  Group() = default;

  const GroupSpec& spec() const;
  std::string name() const;

  GroupElement identity() const;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const;
  GroupElement inv(const GroupElement& a) const;
  GroupElement pow(const GroupElement& a, std::int64_t k) const;
  GroupElement commutator(const GroupElement& a, const GroupElement& b) const;
  bool is_identity(const GroupElement& a) const { return a == identity(); }

  bool is_finite() const;
  /// Order of a finite group; throws InfiniteGroup otherwise.
  std::size_t order() const;
  /// Identity first, then lexicographic on payload. Throws InfiniteGroup.
  const std::vector<GroupElement>& elements() const;
  /// Position in elements(); throws Mismatch if not a member.
  std::size_t index_of(const GroupElement& e) const;
  /// Canonical comparison consistent with elements() (identity first, then lexicographic).
  bool less(const GroupElement& a, const GroupElement& b) const;

  /// Order of an element; nullopt for elements of infinite order.
  std::optional<std::int64_t> element_order(const GroupElement& a) const;
  bool is_abelian() const;

  /// Number of int64 slots in a payload.
  std::size_t width() const;
  /// Rank for free abelian / infinite cyclic groups (0 for finite groups).
  std::size_t free_rank() const;

  std::string format(const GroupElement& e) const;
  GroupElement parse_element(std::string_view text) const;

  /// Uniform element for finite groups; coordinates in [-window, window] otherwise.
  GroupElement random_element(Xorshift64Star& rng, std::int64_t window = 3) const;

  /// Product factors (empty unless the group is a product).
  const std::vector<Group>& factors() const;

  friend bool operator==(const Group& a, const Group& b);

 private:
  friend Group make_group(const GroupSpec& spec, std::size_t order_cap);
  std::shared_ptr<const detail::GroupData> data_;
};

/// Builds a group from its spec, validating table axioms, permutation closure
/// within the order cap, and centrality of quotient elements.
Group make_group(const GroupSpec& spec, std::size_t order_cap = Group::kDefaultOrderCap);

/// Parses `C2`, `Z`, `Z^2`, `S3`, `D8`, `C2xC4`, `perm:[(1 2),(1 2 3)]`,
/// `quot(C4,2)`, `1`. See docs/formats.md.
GroupSpec parse_group_spec(std::string_view text);
Group parse_group(std::string_view text);

/// Enumerate a finite group: identity first, then lexicographic on payload.
std::vector<GroupElement> enumerate(const Group& g);

/// Exact centre by exhaustive commutation. Throws InfiniteGroup.
std::vector<GroupElement> centre(const Group& g);

/// Subgroup generated by the given elements of a finite group, as sorted indices.
std::vector<std::size_t> subgroup_closure(const Group& g, const std::vector<GroupElement>& generators);

/// A group homomorphism given by a computable rule.
struct GroupHom {
  Group source;
  Group target;
  std::function<GroupElement(const GroupElement&)> rule;
  std::string label;

  GroupElement operator()(const GroupElement& x) const { return rule(x); }
};

GroupHom identity_hom(const Group& g);
/// outer ∘ inner.
GroupHom compose(const GroupHom& outer, const GroupHom& inner);
/// x ↦ x mod n from a cyclic group (finite or infinite) onto C_n; requires n | order.
GroupHom reduction_hom(const Group& source, const Group& target);
/// x ↦ k·x on an abelian cyclic / free abelian group (written additively).
GroupHom scaling_hom(const Group& g, std::int64_t k);
GroupHom projection_hom(const Group& product, std::size_t factor);
GroupHom trivial_hom(const Group& source, const Group& target);
/// Parent → central quotient.
GroupHom quotient_hom(const Group& parent, const Group& quotient);

/// Homomorphism law: exhaustive when the source is finite with order <= exhaustive_cap,
/// otherwise `samples` random pairs drawn with the given seed.
bool verify_hom(const GroupHom& h, std::uint64_t seed = 1, std::size_t samples = 1000,
                std::size_t exhaustive_cap = 64);

bool is_surjective(const GroupHom& h);
bool is_injective(const GroupHom& h);
std::vector<GroupElement> hom_kernel(const GroupHom& h);

struct Abelianization {
  Group group;
  GroupHom projection;
};

/// Quotient by the commutator subgroup, with the projection. Cyclic, free abelian
/// and finite abelian groups map to themselves by the identity.
Abelianization abelianization(const Group& g);

}  // namespace stabfin
