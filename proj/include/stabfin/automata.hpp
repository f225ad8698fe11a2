#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stabfin/groups.hpp"
#include "stabfin/matrices.hpp"

namespace stabfin {

using IntMat = std::vector<std::vector<std::int64_t>>;

// A = sum over components of (Z/p^e)^d, primes ascending, exponents ascending within a prime.
struct Alphabet {
  struct Component {
    std::int64_t p = 2;
    int e = 1;
    std::size_t d = 1;
  };
  std::vector<Component> components;

  // "F2", "F3^2", "Z/4", "Z/6", "Z/2+Z/4" ('x' also separates summands).
  static Alphabet parse(std::string_view text);
  static Alphabet vector_space(std::int64_t p, std::size_t d);

  std::size_t generators() const;
  // Per generator: modulus p^e, prime and exponent.
  std::vector<std::int64_t> moduli() const;
  std::vector<std::int64_t> primes() const;
  std::vector<int> exponents() const;
  std::uint64_t size() const;
  bool is_vector_space() const;
  std::string to_string() const;
  Payload element_at(std::uint64_t index) const;
  std::uint64_t index_of(const Payload& a) const;
};

struct AdditiveCA {
  Group group;
  Alphabet alphabet;
  // (s, M_s), sorted by the group's order, with M_s acting on column vectors of generator coordinates.
  std::vector<std::pair<GroupElement, IntMat>> memory;
};

// Validates dimensions and well-definedness of every M_s, reduces entries, merges nothing:
// repeated memory points are an error.
AdditiveCA make_ca(const Group& g, const Alphabet& a, std::vector<std::pair<GroupElement, IntMat>> memory);
// "[(0,[1]),(1,[1])]"; the matrix may be written k, [k] (one generator) or [[..],..].
AdditiveCA parse_ca(const Group& g, const Alphabet& a, std::string_view memory);
std::string format_memory(const AdditiveCA& ca);

// Values over group.elements() order.
using Configuration = std::vector<Payload>;

Configuration apply_ca(const AdditiveCA& ca, const Configuration& c);
// (g.c)(x) = c(g^-1 x).
Configuration translate(const Group& g, const GroupElement& by, const Configuration& c);
// Exact image of a finitely supported configuration on any group (zero outside the support).
std::map<GroupElement, Payload> apply_ca_finite_support(const AdditiveCA& ca,
                                                        const std::map<GroupElement, Payload>& c);

std::uint64_t configuration_count(const AdditiveCA& ca);
Configuration configuration_at(const AdditiveCA& ca, std::uint64_t index);
std::uint64_t configuration_index(const AdditiveCA& ca, const Configuration& c);

struct KernelImage {
  std::uint64_t kernel_order = 0;
  std::uint64_t image_order = 0;
  std::uint64_t total = 0;
  bool injective = false;
  bool surjective = false;
  bool brute_force = false;
};

KernelImage ca_kernel_image(const AdditiveCA& ca, std::uint64_t budget = 1u << 20);

AdditiveCA ca_from_matrix(const MatrixRing& ring, const RingMatrix& y);
RingMatrix matrix_from_ca(const MatrixRing& ring, const AdditiveCA& ca);

struct ComponentDecomposition {
  std::int64_t p = 0;
  AdditiveCA component;
  AdditiveCA restriction;                // on Q = p-torsion, a linear CA over F_p
  std::optional<AdditiveCA> quotient;    // on A_p / Q; absent when A_p = Q
  KernelImage component_ki;
  KernelImage restriction_ki;
  std::optional<KernelImage> quotient_ki;
  bool restriction_consistent = true;    // tau on Q-valued configurations agrees with the restriction
  bool inheritance_holds = true;         // component injective => restriction and quotient injective
};

struct Decomposition {
  KernelImage whole;
  std::vector<ComponentDecomposition> parts;
  bool kernel_product_holds = false;
};

Decomposition decompose_ca(const AdditiveCA& ca, std::uint64_t budget = 1u << 20);

struct CARecord {
  std::string memory;
  bool injective = false;
  bool surjective = false;
  std::uint64_t kernel_order = 0;
  std::optional<bool> unit;  // vector-space alphabets only
};

struct SurjunctivityReport {
  std::string group;
  std::string alphabet;
  std::uint64_t endomorphisms = 0;  // |End(A)|
  std::uint64_t space = 0;          // |End(A)|^|G|
  std::uint64_t scanned = 0;
  bool exhaustive = false;
  std::uint64_t bijective = 0;
  std::uint64_t violations = 0;      // injective but not surjective, or the converse
  std::uint64_t csc_mismatches = 0;  // bijective != unit matrix
  std::vector<CARecord> records;
};

// Memory is the whole group; every map s -> M_s in End(A) when the count fits the budget,
// otherwise `budget` random ones.
SurjunctivityReport surjunctivity_report(const Group& g, const Alphabet& a, std::uint64_t budget = 1u << 16,
                                         std::uint64_t seed = 1, bool keep_records = true);

}  // namespace stabfin
