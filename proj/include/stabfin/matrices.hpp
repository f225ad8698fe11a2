#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stabfin/rings.hpp"

namespace stabfin {

struct BlockShape {
  std::vector<std::size_t> parts;

  std::size_t total() const;
  std::size_t max_part() const;
  // Block index of every row/column.
  std::vector<std::size_t> block_of() const;
  static BlockShape ones(std::size_t d);
  static BlockShape single(std::size_t d) { return BlockShape{{d}}; }
  // "(1,2)" or "1,2".
  static BlockShape parse(std::string_view text);
  std::string to_string() const;
};

struct RingMatrix {
  std::size_t dim = 0;
  std::vector<GRElem> entries;

  const GRElem& at(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
  GRElem& at(std::size_t i, std::size_t j) { return entries[i * dim + j]; }
  friend bool operator==(const RingMatrix& a, const RingMatrix& b) {
    return a.dim == b.dim && a.entries == b.entries;
  }
};

// M_d(R) for a group ring R (a plain coefficient ring is R[1]).
class MatrixRing {
 public:
  MatrixRing() = default;
  MatrixRing(GroupRing base, std::size_t dim);

  const GroupRing& base() const { return base_; }
  std::size_t dim() const { return dim_; }
  std::string name() const;

  RingMatrix zero() const;
  RingMatrix identity() const;
  RingMatrix scalar(const GRElem& s) const;
  RingMatrix from_rows(const std::vector<std::vector<GRElem>>& rows) const;

  RingMatrix add(const RingMatrix& a, const RingMatrix& b) const;
  RingMatrix sub(const RingMatrix& a, const RingMatrix& b) const;
  RingMatrix neg(const RingMatrix& a) const;
  RingMatrix mul(const RingMatrix& a, const RingMatrix& b) const;
  bool is_identity(const RingMatrix& a) const;

  bool is_finite() const { return base_.is_finite(); }
  // |R|^(d^2); throws Overflow beyond 2^62.
  std::uint64_t size() const;
  // Row-major entries, entry (0,0) least significant.
  RingMatrix element_at(std::uint64_t index) const;

  RingMatrix random(Xorshift64Star& rng, std::size_t max_terms = 3, std::int64_t window = 3,
                    std::int64_t coeff_range = 3) const;

  // "[[1+g,0],[0,1]]"; a bare element is read as a 1x1 matrix.
  RingMatrix parse(std::string_view text) const;
  std::string format(const RingMatrix& m) const;

 private:
  void check(const RingMatrix& a) const;

  GroupRing base_;
  std::size_t dim_ = 0;
};

// Applies `f` to every entry, producing a matrix over `target`.
RingMatrix map_entries(const RingMatrix& m, const std::function<GRElem(const GRElem&)>& f);

// Integer matrix with every coefficient reduced into [0, modulus).
RingMatrix reduce_integer_matrix(const MatrixRing& ring, const RingMatrix& m, const Integer& modulus);

bool is_block_upper(const MatrixRing& ring, const RingMatrix& x, const BlockShape& shape);

// Elements of the window used for unknown supports: all of a finite group, the
// box [-radius, radius]^r for Z^r. UnsupportedGroup otherwise.
std::vector<GroupElement> window_elements(const Group& g, std::int64_t radius);

struct DFPairCheck {
  bool confirms = true;
  RingMatrix yx;
};

// Requires XY = I (NotOneSidedPair otherwise) and evaluates YX.
DFPairCheck check_df_pair(const MatrixRing& ring, const RingMatrix& x, const RingMatrix& y);

// Solves XY = I over F_p[G] with supp(Y) inside the window; nullopt if no solution there.
std::optional<RingMatrix> solve_right_inverse(const MatrixRing& ring, const RingMatrix& x, std::int64_t radius);

struct UnitSearchReport {
  std::string ring;
  std::size_t d = 0;
  std::int64_t window = 0;
  std::string mode;                // "pairs", "solve" or "sample"
  std::uint64_t candidates = 0;    // size of the window-restricted matrix set
  std::uint64_t scanned = 0;       // pairs (pair mode) or matrices (solve/sample mode)
  std::uint64_t one_sided = 0;     // pairs with XY = I found
  bool exhaustive = false;
  bool bounded = false;            // infinite group or integer coefficients: no certificate
  bool partial = false;            // budget cut the scan short
  std::vector<std::pair<RingMatrix, RingMatrix>> witnesses;  // XY = I, YX != I
};

UnitSearchReport one_sided_unit_search(const GroupRing& base, std::size_t d, std::int64_t window,
                                       std::uint64_t budget, std::uint64_t seed,
                                       std::int64_t coeff_range = 1);

struct UnitriangularInverse {
  RingMatrix inverse;
  int rounds = 0;
};

// Doubling iteration: multiply by B = 2I - P until the running product P is I.
UnitriangularInverse unitriangular_inverse(const MatrixRing& ring, const RingMatrix& a);

bool is_upper_unitriangular(const MatrixRing& ring, const RingMatrix& a);

struct UnitPair {
  RingMatrix y;
  RingMatrix z;  // z y = y z = I
};

// D U with D diagonal (unit scalar times a group element per entry) and U upper unitriangular,
// hence block upper for every shape of the right size; z = U^-1 D^-1.
UnitPair random_block_upper_unit(const MatrixRing& ring, const BlockShape& shape, Xorshift64Star& rng,
                                 std::size_t max_terms = 3, std::int64_t window = 2);

// Z <- (2I - Z Yt) Z until Z Yt = I mod p^m; coefficients returned in [0, p^m).
RingMatrix hensel_lift(const MatrixRing& ring, const RingMatrix& zt, const RingMatrix& yt, std::int64_t p, int m);

// True when every coefficient of a - b is divisible by modulus (integer matrices).
bool congruent(const MatrixRing& ring, const RingMatrix& a, const RingMatrix& b, const Integer& modulus);

struct BlockLeftUnitCheck {
  bool in_shape = true;
  std::optional<std::pair<std::size_t, std::size_t>> violation;
};

BlockLeftUnitCheck block_left_unit_check(const MatrixRing& ring, const RingMatrix& x, const RingMatrix& y,
                                         const BlockShape& shape);

struct BlockDFSide {
  std::uint64_t elements = 0;
  std::uint64_t pairs_scanned = 0;
  std::uint64_t one_sided = 0;
  std::uint64_t violations = 0;
  bool sampled = false;
  bool directly_finite() const { return violations == 0; }
};

struct BlockDFReport {
  BlockShape shape;
  BlockDFSide block;
  BlockDFSide full;
  bool equivalence_holds() const { return block.directly_finite() == full.directly_finite(); }
};

BlockDFReport block_df_reduction_check(const GroupRing& base, const BlockShape& shape, std::uint64_t budget,
                                       std::uint64_t seed);

}  // namespace stabfin
