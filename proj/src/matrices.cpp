#include "stabfin/matrices.hpp"

#include <algorithm>
#include <unordered_map>

#include "stabfin/error.hpp"
#include "stabfin/linalg.hpp"
#include "stabfin/text.hpp"

namespace stabfin {

namespace {

constexpr std::uint64_t kIndexLimit = std::uint64_t{1} << 62;

std::uint64_t checked_power(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > kIndexLimit / base) fail(ErrorCode::Overflow, "search space exceeds 2^62");
    r *= base;
  }
  return r;
}

// Same as checked_power but saturating, for budget comparisons.
std::uint64_t saturating_power(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > kIndexLimit / base) return kIndexLimit;
    r *= base;
  }
  return r;
}

std::uint64_t saturating_square(std::uint64_t x) {
  if (x != 0 && x > kIndexLimit / x) return kIndexLimit;
  return x * x;
}

}  // namespace

// ---------------------------------------------------------------------------
// BlockShape

std::size_t BlockShape::total() const {
  std::size_t t = 0;
  for (auto p : parts) t += p;
  return t;
}

std::size_t BlockShape::max_part() const {
  return parts.empty() ? 0 : *std::max_element(parts.begin(), parts.end());
}

std::vector<std::size_t> BlockShape::block_of() const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < parts.size(); ++b) out.insert(out.end(), parts[b], b);
  return out;
}

BlockShape BlockShape::ones(std::size_t d) { return BlockShape{std::vector<std::size_t>(d, 1)}; }

BlockShape BlockShape::parse(std::string_view text) {
  text = strip_brackets(trim(text), '(', ')');
  BlockShape s;
  for (const auto& part : split_top_level(text, ',')) {
    auto t = trim(part);
    if (t.empty()) fail(ErrorCode::ParseError, "empty block size in shape");
    std::size_t v = 0;
    for (char c : t) {
      if (c < '0' || c > '9') fail(ErrorCode::ParseError, "bad block size '" + std::string(t) + "'");
      v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    if (v == 0) fail(ErrorCode::InvalidSpec, "block sizes must be positive");
    s.parts.push_back(v);
  }
  if (s.parts.empty()) fail(ErrorCode::InvalidSpec, "shape needs at least one block");
  return s;
}

std::string BlockShape::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// MatrixRing

MatrixRing::MatrixRing(GroupRing base, std::size_t dim) : base_(std::move(base)), dim_(dim) {
  if (dim_ == 0) fail(ErrorCode::InvalidSpec, "matrix dimension must be positive");
}

std::string MatrixRing::name() const { return "M_" + std::to_string(dim_) + "(" + base_.name() + ")"; }

void MatrixRing::check(const RingMatrix& a) const {
  if (a.dim != dim_ || a.entries.size() != dim_ * dim_) {
    fail(ErrorCode::Mismatch, "matrix is not " + std::to_string(dim_) + "x" + std::to_string(dim_));
  }
}

RingMatrix MatrixRing::zero() const { return RingMatrix{dim_, std::vector<GRElem>(dim_ * dim_)}; }

RingMatrix MatrixRing::identity() const { return scalar(base_.one()); }

RingMatrix MatrixRing::scalar(const GRElem& s) const {
  RingMatrix m = zero();
  for (std::size_t i = 0; i < dim_; ++i) m.at(i, i) = s;
  return m;
}

RingMatrix MatrixRing::from_rows(const std::vector<std::vector<GRElem>>& rows) const {
  if (rows.size() != dim_) fail(ErrorCode::Mismatch, "wrong number of rows");
  RingMatrix m = zero();
  for (std::size_t i = 0; i < dim_; ++i) {
    if (rows[i].size() != dim_) fail(ErrorCode::Mismatch, "wrong number of columns");
    for (std::size_t j = 0; j < dim_; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

RingMatrix MatrixRing::add(const RingMatrix& a, const RingMatrix& b) const {
  check(a);
  check(b);
  RingMatrix m = zero();
  for (std::size_t k = 0; k < m.entries.size(); ++k) m.entries[k] = base_.add(a.entries[k], b.entries[k]);
  return m;
}

RingMatrix MatrixRing::sub(const RingMatrix& a, const RingMatrix& b) const { return add(a, neg(b)); }

RingMatrix MatrixRing::neg(const RingMatrix& a) const {
  check(a);
  RingMatrix m = zero();
  for (std::size_t k = 0; k < m.entries.size(); ++k) m.entries[k] = base_.neg(a.entries[k]);
  return m;
}

RingMatrix MatrixRing::mul(const RingMatrix& a, const RingMatrix& b) const {
  check(a);
  check(b);
  RingMatrix m = zero();
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      GRElem acc;
      for (std::size_t k = 0; k < dim_; ++k) {
        if (a.at(i, k).terms.empty() || b.at(k, j).terms.empty()) continue;
        acc = base_.add(acc, base_.mul(a.at(i, k), b.at(k, j)));
      }
      m.at(i, j) = std::move(acc);
    }
  }
  return m;
}

bool MatrixRing::is_identity(const RingMatrix& a) const {
  check(a);
  const GRElem one = base_.one();
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i == j ? !(a.at(i, j) == one) : !a.at(i, j).terms.empty()) return false;
    }
  }
  return true;
}

std::uint64_t MatrixRing::size() const { return checked_power(base_.size(), dim_ * dim_); }

RingMatrix MatrixRing::element_at(std::uint64_t index) const {
  const std::uint64_t q = base_.size();
  RingMatrix m = zero();
  for (auto& e : m.entries) {
    e = base_.element_at(index % q);
    index /= q;
  }
  return m;
}

RingMatrix MatrixRing::random(Xorshift64Star& rng, std::size_t max_terms, std::int64_t window,
                              std::int64_t coeff_range) const {
  RingMatrix m = zero();
  for (auto& e : m.entries) e = base_.random(rng, max_terms, window, coeff_range);
  return m;
}

RingMatrix MatrixRing::parse(std::string_view text) const {
  text = trim(text);
  bool nested = false;
  if (!text.empty() && text.front() == '[') {
    auto rest = trim(text.substr(1));
    nested = !rest.empty() && rest.front() == '[';
  }
  if (!nested) {
    if (dim_ != 1) fail(ErrorCode::ParseError, "expected a " + std::to_string(dim_) + "x" + std::to_string(dim_) + " matrix");
    RingMatrix m = zero();
    m.at(0, 0) = base_.parse(text);
    return m;
  }
  auto rows = split_top_level(strip_brackets(text, '[', ']'), ',');
  if (rows.size() != dim_) {
    fail(ErrorCode::ParseError, "expected " + std::to_string(dim_) + " rows, got " + std::to_string(rows.size()));
  }
  RingMatrix m = zero();
  for (std::size_t i = 0; i < dim_; ++i) {
    auto row_text = trim(rows[i]);
    if (row_text.size() < 2 || row_text.front() != '[' || row_text.back() != ']') {
      fail(ErrorCode::ParseError, "matrix row must be bracketed: " + std::string(row_text));
    }
    auto cells = split_top_level(row_text.substr(1, row_text.size() - 2), ',');
    if (cells.size() != dim_) {
      fail(ErrorCode::ParseError, "row " + std::to_string(i) + " has " + std::to_string(cells.size()) + " entries");
    }
    for (std::size_t j = 0; j < dim_; ++j) m.at(i, j) = base_.parse(cells[j]);
  }
  return m;
}

std::string MatrixRing::format(const RingMatrix& m) const {
  check(m);
  std::string s = "[";
  for (std::size_t i = 0; i < dim_; ++i) {
    if (i) s += ",";
    s += "[";
    for (std::size_t j = 0; j < dim_; ++j) {
      if (j) s += ",";
      s += base_.format(m.at(i, j));
    }
    s += "]";
  }
  return s + "]";
}

RingMatrix map_entries(const RingMatrix& m, const std::function<GRElem(const GRElem&)>& f) {
  RingMatrix out{m.dim, {}};
  out.entries.reserve(m.entries.size());
  for (const auto& e : m.entries) out.entries.push_back(f(e));
  return out;
}

RingMatrix reduce_integer_matrix(const MatrixRing& ring, const RingMatrix& m, const Integer& modulus) {
  return map_entries(m, [&](const GRElem& e) { return reduce_in_place_mod(ring.base(), e, modulus); });
}

bool is_block_upper(const MatrixRing& ring, const RingMatrix& x, const BlockShape& shape) {
  if (shape.total() != ring.dim()) {
    fail(ErrorCode::ShapeMismatch, "shape " + shape.to_string() + " does not match dimension " + std::to_string(ring.dim()));
  }
  const auto blk = shape.block_of();
  for (std::size_t i = 0; i < ring.dim(); ++i) {
    for (std::size_t j = 0; j < ring.dim(); ++j) {
      if (blk[i] > blk[j] && !x.at(i, j).terms.empty()) return false;
    }
  }
  return true;
}

std::vector<GroupElement> window_elements(const Group& g, std::int64_t radius) {
  if (g.is_finite()) return g.elements();
  const auto& spec = g.spec();
  const bool lattice = (spec.kind == GroupSpec::Kind::cyclic && spec.n == 0) || spec.kind == GroupSpec::Kind::free_abelian;
  if (!lattice) fail(ErrorCode::UnsupportedGroup, "windows are defined for finite groups and Z^r only, not " + g.name());
  if (radius < 0) fail(ErrorCode::InvalidSpec, "window radius must be >= 0");
  const std::size_t r = g.width();
  std::vector<GroupElement> out;
  Payload cur(r, -radius);
  while (true) {
    out.emplace_back(cur);
    std::size_t k = 0;
    while (k < r && cur[k] == radius) cur[k++] = -radius;
    if (k == r) break;
    ++cur[k];
  }
  std::sort(out.begin(), out.end(), [&](const GroupElement& a, const GroupElement& b) { return g.less(a, b); });
  return out;
}

DFPairCheck check_df_pair(const MatrixRing& ring, const RingMatrix& x, const RingMatrix& y) {
  if (!ring.is_identity(ring.mul(x, y))) fail(ErrorCode::NotOneSidedPair, "XY is not the identity");
  DFPairCheck out;
  out.yx = ring.mul(y, x);
  out.confirms = ring.is_identity(out.yx);
  return out;
}

std::optional<RingMatrix> solve_right_inverse(const MatrixRing& ring, const RingMatrix& x, std::int64_t radius) {
  const GroupRing& base = ring.base();
  const CoeffRing& k = base.coeffs();
  if (!k.is_prime_field()) fail(ErrorCode::Unsupported, "right inverses are solved over F_p[G] only");
  const std::int64_t p = k.modulus();
  const Group& g = base.group();
  const std::size_t d = ring.dim();
  const auto window = window_elements(g, radius);
  const std::size_t nw = window.size();

  // Equations are indexed by (row i, group element) for every product x*w that can occur.
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> eq_index;
  std::vector<GroupElement> eq_elems;
  auto slot = [&](const GroupElement& e) {
    auto [it, fresh] = eq_index.emplace(e, eq_elems.size());
    if (fresh) eq_elems.push_back(e);
    return it->second;
  };
  slot(g.identity());
  for (const auto& entry : x.entries) {
    for (const auto& [s, c] : entry.terms) {
      for (const auto& w : window) slot(g.mul(s, w));
    }
  }
  const std::size_t ne = eq_elems.size();

  linalg::Mat a(d * ne, linalg::Row(d * nw, 0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t kk = 0; kk < d; ++kk) {
      for (const auto& [s, c] : x.at(i, kk).terms) {
        const std::int64_t cv = std::get<std::int64_t>(c);
        for (std::size_t wi = 0; wi < nw; ++wi) {
          auto& cell = a[i * ne + eq_index.at(g.mul(s, window[wi]))][kk * nw + wi];
          cell = (cell + cv) % p;
        }
      }
    }
  }
  std::vector<linalg::Row> rhs(d, linalg::Row(d * ne, 0));
  for (std::size_t c = 0; c < d; ++c) rhs[c][c * ne + 0] = 1;

  auto sol = linalg::solve_mod_p(a, rhs, p);
  if (!sol) return std::nullopt;
  RingMatrix y = ring.zero();
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t kk = 0; kk < d; ++kk) {
      std::vector<std::pair<GroupElement, Scalar>> terms;
      for (std::size_t wi = 0; wi < nw; ++wi) {
        std::int64_t v = (*sol)[c][kk * nw + wi];
        if (v != 0) terms.emplace_back(window[wi], Scalar(v));
      }
      y.at(kk, c) = base.normalize(std::move(terms));
    }
  }
  if (!ring.is_identity(ring.mul(x, y))) fail(ErrorCode::Mismatch, "linear solve produced a non-inverse");
  return y;
}

// ---------------------------------------------------------------------------
// one-sided unit search

namespace {

// Matrices whose entries are supported in a window with coefficients from a finite digit set.
class WindowedMatrices {
 public:
  WindowedMatrices(const MatrixRing& ring, std::vector<GroupElement> window, std::int64_t coeff_range)
      : ring_(ring), window_(std::move(window)), range_(coeff_range) {
    const CoeffRing& k = ring_.base().coeffs();
    digits_ = k.is_finite() ? k.size() : static_cast<std::uint64_t>(2 * range_ + 1);
    const std::uint64_t slots = window_.size() * ring_.dim() * ring_.dim();
    count_ = saturating_power(digits_, slots);
  }

  std::uint64_t count() const { return count_; }
  bool countable() const { return count_ < kIndexLimit; }

  RingMatrix at(std::uint64_t index) const {
    const GroupRing& base = ring_.base();
    RingMatrix m = ring_.zero();
    for (auto& e : m.entries) {
      std::vector<std::pair<GroupElement, Scalar>> terms;
      for (const auto& w : window_) {
        const std::uint64_t digit = index % digits_;
        index /= digits_;
        if (digit != 0) terms.emplace_back(w, coefficient(digit));
      }
      e = base.normalize(std::move(terms));
    }
    return m;
  }

  RingMatrix random(Xorshift64Star& rng) const {
    const GroupRing& base = ring_.base();
    RingMatrix m = ring_.zero();
    for (auto& e : m.entries) {
      std::vector<std::pair<GroupElement, Scalar>> terms;
      for (const auto& w : window_) {
        const std::uint64_t digit = rng.below(digits_);
        if (digit != 0) terms.emplace_back(w, coefficient(digit));
      }
      e = base.normalize(std::move(terms));
    }
    return m;
  }

 private:
  // Digit 0 is always the zero coefficient; for Z the digits run 0, 1, -1, 2, -2, ...
  Scalar coefficient(std::uint64_t digit) const {
    const CoeffRing& k = ring_.base().coeffs();
    if (k.is_finite()) return k.element_at(digit);
    const std::int64_t mag = static_cast<std::int64_t>((digit + 1) / 2);
    return Integer(digit % 2 == 1 ? mag : -mag);
  }

  const MatrixRing& ring_;
  std::vector<GroupElement> window_;
  std::int64_t range_;
  std::uint64_t digits_ = 1;
  std::uint64_t count_ = 1;
};

}  // namespace

UnitSearchReport one_sided_unit_search(const GroupRing& base, std::size_t d, std::int64_t window,
                                       std::uint64_t budget, std::uint64_t seed, std::int64_t coeff_range) {
  MatrixRing ring(base, d);
  WindowedMatrices space(ring, window_elements(base.group(), window), coeff_range);

  UnitSearchReport rep;
  rep.ring = ring.name();
  rep.d = d;
  rep.window = window;
  rep.candidates = space.count();
  rep.bounded = !base.group().is_finite() || !base.coeffs().is_finite();

  auto record = [&](const RingMatrix& x, const RingMatrix& y) {
    ++rep.one_sided;
    auto chk = check_df_pair(ring, x, y);
    if (!chk.confirms) rep.witnesses.emplace_back(x, y);
  };

  const std::uint64_t pairs = saturating_square(space.count());
  if (space.countable() && pairs <= budget) {
    rep.mode = "pairs";
    rep.exhaustive = true;
    std::vector<RingMatrix> all;
    all.reserve(space.count());
    for (std::uint64_t i = 0; i < space.count(); ++i) all.push_back(space.at(i));
    for (const auto& x : all) {
      for (const auto& y : all) {
        if (ring.is_identity(ring.mul(x, y))) record(x, y);
      }
    }
    rep.scanned = pairs;
    return rep;
  }

  Xorshift64Star rng(seed);
  if (base.coeffs().is_prime_field()) {
    const bool all = space.countable() && space.count() <= budget;
    rep.mode = all ? "solve" : "sample";
    rep.exhaustive = all;
    rep.partial = !all;
    const std::uint64_t n = all ? space.count() : budget;
    for (std::uint64_t i = 0; i < n; ++i) {
      RingMatrix x = all ? space.at(i) : space.random(rng);
      if (auto y = solve_right_inverse(ring, x, window)) record(x, *y);
    }
    rep.scanned = n;
    return rep;
  }

  rep.mode = "sample";
  rep.partial = true;
  for (std::uint64_t i = 0; i < budget; ++i) {
    RingMatrix x = space.random(rng);
    RingMatrix y = space.random(rng);
    if (ring.is_identity(ring.mul(x, y))) record(x, y);
  }
  rep.scanned = budget;
  return rep;
}

// ---------------------------------------------------------------------------
// unitriangular inversion and Hensel lifting

bool is_upper_unitriangular(const MatrixRing& ring, const RingMatrix& a) {
  const GRElem one = ring.base().one();
  for (std::size_t i = 0; i < ring.dim(); ++i) {
    if (!(a.at(i, i) == one)) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (!a.at(i, j).terms.empty()) return false;
    }
  }
  return true;
}

UnitriangularInverse unitriangular_inverse(const MatrixRing& ring, const RingMatrix& a) {
  if (!is_upper_unitriangular(ring, a)) fail(ErrorCode::NotUnitriangular, "matrix is not upper unitriangular");
  const RingMatrix two = ring.scalar(ring.base().from_int(2));
  UnitriangularInverse out{ring.identity(), 0};
  RingMatrix prod = a;
  while (!ring.is_identity(prod)) {
    RingMatrix b = ring.sub(two, prod);
    out.inverse = ring.mul(out.inverse, b);
    prod = ring.mul(prod, b);
    ++out.rounds;
    if (out.rounds > 64) fail(ErrorCode::Mismatch, "doubling iteration failed to terminate");
  }
  return out;
}

UnitPair random_block_upper_unit(const MatrixRing& ring, const BlockShape& shape, Xorshift64Star& rng,
                                 std::size_t max_terms, std::int64_t window) {
  const std::size_t d = ring.dim();
  if (shape.total() != d) fail(ErrorCode::ShapeMismatch, "shape " + shape.to_string() + " does not match the dimension");
  const GroupRing& r = ring.base();
  const CoeffRing& k = r.coeffs();
  RingMatrix diag = ring.zero();
  RingMatrix diag_inv = ring.zero();
  for (std::size_t i = 0; i < d; ++i) {
    Scalar c = k.one();
    for (int tries = 0; tries < 64; ++tries) {
      Scalar cand = k.random(rng, 1);
      if (k.is_unit(cand)) {
        c = cand;
        break;
      }
    }
    const GroupElement g = r.group().random_element(rng, window);
    diag.at(i, i) = r.monomial(c, g);
    diag_inv.at(i, i) = r.monomial(k.inv(c), r.group().inv(g));
  }
  RingMatrix upper = ring.identity();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      upper.at(i, j) = r.random(rng, max_terms, window, 1);
    }
  }
  UnitPair out;
  out.y = ring.mul(diag, upper);
  out.z = ring.mul(unitriangular_inverse(ring, upper).inverse, diag_inv);
  return out;
}

bool congruent(const MatrixRing& ring, const RingMatrix& a, const RingMatrix& b, const Integer& modulus) {
  const RingMatrix diff = ring.sub(a, b);
  for (const auto& e : diff.entries) {
    for (const auto& [g, c] : e.terms) {
      if (std::get<Integer>(c) % modulus != 0) return false;
    }
  }
  return true;
}

RingMatrix hensel_lift(const MatrixRing& ring, const RingMatrix& zt, const RingMatrix& yt, std::int64_t p, int m) {
  if (ring.base().coeffs().kind() != CoeffRing::Kind::integers) {
    fail(ErrorCode::RingMismatch, "Hensel lifting works over Z[G]");
  }
  if (!is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (m < 1) fail(ErrorCode::InvalidSpec, "lift exponent must be >= 1");
  if (!congruent(ring, ring.mul(zt, yt), ring.identity(), Integer(p))) {
    fail(ErrorCode::NotCongruentModP, "Zt*Yt is not the identity mod " + std::to_string(p));
  }
  const Integer pm = boost::multiprecision::pow(Integer(p), static_cast<unsigned>(m));
  const RingMatrix two = ring.scalar(ring.base().from_int(2));
  RingMatrix z = reduce_integer_matrix(ring, zt, pm);
  for (int j = 1; j < m; j *= 2) {
    z = ring.mul(ring.sub(two, ring.mul(z, yt)), z);
    z = reduce_integer_matrix(ring, z, pm);
  }
  return z;
}

BlockLeftUnitCheck block_left_unit_check(const MatrixRing& ring, const RingMatrix& x, const RingMatrix& y,
                                         const BlockShape& shape) {
  if (!is_block_upper(ring, x, shape)) fail(ErrorCode::ShapeViolation, "X is not block upper for " + shape.to_string());
  if (!ring.is_identity(ring.mul(x, y))) fail(ErrorCode::NotOneSidedPair, "XY is not the identity");
  BlockLeftUnitCheck out;
  const auto blk = shape.block_of();
  for (std::size_t i = 0; i < ring.dim() && out.in_shape; ++i) {
    for (std::size_t j = 0; j < ring.dim(); ++j) {
      if (blk[i] > blk[j] && !y.at(i, j).terms.empty()) {
        out.in_shape = false;
        out.violation = std::make_pair(i, j);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// block direct-finiteness reduction

namespace {

// Matrices over a finite ring with a fixed set of free positions.
struct PatternSpace {
  const MatrixRing& ring;
  std::vector<std::size_t> free;  // flattened positions
  std::uint64_t count = 0;

  PatternSpace(const MatrixRing& r, std::vector<std::size_t> positions) : ring(r), free(std::move(positions)) {
    count = saturating_power(ring.base().size(), free.size());
  }

  RingMatrix at(std::uint64_t index) const {
    const std::uint64_t q = ring.base().size();
    RingMatrix m = ring.zero();
    for (auto pos : free) {
      m.entries[pos] = ring.base().element_at(index % q);
      index /= q;
    }
    return m;
  }

  RingMatrix random(Xorshift64Star& rng) const {
    RingMatrix m = ring.zero();
    for (auto pos : free) m.entries[pos] = ring.base().element_at(rng.below(ring.base().size()));
    return m;
  }

  bool contains(const RingMatrix& m) const {
    std::vector<bool> allowed(m.entries.size(), false);
    for (auto pos : free) allowed[pos] = true;
    for (std::size_t k = 0; k < m.entries.size(); ++k) {
      if (!allowed[k] && !m.entries[k].terms.empty()) return false;
    }
    return true;
  }
};

BlockDFSide scan_side(const PatternSpace& space, std::uint64_t budget, Xorshift64Star& rng) {
  const MatrixRing& ring = space.ring;
  BlockDFSide side;
  side.elements = space.count;
  auto consider = [&](const RingMatrix& x, const RingMatrix& y) {
    ++side.one_sided;
    if (!ring.is_identity(ring.mul(y, x))) ++side.violations;
  };
  const std::uint64_t pairs = saturating_square(space.count);
  if (space.count < kIndexLimit && pairs <= budget) {
    std::vector<RingMatrix> all;
    all.reserve(space.count);
    for (std::uint64_t i = 0; i < space.count; ++i) all.push_back(space.at(i));
    for (const auto& x : all) {
      for (const auto& y : all) {
        if (ring.is_identity(ring.mul(x, y))) consider(x, y);
      }
    }
    side.pairs_scanned = pairs;
    return side;
  }
  side.sampled = true;
  const bool solvable = ring.base().coeffs().is_prime_field();
  for (std::uint64_t i = 0; i < budget; ++i) {
    RingMatrix x = space.random(rng);
    if (solvable) {
      // A right inverse in the full ring; it counts for this side only if it lies in the pattern.
      auto y = solve_right_inverse(ring, x, 0);
      if (y && space.contains(*y)) consider(x, *y);
    } else {
      RingMatrix y = space.random(rng);
      if (ring.is_identity(ring.mul(x, y))) consider(x, y);
    }
  }
  side.pairs_scanned = budget;
  return side;
}

}  // namespace

BlockDFReport block_df_reduction_check(const GroupRing& base, const BlockShape& shape, std::uint64_t budget,
                                       std::uint64_t seed) {
  if (!base.is_finite()) fail(ErrorCode::Unsupported, "block reduction check needs a finite ring");
  BlockDFReport rep;
  rep.shape = shape;
  Xorshift64Star rng(seed);

  MatrixRing block_ring(base, shape.total());
  const auto blk = shape.block_of();
  std::vector<std::size_t> block_free;
  for (std::size_t i = 0; i < shape.total(); ++i) {
    for (std::size_t j = 0; j < shape.total(); ++j) {
      if (blk[i] <= blk[j]) block_free.push_back(i * shape.total() + j);
    }
  }
  rep.block = scan_side(PatternSpace(block_ring, block_free), budget, rng);

  MatrixRing full_ring(base, shape.max_part());
  std::vector<std::size_t> all(shape.max_part() * shape.max_part());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  rep.full = scan_side(PatternSpace(full_ring, all), budget, rng);
  return rep;
}

}  // namespace stabfin
