#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stabfin/groups.hpp"
#include "stabfin/matrices.hpp"
#include "stabfin/rings.hpp"

namespace stabfin {

// (f, top) with f a finitely supported map top-group -> base-group, stored as
// (point, value) pairs sorted by the top group's canonical order, identity values dropped.
struct WreathElement {
  std::vector<std::pair<GroupElement, GroupElement>> base;
  GroupElement top;

  friend bool operator==(const WreathElement& a, const WreathElement& b) {
    return a.top == b.top && a.base == b.base;
  }
};

class Wreath {
 public:
  Wreath() = default;
  Wreath(Group base, Group top);

  const Group& base_group() const { return base_; }
  const Group& top_group() const { return top_; }
  std::string name() const;

  WreathElement identity() const;
  // Sorts, merges repeated points (multiplying left to right) and drops identities.
  WreathElement make(std::vector<std::pair<GroupElement, GroupElement>> values, GroupElement top) const;
  WreathElement point_mass(const GroupElement& at, const GroupElement& value) const;
  WreathElement from_top(const GroupElement& gamma) const;
  GroupElement value(const WreathElement& w, const GroupElement& at) const;

  // (f1, g1)(f2, g2) = (f1 * g1.f2, g1 g2) with (g.f)(x) = f(g^-1 x).
  WreathElement mul(const WreathElement& a, const WreathElement& b) const;
  WreathElement inv(const WreathElement& a) const;
  bool is_identity(const WreathElement& a) const { return a == identity(); }
  bool in_base(const WreathElement& a) const { return top_.is_identity(a.top); }

  bool is_finite() const { return base_.is_finite() && top_.is_finite(); }
  std::uint64_t order() const;
  // Base values over top.elements() as digits (first point least significant), then the top.
  WreathElement element_at(std::uint64_t index) const;
  std::uint64_t index_of(const WreathElement& w) const;
  // Throws BudgetExceeded above `cap` elements.
  std::vector<WreathElement> elements(std::uint64_t cap = 1u << 16) const;
  // Elements of the base group A[top]; finite top only.
  std::vector<WreathElement> base_elements(std::uint64_t cap = 1u << 16) const;

  // Support drawn from the top group's window, up to max_support points.
  WreathElement random(Xorshift64Star& rng, std::int64_t window = 3, std::size_t max_support = 3) const;

  // Finite top: "((v1,...,vn),t)" listing values at every top element in order.
  // Otherwise: "({x:v,...},t)" listing the support only.
  std::string format(const WreathElement& w) const;
  WreathElement parse(std::string_view text) const;

  friend bool operator==(const Wreath& a, const Wreath& b) { return a.base_ == b.base_ && a.top_ == b.top_; }

 private:
  Group base_;
  Group top_;
};

struct WreathEndo {
  Wreath source;
  Wreath target;
  std::function<WreathElement(const WreathElement&)> rule;
  std::string kind;
  std::string label;

  WreathElement operator()(const WreathElement& w) const { return rule(w); }
};

WreathEndo identity_endo(const Wreath& w);
// outer after inner.
WreathEndo compose_endos(const WreathEndo& outer, const WreathEndo& inner);
// (f, g) -> (phi o f, g).
WreathEndo hom_from_base_epi(const GroupHom& phi, const Group& top);
// (f, g) -> (phi_* f, phi(g)); requires an abelian base.
WreathEndo hom_from_top_epi(const Group& base, const GroupHom& phi);
// Finite map given by an element table.
WreathEndo explicit_endo(const Wreath& source, const Wreath& target,
                         std::vector<std::pair<WreathElement, WreathElement>> table, std::string label);

// (Z/n)^d wr G, with base C_n when d = 1 and C_n x ... x C_n otherwise.
Wreath matrix_wreath(std::int64_t n, std::size_t d, const Group& top);
// (v, g) -> (vY, g) with v_i = sum_x f(x)_i x read as a row vector over (Z/n)[G].
WreathEndo endo_from_matrix(const MatrixRing& ring, const RingMatrix& y);

struct HomLawCheck {
  bool holds = true;
  bool exhaustive = false;
  std::uint64_t pairs = 0;
  std::optional<std::pair<WreathElement, WreathElement>> counterexample;
};

HomLawCheck verify_wreath_hom(const WreathEndo& e, std::uint64_t seed = 1, std::uint64_t samples = 1000,
                              std::uint64_t exhaustive_cap = 256);

struct EndoProfile {
  std::uint64_t source_order = 0;
  std::uint64_t target_order = 0;
  std::uint64_t image_order = 0;
  std::uint64_t kernel_order = 0;
  bool surjective = false;
  bool injective = false;
  bool kernel_in_base = true;
  bool image_of_base_in_base = true;
  std::vector<WreathElement> kernel;
};

// Exhaustive over a finite source.
EndoProfile profile_endo(const WreathEndo& e, std::uint64_t cap = 1u << 16);

std::vector<WreathElement> wreath_centre(const Wreath& w, std::uint64_t cap = 256);

struct AugmentationMap {
  Group target;  // A x Ab(top)
  std::function<GroupElement(const WreathElement&)> rule;
};

// (f, g) -> (sum of f's values, Ab(g)); requires an abelian base.
AugmentationMap augment_abelianize(const Wreath& w);

// ---------------------------------------------------------------------------
// abelian normal subgroups

struct AbelianNormalRecord {
  std::vector<std::size_t> members;  // indices into Wreath::elements()
  bool basic = true;
  // Conclusions for non-basic subgroups: exponent-2 base, central order-2 top, kernel equality.
  std::optional<bool> exponent_two;
  std::optional<bool> central_top;
  std::optional<bool> equals_kernel;
  std::optional<GroupElement> gamma;
  bool all_pass() const {
    return basic || (exponent_two.value_or(false) && central_top.value_or(false) && equals_kernel.value_or(false));
  }
};

struct AbelianNormalReport {
  std::uint64_t order = 0;
  std::vector<AbelianNormalRecord> subgroups;
};

AbelianNormalReport classify_abelian_normal(const Wreath& w, std::uint64_t cap = 256);

// ---------------------------------------------------------------------------
// basic normalisation

struct BasicNormalization {
  WreathEndo psi;
  std::vector<GroupElement> alpha;  // alpha[i] is the top image of top.elements()[i]
  bool psi_is_hom = false;
  std::uint64_t kernel_phi = 0;
  std::uint64_t kernel_psi = 0;
  bool kernels_in_base = false;
  bool certified() const { return psi_is_hom && kernel_phi == kernel_psi && kernels_in_base; }
};

BasicNormalization normalize_basic_endo(const WreathEndo& phi);

// ---------------------------------------------------------------------------
// D8

Wreath c2_wr_c2();
// An automorphism of C2 wr C2 moving the base element ((0,1),0) out of the base.
WreathEndo d8_nonbasic_automorphism();
// ((x,y),g) -> ((x,x), y+g) read literally; not a homomorphism.
WreathEndo d8_literal_formula_map();

// Cayley table of a finite wreath product in elements() order.
std::vector<std::vector<std::size_t>> wreath_cayley_table(const Wreath& w, std::uint64_t cap = 256);
std::vector<std::vector<std::size_t>> group_cayley_table(const Group& g);

// An isomorphism between two Cayley tables (index 0 the identity), as an index map.
std::optional<std::vector<std::size_t>> find_isomorphism(const std::vector<std::vector<std::size_t>>& a,
                                                         const std::vector<std::vector<std::size_t>>& b);

// ---------------------------------------------------------------------------
// Hopf witness pipeline

// P = (Z/p)^{d_1} + (Z/p^2)^{d_2} + ... ; parts[k-1] = d_k.
struct PGroupBasis {
  std::int64_t p = 2;
  std::vector<std::size_t> parts;

  // Exponents of the generators a_{k,j} with k >= i, in order.
  std::vector<int> exponents(std::size_t i) const;
  // Nonzero parts from i onward.
  BlockShape shape(std::size_t i) const;
  std::vector<std::string> labels(std::size_t i) const;
  static PGroupBasis parse(std::int64_t p, std::string_view parts);
};

struct PipelineResult {
  Wreath wreath;
  std::vector<int> exponents;
  RingMatrix y_lift;   // over Z[G]
  RingMatrix z_bar;    // Hensel lift of Z mod p^m
  RingMatrix phi_matrix;  // scaled by p^(e_r - e_k)
  RingMatrix psi_matrix;
  WreathEndo phi;
  WreathEndo psi;
  bool composition_identity = false;  // phi(psi(a_k)) = a_k on every generator
  bool vi_containment = false;        // phi(b_k) is p-torsion and equals sum_r b_r y_kr
  bool kernel_exhaustive = false;
  std::uint64_t kernel_order = 0;     // exact when exhaustive, else elements found in the window
  std::vector<WreathElement> kernel_sample;
};

// Y block upper over F_p[G] for basis.shape(i), Z a left inverse (ZY = I).
PipelineResult hopf_witness_pipeline(const PGroupBasis& basis, std::size_t i, const MatrixRing& ring,
                                     const RingMatrix& y, const RingMatrix& z, std::int64_t window = 1,
                                     std::uint64_t budget = 1u << 16);

}  // namespace stabfin
