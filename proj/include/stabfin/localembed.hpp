#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stabfin/automata.hpp"
#include "stabfin/field.hpp"

namespace stabfin {

// A value in the codomain of a local embedding: a field element or a square matrix over F_p.
using EmbedValue = std::variant<FieldElem, IntMat>;

struct EmbedCodomain {
  enum class Kind { field, matrices };
  Kind kind = Kind::field;
  Field field;          // Kind::field
  std::int64_t p = 2;   // Kind::matrices
  std::size_t d = 1;

  static EmbedCodomain of_field(const Field& f);
  static EmbedCodomain of_matrices(std::int64_t p, std::size_t d);

  EmbedValue add(const EmbedValue& x, const EmbedValue& y) const;
  EmbedValue mul(const EmbedValue& x, const EmbedValue& y) const;
  EmbedValue one() const;
  std::string name() const;
  std::string format(const EmbedValue& x) const;
};

struct EmbedTriple {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;  // index of x+y or x*y in the domain
};

struct LocalEmbeddingWitness {
  Field source;
  std::vector<FieldElem> domain;  // distinct
  EmbedCodomain codomain;
  std::vector<EmbedValue> images;  // images[i] is f(domain[i])
  std::vector<EmbedTriple> checked_sums;
  std::vector<EmbedTriple> checked_products;

  std::optional<std::size_t> find(const FieldElem& x) const;
};

struct EmbedViolation {
  std::string condition;  // "injective", "sum", "product", "identity"
  std::size_t x = 0;
  std::size_t y = 0;
};

struct EmbedVerdict {
  bool verified = true;
  std::optional<EmbedViolation> violation;
  std::uint64_t sums = 0;
  std::uint64_t products = 0;
};

// Checks injectivity, every sum and product that stays inside the domain and identity
// preservation. Refills w.checked_sums / w.checked_products.
EmbedVerdict verify_local_embedding(LocalEmbeddingWitness& w);
EmbedVerdict verify_local_embedding(const LocalEmbeddingWitness& w);

// Row convention: entry [i][j] is coordinate j of a * b_i over the F_p-basis b_0, b_1, ...
// (the basis element b_j is element_at(p^j)).
IntMat regular_matrix(const Field& f, const FieldElem& a);
// Domain: every element of the finite field f (|f| <= cap).
LocalEmbeddingWitness embed_gf_into_matrices(const Field& f, std::uint64_t cap = 256);

struct EvalEmbedding {
  LocalEmbeddingWitness witness;
  Field target;           // K or a finite extension of it
  FieldElem alpha;        // in target
  int extensions = 0;     // how many times the scan ran out of candidates
  std::uint64_t scanned = 0;
};

// Domain inside K(t), K finite. Evaluates at the first alpha (canonical order) that avoids
// every root of numerators, denominators and cross-differences, doubling the degree of the
// ambient field when none is left.
EvalEmbedding local_embed_eval(const Field& rational, const std::vector<FieldElem>& domain);

// A finite field together with the images of a domain inside it.
struct FiniteLanding {
  Field target;
  std::vector<FieldElem> images;
  std::vector<LocalEmbeddingWitness> stages;  // innermost first
};

// Domain inside an extension field K[x]/(P). The coefficient closure is embedded through
// `base_embed` (identity on finite K when absent).
using BaseEmbedder = std::function<FiniteLanding(const Field&, const std::vector<FieldElem>&)>;

struct AlgebraicEmbedding {
  LocalEmbeddingWitness witness;
  std::vector<FieldElem> coefficient_set;  // E
  std::size_t closure_size = 0;            // |D|
  Field target;
  FieldElem root;                          // t'
  std::vector<LocalEmbeddingWitness> stages;
};

AlgebraicEmbedding local_embed_algebraic(const Field& ext, const std::vector<FieldElem>& domain,
                                         const BaseEmbedder& base_embed = {}, std::uint64_t cap = 1u << 14);

struct FieldTowerStep {
  enum class Kind { algebraic, transcendental };
  Kind kind = Kind::transcendental;
  std::string poly;  // algebraic: minimal polynomial text in `var`
  std::string var;

  std::string to_string() const;
};

// "[alg:x^2+x+1, transc]"; algebraic variables default to the polynomial's fresh letter,
// transcendental ones to t, u, v, ... ("transc:s" names one explicitly).
std::vector<FieldTowerStep> parse_tower(std::string_view text);
Field build_tower(std::int64_t p, const std::vector<FieldTowerStep>& tower);

// Any domain inside a tower field, into a finite field, by peeling the top step.
FiniteLanding land_in_finite_field(const Field& f, const std::vector<FieldElem>& domain,
                                   std::uint64_t cap = 1u << 14);

struct PipelineEmbedding {
  Field source;
  LocalEmbeddingWitness witness;        // domain -> d x d matrices over F_p
  LocalEmbeddingWitness field_stage;    // domain -> finite field
  LocalEmbeddingWitness matrix_stage;   // used field elements -> matrices
  std::vector<LocalEmbeddingWitness> stages;
  bool composition_agrees = false;
};

// Domain elements are parsed in the tower field (repeats dropped).
PipelineEmbedding local_embed_pipeline(std::int64_t p, const std::vector<FieldTowerStep>& tower,
                                       const std::vector<std::string>& domain, std::uint64_t cap = 1u << 14);
PipelineEmbedding local_embed_pipeline(const Field& top, const std::vector<FieldElem>& domain,
                                       std::uint64_t cap = 1u << 14);

// Witness as a readable table, one "x -> f(x)" per line.
std::string format_witness(const LocalEmbeddingWitness& w);

}  // namespace stabfin
