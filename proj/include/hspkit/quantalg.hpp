#pragma once

// Quantitative algebras: carriers with an extended metric valued in the
// non-negative rationals plus infinity, nonexpansive operations, pseudometric
// congruences and their quotients, c-reflexive quotients, clustered
// equations, and the quantitative deduction system.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "hspkit/variety.hpp"

namespace hspkit {

using Rational = boost::rational<std::int64_t>;

// A rational or infinity. Infinity absorbs addition and is above every
// rational.
class Distance {
 public:
  Distance() = default;
  Distance(Rational value) : value_(value) {}
  Distance(std::int64_t value) : value_(value) {}
  static Distance infinity() {
    Distance d;
    d.infinite_ = true;
    return d;
  }

  bool is_infinite() const noexcept { return infinite_; }
  // Meaningless when infinite.
  const Rational& value() const noexcept { return value_; }
  bool is_negative() const noexcept { return !infinite_ && value_ < 0; }

  friend Distance operator+(const Distance& a, const Distance& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return Distance(a.value_ + b.value_);
  }
  friend bool operator==(const Distance& a, const Distance& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const Distance& a, const Distance& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Rational value_{0};
  bool infinite_ = false;
};

// "inf", an integer, "p/q" or a decimal such as "0.25". Throws
// malformed_input.
Distance parse_distance(std::string_view text);
// "inf", "p" or "p/q" in lowest terms.
std::string to_string(const Distance& d);

// Square symmetric matrix of distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  // Zero diagonal, infinity elsewhere.
  explicit DistanceMatrix(std::size_t n);
  // Throws invalid_argument unless square and symmetric.
  explicit DistanceMatrix(const std::vector<std::vector<Distance>>& rows);

  std::size_t size() const noexcept { return n_; }
  const Distance& operator()(Element a, Element b) const { return d_[a * n_ + b]; }
  void set(Element a, Element b, Distance v) {
    d_[a * n_ + b] = v;
    d_[b * n_ + a] = v;
  }

  bool has_zero_diagonal() const;
  bool has_negative_entry() const;
  bool satisfies_triangle() const;
  // Zero diagonal, non-negative, triangle inequality.
  bool is_pseudometric() const;
  // A pseudometric that is zero only on the diagonal.
  bool is_metric() const;
  // Pointwise <=.
  bool below(const DistanceMatrix& other) const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Distance> d_;
};

using ExtMetric = DistanceMatrix;

// d(f(a), f(b)) <= max_i d(a_i, b_i) for every operation and tuples a, b.
bool is_nonexpansive(const FiniteAlgebra& alg, const DistanceMatrix& d);

class QuantAlgebra {
 public:
  QuantAlgebra() = default;
  // Throws invalid_argument unless d is a metric and the operations are
  // nonexpansive.
  QuantAlgebra(FiniteAlgebra base, ExtMetric d);

  const FiniteAlgebra& base() const noexcept { return base_; }
  const ExtMetric& metric() const noexcept { return d_; }
  const Signature& signature() const noexcept { return base_.signature(); }
  std::size_t size() const noexcept { return base_.size(); }
  Element apply(SymbolId s, std::span<const Element> args) const { return base_.apply(s, args); }

  friend bool operator==(const QuantAlgebra&, const QuantAlgebra&) = default;

 private:
  FiniteAlgebra base_;
  ExtMetric d_;
};

using QuantCongruence = DistanceMatrix;

// Pseudometric below the metric of A with nonexpansive operations.
bool is_quant_congruence(const QuantAlgebra& alg, const DistanceMatrix& p);

struct DistanceConstraint {
  Element a;
  Element b;
  Distance eps;
};

// Largest congruence p with p(a, b) <= eps for every constraint. Throws
// negative_epsilon and invalid_argument (element outside the carrier).
QuantCongruence quant_congruence_generated(const QuantAlgebra& alg,
                                           const std::vector<DistanceConstraint>& constraints);

struct QuantQuotient {
  QuantAlgebra algebra;
  ElementMap surjection;
};

// Blocks of the zero set of p, with d([a], [b]) = p(a, b). Throws
// not_a_congruence.
QuantQuotient quotient_quant(const QuantAlgebra& alg, const QuantCongruence& p);

// p_e(a, b) = d(e(a), e(b)).
DistanceMatrix induced_pseudometric(std::span<const Element> map, const DistanceMatrix& cod);

// A natural number >= 2, or omega for "every finite size".
struct Cardinal {
  std::size_t value = 2;
  bool omega = false;

  static Cardinal finite(std::size_t c) { return {c, false}; }
  static Cardinal aleph0() { return {0, true}; }
  // Sets of size n are "< c".
  bool exceeds(std::size_t n) const noexcept { return omega || n < value; }

  friend bool operator==(const Cardinal&, const Cardinal&) = default;
};

// "omega" or a natural number >= 2. Throws malformed_input.
Cardinal parse_cardinal(std::string_view text);
std::string to_string(const Cardinal& c);

struct ReflexivityLimits {
  std::size_t max_search_nodes = 10'000'000;
};

// Every set of fewer than c codomain points has a preimage set on which e
// is an isometry. Throws invalid_argument when e is not surjective or c < 2,
// size_limit_exceeded when the section search grows too large.
bool is_c_reflexive(const DistanceMatrix& dom, const DistanceMatrix& cod, std::span<const Element> e,
                    Cardinal c, ReflexivityLimits limits = {});

struct VarCondition {
  VarId x;
  VarId y;
  Distance eps;
};

// x_i =_{eps_i} y_i (i in I) |- lhs =_eps rhs, with variables partitioned
// into clusters of size < c and every condition inside one cluster.
struct ClusteredEquation {
  VarSet vars;
  Partition clusters;
  std::vector<VarCondition> conditions;
  Term lhs;
  Term rhs;
  Distance eps;
  Cardinal c;
};

// Throws invalid_argument for badly clustered data, negative_epsilon, and
// the errors of check_equation.
void check_clustered_equation(const ClusteredEquation& eq, const Signature& sig);

SatisfactionResult satisfies_clustered_equation(const QuantAlgebra& alg, const ClusteredEquation& eq);

// Unconditional s =_eps t.
struct QuantEquation {
  VarSet vars;
  Term lhs;
  Term rhs;
  Distance eps;

  friend bool operator==(const QuantEquation&, const QuantEquation&) = default;
};

std::string to_string(const QuantEquation& eq, const Signature& sig);

SatisfactionResult satisfies_quant_equation(const QuantAlgebra& alg, const QuantEquation& eq);

enum class QuantRule { refl, sym, triang, max, arch, cong, subst, axiom };

std::string_view to_string(QuantRule rule);
std::optional<QuantRule> parse_quant_rule(std::string_view name);

struct QuantProof {
  QuantRule rule = QuantRule::refl;
  QuantEquation conclusion;
  SymbolId symbol = 0;
  Substitution substitution;
  std::size_t axiom = 0;
  std::vector<QuantProof> children;

  std::size_t node_count() const;
};

struct QuantProofCheck {
  bool ok = true;
  std::vector<std::size_t> path;
  std::string reason;

  explicit operator bool() const noexcept { return ok; }
};

// Arch takes one premise with a bound at most the conclusion's, or none
// when the conclusion's bound is infinite. Throws malformed_proof with the
// node path for structural errors.
QuantProofCheck verify_quant_proof(const QuantProof& p, const std::vector<QuantEquation>& gamma,
                                   const Signature& sig);

inline bool check_quant_proof(const QuantProof& p, const std::vector<QuantEquation>& gamma,
                              const Signature& sig) {
  return verify_quant_proof(p, gamma, sig).ok;
}

struct QuantDeriveLimits {
  std::size_t max_universe = 2000;
  std::size_t max_instance_work = 5'000'000;
  std::size_t max_proof_nodes = 1'000'000;
};

struct QuantProved {
  QuantProof proof;
};

// The goal's bound was not reached; `best` is the least bound derivable in
// the universe, with its proof.
struct BoundWitness {
  Distance best;
  QuantProof proof;
};

struct QuantUnknown {
  std::size_t depth = 0;
  std::size_t universe_size = 0;
};

using QuantVerdict = std::variant<QuantProved, BoundWitness, QuantUnknown>;

// Runs the congruence solver on the terms of depth <= `depth` over the
// goal's variables, with the discrete metric and every hypothesis instance
// inside the universe as a constraint.
QuantVerdict quant_entails(const std::vector<QuantEquation>& gamma, const QuantEquation& goal,
                           const Signature& sig, std::size_t depth, QuantDeriveLimits limits = {});

struct QuantSubalgebra {
  QuantAlgebra algebra;
  ElementMap inclusion;
};

QuantSubalgebra subalgebra_generated(const QuantAlgebra& alg, std::span<const Element> generators);

// Product with the sup metric; element encoding as in product().
QuantAlgebra product(const Signature& sig, std::span<const QuantAlgebra> factors,
                     std::size_t max_size = default_max_product);

}  // namespace hspkit
