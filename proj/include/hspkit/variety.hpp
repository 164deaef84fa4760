#pragma once

// Equations, free algebras of finitely generated varieties, and deciding
// membership in HSP(A).

#include <optional>
#include <span>
#include <vector>

#include "hspkit/finalg.hpp"

namespace hspkit {

struct TermEquation {
  VarSet vars;
  Term lhs;
  Term rhs;

  friend bool operator==(const TermEquation&, const TermEquation&) = default;
};

using EquationSequence = std::vector<TermEquation>;

// Throws signature_mismatch / arity_mismatch / unknown_variable.
void check_equation(const TermEquation& eq, const Signature& sig);

std::string to_string(const TermEquation& eq, const Signature& sig);

struct SatisfactionResult {
  bool holds = true;
  // A failing assignment, indexed by variable, when holds is false.
  std::optional<std::vector<Element>> counterexample;

  explicit operator bool() const noexcept { return holds; }
};

// Calls fn(assignment) for every map vars -> carrier in row-major order
// (first variable most significant) until fn returns false.
template <class Fn>
void for_each_assignment(std::size_t carrier, std::size_t num_vars, Fn&& fn) {
  bool keep_going = true;
  for_each_tuple(carrier, num_vars, [&](std::span<const Element> h) {
    if (keep_going) keep_going = fn(h);
  });
}

SatisfactionResult satisfies_equation(const FiniteAlgebra& alg, const TermEquation& eq);

struct FreeAlgebraLimits {
  std::size_t max_coordinates = 1u << 16;  // |A|^n
  std::size_t max_elements = 4096;
};

// The subalgebra of A^(A^n) generated by the projection tuples, i.e. the
// free algebra on n generators of the variety generated by A.
struct FreeAlgebraWitness {
  FiniteAlgebra algebra;
  VarSet vars;
  // generators[i] is the element denoted by variable i.
  std::vector<Element> generators;
  // A least-depth term for each element, in discovery order.
  std::vector<Term> witness_terms;
  // Each element as its tuple of values over all assignments n -> A.
  std::vector<std::vector<Element>> coordinates;
};

FreeAlgebraWitness free_algebra_in_variety(const FiniteAlgebra& alg, std::size_t n,
                                           FreeAlgebraLimits limits = {});

struct HspResult {
  bool member = false;
  // When not a member: an identity of A that B violates ...
  std::optional<TermEquation> separating_identity;
  // ... together with the violating assignment in B.
  std::optional<std::vector<Element>> violating_assignment;
  // When a member: the free algebra and the surjection onto B.
  std::optional<FreeAlgebraWitness> free;
  std::optional<ElementMap> surjection;
  // Elements of B that the free generators are sent to.
  std::vector<Element> generator_images;
};

// Decides B in HSP(A). Generators of the free algebra are sent to every
// element of B in order; if that free algebra exceeds the limits, the search
// is repeated with a smallest generating set of B.
HspResult hsp_member(const FiniteAlgebra& candidate, const FiniteAlgebra& cls,
                     FreeAlgebraLimits limits = {});

// Least i0 such that every item from i0 on holds in A; nullopt when the last
// item fails. Empty sequences give 0.
std::optional<std::size_t> eventual_satisfaction(const FiniteAlgebra& alg,
                                                 const EquationSequence& seq);

// Smallest set of elements generating the whole algebra (lexicographically
// first among the smallest).
std::vector<Element> smallest_generating_set(const FiniteAlgebra& alg);

}  // namespace hspkit
