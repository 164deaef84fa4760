#pragma once

// Birkhoff's deduction system: proof trees, a checker, bounded proof search
// by congruence closure over a finite term universe, and semantic entailment
// by finite countermodel search.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hspkit/variety.hpp"

namespace hspkit {

enum class Rule { refl, sym, trans, cong, subst, axiom };

std::string_view to_string(Rule rule);
std::optional<Rule> parse_rule(std::string_view name);

struct Proof {
  Rule rule = Rule::refl;
  TermEquation conclusion;
  SymbolId symbol = 0;        // cong
  // subst: maps the premise's variables to terms over the conclusion's.
  Substitution substitution;
  std::size_t axiom = 0;      // axiom: index into the hypotheses
  std::vector<Proof> children;

  std::size_t node_count() const;
};

struct ProofCheck {
  bool ok = true;
  // Child indices from the root to the first rejected node.
  std::vector<std::size_t> path;
  std::string reason;

  explicit operator bool() const noexcept { return ok; }
};

// Throws malformed_proof, naming the node path, when the tree is not
// well-shaped: wrong child count, terms outside the signature or the node's
// variables, or an out-of-range axiom index. Otherwise reports the first
// node that is not a correct rule instance.
ProofCheck verify_proof(const Proof& p, const std::vector<TermEquation>& gamma, const Signature& sig);

inline bool check_proof(const Proof& p, const std::vector<TermEquation>& gamma, const Signature& sig) {
  return verify_proof(p, gamma, sig).ok;
}

// Equal up to a renaming of variables in first-occurrence order (lhs, then
// rhs), with identical variable sets.
bool alpha_equal(const TermEquation& a, const TermEquation& b);

struct DeriveLimits {
  std::size_t max_universe = 20000;
  // Cap on candidate matches examined while collecting axiom instances.
  std::size_t max_instance_work = 5'000'000;
};

// Closes the terms of depth <= `depth` over the goal's variables under all
// hypothesis instances that fit, and returns a proof if the goal's sides
// meet. Throws invalid_argument when the goal is deeper than `depth` and
// size_limit_exceeded when the universe is larger than the limit.
std::optional<Proof> derive(const std::vector<TermEquation>& gamma, const TermEquation& goal,
                            const Signature& sig, std::size_t depth, DeriveLimits limits = {});

struct Proved {
  Proof proof;
};

struct Refuted {
  FiniteAlgebra countermodel;
  std::vector<Element> assignment;
};

struct Unknown {
  std::size_t max_model_size = 0;
  std::size_t depth = 0;
  std::size_t universe_size = 0;
};

using EntailmentVerdict = std::variant<Proved, Refuted, Unknown>;

struct EntailmentLimits {
  std::size_t max_model_size = 3;
  // Total operation tables tried per carrier size.
  std::size_t max_tables = 20'000'000;
  DeriveLimits derive;
};

// Looks for the lexicographically least countermodel (concatenated tables,
// carriers 1..max_model_size, one table per isomorphism class), then for a
// derivation at the given depth.
EntailmentVerdict semantic_entails(const std::vector<TermEquation>& gamma, const TermEquation& goal,
                                   const Signature& sig, std::size_t depth,
                                   EntailmentLimits limits = {});

// Calls fn(algebra) for each algebra of the given size whose tables are
// lexicographically least among their isomorphic copies, in increasing
// order, until fn returns false. Throws size_limit_exceeded when there are
// more than max_tables raw tables of this size.
void for_each_canonical_algebra(const Signature& sig, std::size_t n, std::size_t max_tables,
                                const std::function<bool(const FiniteAlgebra&)>& fn);

}  // namespace hspkit
