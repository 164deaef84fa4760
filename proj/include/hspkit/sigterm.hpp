#pragma once

// Signatures, variables and first-order terms.
//
// Terms are immutable and share structure: copying a Term copies a pointer.
// Every node caches its depth and a structural hash so that equality tests
// on large term universes stay cheap.

#include <compare>
#include <concepts>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hspkit/error.hpp"

namespace hspkit {

using SymbolId = std::size_t;
using VarId = std::size_t;
using Element = std::size_t;

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<Symbol> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  const Symbol& operator[](SymbolId id) const { return symbols_.at(id); }
  std::size_t arity(SymbolId id) const { return symbols_.at(id).arity; }
  const std::string& name(SymbolId id) const { return symbols_.at(id).name; }
  std::optional<SymbolId> find(std::string_view name) const;
  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  bool has_constants() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<Symbol> symbols_;
};

class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(std::vector<std::string> names);

  // x, y, z, u, v, w for up to six variables, x1..xn beyond that.
  static VarSet standard(std::size_t n);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(VarId id) const { return names_.at(id); }
  std::optional<VarId> find(std::string_view name) const;
  std::span<const std::string> names() const noexcept { return names_; }

  friend bool operator==(const VarSet&, const VarSet&) = default;

 private:
  std::vector<std::string> names_;
};

class Term {
 public:
  static Term var(VarId id);
  static Term app(SymbolId symbol, std::vector<Term> children = {});
  // Checks the child count against the signature.
  static Term app(const Signature& sig, SymbolId symbol,
                  std::vector<Term> children = {});

  bool is_var() const noexcept { return node_->is_var; }
  VarId var_index() const noexcept { return node_->index; }
  SymbolId symbol() const noexcept { return node_->index; }
  std::span<const Term> children() const noexcept { return node_->children; }
  std::size_t depth() const noexcept { return node_->depth; }
  std::size_t hash() const noexcept { return node_->hash; }

  friend bool operator==(const Term& a, const Term& b);
  // Variables precede applications; variables by index; applications by
  // symbol, then lexicographically on children.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    bool is_var;
    std::size_t index;
    std::vector<Term> children;
    std::size_t depth;
    std::size_t hash;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

using Substitution = std::map<VarId, Term>;

// Sorted, duplicate-free.
std::vector<VarId> vars_of(const Term& t);

// Throws arity_mismatch or signature_mismatch (unknown symbol) and
// unknown_variable (index outside the variable set).
void check_well_formed(const Term& t, const Signature& sig, std::size_t num_vars);

Term substitute(const Term& t, const Substitution& sub);

// Renames variables to 0, 1, ... in order of first occurrence. `renaming`
// carries state across calls so both sides of an equation share it.
Term normalize_vars(const Term& t, std::map<VarId, VarId>& renaming);

template <class A>
concept TermInterpretation = requires(const A& alg, SymbolId s,
                                      std::span<const Element> args) {
  { alg.signature() } -> std::convertible_to<const Signature&>;
  { alg.size() } -> std::convertible_to<std::size_t>;
  { alg.apply(s, args) } -> std::convertible_to<Element>;
};

// Value of the homomorphic extension of `assignment` at `t`.
template <TermInterpretation A>
Element evaluate(const Term& t, const A& alg, std::span<const Element> assignment) {
  if (t.is_var()) {
    if (t.var_index() >= assignment.size())
      throw Error(ErrorKind::unknown_variable,
                  "no value assigned to variable #" + std::to_string(t.var_index()));
    return assignment[t.var_index()];
  }
  const Signature& sig = alg.signature();
  if (t.symbol() >= sig.size() || sig.arity(t.symbol()) != t.children().size())
    throw Error(ErrorKind::signature_mismatch, "term symbol not in algebra signature");
  std::vector<Element> args;
  args.reserve(t.children().size());
  for (const Term& c : t.children()) args.push_back(evaluate(c, alg, assignment));
  return alg.apply(t.symbol(), args);
}

// All terms of depth <= max_depth over variables 0..num_vars-1, sorted by
// the Term ordering. That order is variables first, then by symbol, then
// lexicographic on children, and coincides with building each level from
// the previous one.
std::vector<Term> enumerate_terms(const Signature& sig, std::size_t num_vars,
                                  std::size_t max_depth);

// Size of enumerate_terms(...), saturating at SIZE_MAX.
std::size_t count_terms(const Signature& sig, std::size_t num_vars,
                        std::size_t max_depth);

// Prefix syntax f(t1,...,tn). Bare identifiers are constants when declared
// 0-ary, variables otherwise. Symbol names may be any run of characters other
// than whitespace, parentheses and commas.
Term parse_term(std::string_view text, const Signature& sig, const VarSet& vars);

std::string to_string(const Term& t, const Signature& sig, const VarSet& vars);

}  // namespace hspkit
