#pragma once

// Ordered algebras: monotone operations over a partial order, stable
// preorders and the quotients they induce, and term inequations.

#include <cstdint>
#include <utility>
#include <vector>

#include "hspkit/variety.hpp"

namespace hspkit {

// Dense boolean relation on {0..n-1}.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : n_(n), bits_(n * n, 0) {}

  static Relation identity(std::size_t n);
  static Relation total(std::size_t n);
  static Relation from_pairs(std::size_t n, std::span<const std::pair<Element, Element>> pairs);

  std::size_t size() const noexcept { return n_; }
  bool operator()(Element a, Element b) const { return bits_[a * n_ + b] != 0; }
  // Returns true when the pair was not there before.
  bool insert(Element a, Element b);

  bool is_reflexive() const;
  bool is_transitive() const;
  bool is_antisymmetric() const;
  bool is_preorder() const { return is_reflexive() && is_transitive(); }
  bool is_partial_order() const { return is_preorder() && is_antisymmetric(); }
  bool contains(const Relation& other) const;

  Relation inverse() const;
  // Warshall; returns true if anything was added.
  bool close_transitively();
  std::vector<std::pair<Element, Element>> pairs() const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

// True if every operation is monotone in each argument separately.
bool is_monotone(const FiniteAlgebra& alg, const Relation& r);

class OrderedAlgebra {
 public:
  OrderedAlgebra() = default;
  // Throws invalid_argument unless leq is a partial order and every
  // operation is monotone.
  OrderedAlgebra(FiniteAlgebra base, Relation leq);
  // The discrete order.
  explicit OrderedAlgebra(FiniteAlgebra base);

  const FiniteAlgebra& base() const noexcept { return base_; }
  const Relation& leq() const noexcept { return leq_; }
  const Signature& signature() const noexcept { return base_.signature(); }
  std::size_t size() const noexcept { return base_.size(); }
  Element apply(SymbolId s, std::span<const Element> args) const { return base_.apply(s, args); }

  friend bool operator==(const OrderedAlgebra&, const OrderedAlgebra&) = default;

 private:
  FiniteAlgebra base_;
  Relation leq_;
};

using StablePreorder = Relation;

// Preorder containing the order of A, with every operation monotone.
bool is_stable_preorder(const OrderedAlgebra& alg, const Relation& r);

StablePreorder stable_preorder_generated(const OrderedAlgebra& alg,
                                         std::span<const std::pair<Element, Element>> pairs);

struct OrderedQuotient {
  OrderedAlgebra algebra;
  ElementMap surjection;
};

// Blocks of r ∩ r^op ordered by r. Throws not_stable.
OrderedQuotient quotient_ordered(const OrderedAlgebra& alg, const StablePreorder& r);

// a ⪯ a' iff map(a) <= map(a') in the codomain.
Relation induced_preorder(std::span<const Element> map, const OrderedAlgebra& cod);

// Read as lhs <= rhs.
using TermInequation = TermEquation;

SatisfactionResult satisfies_inequation(const OrderedAlgebra& alg, const TermInequation& ineq);

struct OrderedSubalgebra {
  OrderedAlgebra algebra;
  ElementMap inclusion;
};

// Generated subalgebra with the restricted order.
OrderedSubalgebra subalgebra_generated(const OrderedAlgebra& alg, std::span<const Element> generators);

// Product with the componentwise order; element encoding as in product().
OrderedAlgebra product(const Signature& sig, std::span<const OrderedAlgebra> factors,
                       std::size_t max_size = default_max_product);

}  // namespace hspkit
