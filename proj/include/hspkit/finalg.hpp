#pragma once

// Finite algebras over a signature, homomorphisms, and the correspondence
// between congruences and quotients.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hspkit/sigterm.hpp"

namespace hspkit {

using ElementMap = std::vector<Element>;

// Row-major position of (a_1, ..., a_k) in a table over an n-element
// carrier: sum of a_i * n^(k-i).
inline std::size_t tuple_index(std::span<const Element> tuple, std::size_t n) {
  std::size_t index = 0;
  for (Element a : tuple) index = index * n + a;
  return index;
}

class FiniteAlgebra {
 public:
  FiniteAlgebra() = default;
  // tables[s] has size^arity(s) entries, each below size.
  FiniteAlgebra(Signature sig, std::size_t size, std::vector<std::vector<Element>> tables);

  template <class F>
  static FiniteAlgebra from_function(Signature sig, std::size_t size, F&& op);

  const Signature& signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return size_; }
  std::span<const Element> table(SymbolId s) const { return tables_.at(s); }
  const std::vector<std::vector<Element>>& tables() const noexcept { return tables_; }

  Element apply(SymbolId s, std::span<const Element> args) const {
    return tables_[s][tuple_index(args, size_)];
  }

  friend bool operator==(const FiniteAlgebra&, const FiniteAlgebra&) = default;

 private:
  Signature sig_;
  std::size_t size_ = 0;
  std::vector<std::vector<Element>> tables_;
};

// Calls `fn(tuple)` for every tuple in {0..n-1}^k in row-major order.
template <class Fn>
void for_each_tuple(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > 0 && n == 0) return;
  std::vector<Element> tuple(k, 0);
  while (true) {
    fn(std::span<const Element>(tuple));
    std::size_t pos = k;
    while (pos > 0) {
      if (++tuple[pos - 1] < n) break;
      tuple[--pos] = 0;
    }
    if (pos == 0) return;
  }
}

template <class F>
FiniteAlgebra FiniteAlgebra::from_function(Signature sig, std::size_t size, F&& op) {
  std::vector<std::vector<Element>> tables;
  for (SymbolId s = 0; s < sig.size(); ++s) {
    std::vector<Element> table;
    for_each_tuple(size, sig.arity(s), [&](std::span<const Element> t) {
      table.push_back(static_cast<Element>(op(s, t)));
    });
    tables.push_back(std::move(table));
  }
  return FiniteAlgebra(std::move(sig), size, std::move(tables));
}

// A homomorphism as a map together with its endpoints.
struct Homomorphism {
  FiniteAlgebra dom;
  FiniteAlgebra cod;
  ElementMap map;
};

void require_same_signature(const Signature& a, const Signature& b);

bool is_homomorphism(std::span<const Element> map, const FiniteAlgebra& dom,
                     const FiniteAlgebra& cod);

// Equivalence relation on {0..n-1}, stored as the least member of each
// element's block. Built through a disjoint-set forest and finalized, so the
// value is immutable and canonical: equal partitions compare equal.
class Partition {
 public:
  Partition() = default;
  static Partition discrete(std::size_t n);
  static Partition total(std::size_t n);
  // Elements with equal labels share a block.
  static Partition from_labels(std::span<const std::size_t> labels);
  static Partition from_blocks(std::size_t n, const std::vector<std::vector<Element>>& blocks);

  std::size_t size() const noexcept { return rep_.size(); }
  Element representative(Element a) const { return rep_.at(a); }
  bool same_block(Element a, Element b) const { return rep_.at(a) == rep_.at(b); }
  std::size_t block_count() const noexcept { return block_count_; }
  // Position of a's block when blocks are ordered by least element.
  std::size_t block_index(Element a) const { return index_.at(a); }
  std::vector<std::vector<Element>> blocks() const;
  std::span<const Element> representatives() const noexcept { return rep_; }

  // Every block of *this lies inside a block of other.
  bool refines(const Partition& other) const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.rep_ == b.rep_; }

 private:
  friend class DisjointSets;
  explicit Partition(std::vector<Element> rep);

  std::vector<Element> rep_;
  std::vector<std::size_t> index_;
  std::size_t block_count_ = 0;
};

using Congruence = Partition;

// Union-find with union towards the smaller root, used to build partitions.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  Element find(Element a);
  // True when a and b were in different sets.
  bool unite(Element a, Element b);
  Partition finalize();

 private:
  std::vector<Element> parent_;
};

bool is_congruence(const FiniteAlgebra& alg, const Partition& theta);

struct ProductAlgebra {
  FiniteAlgebra algebra;
  std::vector<ElementMap> projections;
  std::vector<std::size_t> factor_sizes;

  // Mixed radix with the first factor most significant.
  Element encode(std::span<const Element> components) const;
  std::vector<Element> decode(Element e) const;
};

inline constexpr std::size_t default_max_product = 1u << 16;

// Empty family yields the one-element algebra over `sig`.
ProductAlgebra product(const Signature& sig, std::span<const FiniteAlgebra> factors,
                       std::size_t max_size = default_max_product);

struct Subalgebra {
  FiniteAlgebra algebra;
  // Ascending; inclusion[i] is the element of the ambient algebra.
  ElementMap inclusion;
};

Subalgebra subalgebra_generated(const FiniteAlgebra& alg, std::span<const Element> generators);

Congruence congruence_generated(const FiniteAlgebra& alg,
                                std::span<const std::pair<Element, Element>> pairs);

// Least congruence containing both.
Congruence join(const FiniteAlgebra& alg, const Congruence& a, const Congruence& b);

struct Quotient {
  FiniteAlgebra algebra;
  ElementMap surjection;
};

Quotient quotient(const FiniteAlgebra& alg, const Congruence& theta);

Congruence kernel(std::span<const Element> map);

inline constexpr std::size_t default_max_lattice_carrier = 8;

// Sorted finest first (by block count, then by representatives), which is a
// linear extension of the refinement order.
std::vector<Congruence> all_congruences(const FiniteAlgebra& alg,
                                        std::size_t max_size = default_max_lattice_carrier);

// Bijection a -> b preserving all operations, found by backtracking with
// per-element invariants as a filter.
std::optional<ElementMap> find_isomorphism(const FiniteAlgebra& a, const FiniteAlgebra& b);

// l with h = l o e, provided h is constant on the fibers of e. Positions of
// l outside the image of e are 0.
std::optional<ElementMap> factor_through(std::span<const Element> e, std::size_t e_codomain,
                                         std::span<const Element> h);

ElementMap compose(std::span<const Element> second, std::span<const Element> first);

bool is_surjective(std::span<const Element> map, std::size_t codomain_size);

}  // namespace hspkit
