#pragma once

// Small algebras shared by the unit and acceptance suites.

#include <optional>
#include <random>
#include <vector>

#include "hspkit/finalg.hpp"

namespace fixtures {

using namespace hspkit;

inline Signature binary_sig(const char* name = "m") { return Signature({{name, 2}}); }

inline FiniteAlgebra cyclic(std::size_t n, const char* name = "m") {
  return FiniteAlgebra::from_function(binary_sig(name), n, [n](SymbolId, std::span<const Element> t) {
    return (t[0] + t[1]) % n;
  });
}

inline FiniteAlgebra z2() { return cyclic(2); }
inline FiniteAlgebra z3() { return cyclic(3); }
inline FiniteAlgebra z4() { return cyclic(4); }

// x*y = x
inline FiniteAlgebra left_zero(std::size_t n) {
  return FiniteAlgebra::from_function(binary_sig(), n,
                                      [](SymbolId, std::span<const Element> t) { return t[0]; });
}

inline FiniteAlgebra right_zero(std::size_t n) {
  return FiniteAlgebra::from_function(binary_sig(), n,
                                      [](SymbolId, std::span<const Element> t) { return t[1]; });
}

// Meet semilattice on the chain 0 < 1 < ... < n-1.
inline FiniteAlgebra chain_meet(std::size_t n) {
  return FiniteAlgebra::from_function(binary_sig(), n, [](SymbolId, std::span<const Element> t) {
    return std::min(t[0], t[1]);
  });
}

inline FiniteAlgebra nand2() {
  return FiniteAlgebra::from_function(binary_sig(), 2, [](SymbolId, std::span<const Element> t) {
    return Element(!(t[0] && t[1]));
  });
}

inline FiniteAlgebra null2() {
  return FiniteAlgebra::from_function(binary_sig(), 2,
                                      [](SymbolId, std::span<const Element>) { return Element(0); });
}

inline FiniteAlgebra trivial(const Signature& sig) {
  return FiniteAlgebra::from_function(sig, 1, [](SymbolId, std::span<const Element>) { return 0; });
}

inline FiniteAlgebra discrete_set(std::size_t n) { return FiniteAlgebra(Signature{}, n, {}); }

// Random algebra with the given arities; symbols named f0, f1, ...
inline FiniteAlgebra random_algebra(std::mt19937_64& rng, std::size_t n,
                                    const std::vector<std::size_t>& arities) {
  std::vector<Symbol> symbols;
  for (std::size_t i = 0; i < arities.size(); ++i)
    symbols.push_back({"f" + std::to_string(i), arities[i]});
  std::uniform_int_distribution<Element> pick(0, n - 1);
  return FiniteAlgebra::from_function(Signature(symbols), n,
                                      [&](SymbolId, std::span<const Element>) { return pick(rng); });
}

// Random binary operation over the same signature as the named groupoids.
inline FiniteAlgebra random_groupoid(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<Element> pick(0, n - 1);
  return FiniteAlgebra::from_function(binary_sig(), n,
                                      [&](SymbolId, std::span<const Element>) { return pick(rng); });
}

// All set partitions of {0..n-1}, as restricted growth strings.
inline std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  std::vector<std::size_t> labels(n, 0);
  auto rec = [&](auto&& self, std::size_t i, std::size_t max_label) -> void {
    if (i == n) {
      out.push_back(Partition::from_labels(labels));
      return;
    }
    for (std::size_t l = 0; l <= max_label + 1; ++l) {
      labels[i] = l;
      self(self, i + 1, std::max(max_label, l));
    }
  };
  if (n == 0) {
    out.push_back(Partition::discrete(0));
    return out;
  }
  labels[0] = 0;
  rec(rec, 1, 0);
  return out;
}

// Brute-force closure test straight from the definition: componentwise
// related argument tuples give related results.
inline bool closed_by_definition(const FiniteAlgebra& alg, const Partition& p) {
  const std::size_t n = alg.size();
  for (SymbolId s = 0; s < alg.signature().size(); ++s) {
    const std::size_t k = alg.signature().arity(s);
    bool ok = true;
    for_each_tuple(n, k, [&](std::span<const Element> a) {
      for_each_tuple(n, k, [&](std::span<const Element> b) {
        if (!ok) return;
        for (std::size_t i = 0; i < k; ++i)
          if (!p.same_block(a[i], b[i])) return;
        if (!p.same_block(alg.apply(s, a), alg.apply(s, b))) ok = false;
      });
    });
    if (!ok) return false;
  }
  return true;
}

// Least partition containing `pairs` that is closed by definition, found by
// scanning every partition of the carrier.
inline Partition least_closed_partition(const FiniteAlgebra& alg,
                                        const std::vector<std::pair<Element, Element>>& pairs) {
  std::optional<Partition> best;
  for (const Partition& p : all_partitions(alg.size())) {
    bool contains = true;
    for (auto [a, b] : pairs) contains = contains && p.same_block(a, b);
    if (!contains || !closed_by_definition(alg, p)) continue;
    if (!best || p.refines(*best)) best = p;
  }
  return *best;
}

// Every algebra of size n over sig, no isomorph pruning, in increasing
// lexicographic order of the concatenated tables.
inline std::vector<FiniteAlgebra> all_algebras(const Signature& sig, std::size_t n) {
  std::size_t entries = 0;
  for (const Symbol& s : sig.symbols()) {
    std::size_t e = 1;
    for (std::size_t i = 0; i < s.arity; ++i) e *= n;
    entries += e;
  }
  std::vector<FiniteAlgebra> out;
  for_each_tuple(n, entries, [&](std::span<const Element> flat) {
    std::vector<std::vector<Element>> tables;
    std::size_t pos = 0;
    for (const Symbol& s : sig.symbols()) {
      std::size_t e = 1;
      for (std::size_t i = 0; i < s.arity; ++i) e *= n;
      tables.emplace_back(flat.begin() + pos, flat.begin() + pos + e);
      pos += e;
    }
    out.emplace_back(sig, n, std::move(tables));
  });
  return out;
}

}  // namespace fixtures
