#pragma once

// Ordered algebras shared by the unit and acceptance suites.

#include <random>

#include "fixtures.hpp"
#include "hspkit/ordalg.hpp"

namespace fixtures {

inline Relation chain_order(std::size_t n) {
  Relation r(n);
  for (Element a = 0; a < n; ++a)
    for (Element b = a; b < n; ++b) r.insert(a, b);
  return r;
}

inline OrderedAlgebra chain(std::size_t n) { return OrderedAlgebra(discrete_set(n), chain_order(n)); }

// Two-element meet semilattice, 0 <= 1.
inline OrderedAlgebra sl2() { return OrderedAlgebra(chain_meet(2), chain_order(2)); }

inline OrderedAlgebra chain_meet_ordered(std::size_t n) { return OrderedAlgebra(chain_meet(n), chain_order(n)); }

// A random algebra with the discrete order, pushed through the quotient by
// the stable preorder generated from one random pair, so that the order is
// usually not discrete.
inline OrderedAlgebra random_ordered(std::mt19937_64& rng, std::size_t n, const std::vector<std::size_t>& arities) {
  const OrderedAlgebra discrete(random_algebra(rng, n, arities));
  const std::vector<std::pair<Element, Element>> pair{{rng() % n, rng() % n}};
  return quotient_ordered(discrete, stable_preorder_generated(discrete, pair)).algebra;
}

}  // namespace fixtures
