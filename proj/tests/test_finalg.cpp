#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "hspkit/finalg.hpp"

using namespace hspkit;
using fixtures::z2;
using fixtures::z4;

namespace {

using Pairs = std::vector<std::pair<Element, Element>>;

}  // namespace

TEST_CASE("is_homomorphism examples") {
  CHECK(is_homomorphism(ElementMap{0, 1, 2, 3}, z4(), z4()));
  CHECK(is_homomorphism(ElementMap{0, 1, 0, 1}, z4(), z2()));
  CHECK_FALSE(is_homomorphism(ElementMap{1, 0}, z2(), z2()));
  CHECK_THROWS_AS(is_homomorphism(ElementMap{0, 0}, z2(), fixtures::discrete_set(2)), Error);
}

TEST_CASE("product examples") {
  const Signature sig = fixtures::binary_sig();
  const auto empty = product(sig, std::span<const FiniteAlgebra>{});
  CHECK(empty.algebra.size() == 1);
  CHECK(empty.algebra.table(0)[0] == 0);

  const std::vector<FiniteAlgebra> factors{z2(), z2()};
  const auto p = product(sig, factors);
  CHECK(p.algebra.size() == 4);
  for (const auto& proj : p.projections) CHECK(is_homomorphism(proj, p.algebra, z2()));

  // Pointwise table oracle: (1,0) + (0,1) = (1,1).
  const Element a = p.encode(std::vector<Element>{1, 0});
  const Element b = p.encode(std::vector<Element>{0, 1});
  const std::vector<Element> args{a, b};
  CHECK(p.decode(p.algebra.apply(0, args)) == std::vector<Element>{1, 1});
  for (Element x = 0; x < 4; ++x)
    for (Element y = 0; y < 4; ++y) {
      const auto dx = p.decode(x), dy = p.decode(y);
      const std::vector<Element> xy{x, y};
      CHECK(p.decode(p.algebra.apply(0, xy)) ==
            std::vector<Element>{(dx[0] + dy[0]) % 2, (dx[1] + dy[1]) % 2});
    }

  CHECK_THROWS_AS(product(sig, factors, 3), Error);
}

TEST_CASE("subalgebra_generated examples") {
  const std::vector<Element> all{0, 1, 2, 3};
  CHECK(subalgebra_generated(z4(), all).algebra == z4());

  const std::vector<Element> two{2};
  const auto sub = subalgebra_generated(z4(), two);
  CHECK(sub.inclusion == ElementMap{0, 2});
  CHECK(is_homomorphism(sub.inclusion, sub.algebra, z4()));

  const auto empty = subalgebra_generated(z2(), std::span<const Element>{});
  CHECK(empty.algebra.size() == 0);

  // Constants are always included.
  const FiniteAlgebra with_zero = FiniteAlgebra::from_function(
      Signature({{"0", 0}, {"+", 2}}), 4, [](SymbolId s, std::span<const Element> t) {
        return s == 0 ? Element(0) : (t[0] + t[1]) % 4;
      });
  CHECK(subalgebra_generated(with_zero, std::span<const Element>{}).inclusion == ElementMap{0});
}

TEST_CASE("congruence_generated examples") {
  CHECK(congruence_generated(z4(), Pairs{}) == Partition::discrete(4));
  const Pairs p02{{0, 2}};
  const Pairs p01{{0, 1}};
  CHECK(congruence_generated(z4(), p02) == Partition::from_blocks(4, {{0, 2}, {1, 3}}));
  CHECK(congruence_generated(z4(), p02) == fixtures::least_closed_partition(z4(), p02));
  CHECK(congruence_generated(z4(), p01) == Partition::total(4));
  CHECK(congruence_generated(z4(), p01) == fixtures::least_closed_partition(z4(), p01));
  CHECK(fixtures::all_partitions(4).size() == 15);
}

TEST_CASE("congruence_generated agrees with brute force on random small algebras") {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 60; ++iter) {
    const std::size_t n = 1 + rng() % 5;
    std::vector<std::size_t> arities;
    for (std::size_t i = 0, k = rng() % 3; i < k; ++i) arities.push_back(rng() % 3);
    const FiniteAlgebra alg = fixtures::random_algebra(rng, n, arities);
    Pairs pairs;
    for (std::size_t i = 0, k = rng() % 3; i < k; ++i) pairs.emplace_back(rng() % n, rng() % n);
    const Congruence c = congruence_generated(alg, pairs);
    CHECK(is_congruence(alg, c));
    for (auto [a, b] : pairs) CHECK(c.same_block(a, b));
    CHECK(c == fixtures::least_closed_partition(alg, pairs));
  }
}

TEST_CASE("quotient examples") {
  const auto id = quotient(z4(), Partition::discrete(4));
  CHECK(id.algebra == z4());

  const auto q = quotient(z4(), Partition::from_blocks(4, {{0, 2}, {1, 3}}));
  CHECK(q.algebra.size() == 2);
  CHECK(q.algebra == z2());
  CHECK(find_isomorphism(q.algebra, z2()).has_value());
  CHECK(kernel(q.surjection) == Partition::from_blocks(4, {{0, 2}, {1, 3}}));

  CHECK(quotient(z4(), Partition::total(4)).algebra.size() == 1);

  try {
    quotient(z4(), Partition::from_blocks(4, {{0, 1}, {2}, {3}}));
    FAIL("expected NotACongruence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_a_congruence);
  }
}

TEST_CASE("kernel examples") {
  CHECK(kernel(ElementMap{0, 1, 2, 3}) == Partition::discrete(4));
  CHECK(kernel(ElementMap{0, 1, 0, 1}) == Partition::from_blocks(4, {{0, 2}, {1, 3}}));
  CHECK(kernel(ElementMap{0, 0, 0, 0}) == Partition::total(4));
}

TEST_CASE("all_congruences examples") {
  CHECK(all_congruences(fixtures::discrete_set(2)).size() == 2);
  CHECK(all_congruences(fixtures::trivial(fixtures::binary_sig())).size() == 1);

  const auto cons = all_congruences(z4());
  REQUIRE(cons.size() == 3);
  CHECK(cons[0] == Partition::discrete(4));
  CHECK(cons[1] == Partition::from_blocks(4, {{0, 2}, {1, 3}}));
  CHECK(cons[2] == Partition::total(4));

  std::size_t brute = 0;
  for (const auto& p : fixtures::all_partitions(4)) brute += fixtures::closed_by_definition(z4(), p);
  CHECK(brute == 3);

  CHECK(all_congruences(fixtures::discrete_set(4)).size() == 15);
  CHECK_THROWS_AS(all_congruences(fixtures::discrete_set(9)), Error);
}

TEST_CASE("exactness: kernels of quotients and quotients of kernels") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 30; ++iter) {
    const FiniteAlgebra alg = fixtures::random_algebra(rng, 1 + rng() % 4, {2, 1});
    for (const Congruence& theta : all_congruences(alg)) {
      const auto q = quotient(alg, theta);
      CHECK(is_homomorphism(q.surjection, alg, q.algebra));
      CHECK(kernel(q.surjection) == theta);

      // A surjection with this kernel: relabel the quotient and check that
      // quotient(alg, kernel(e)) is isomorphic to its image.
      ElementMap relabel(q.algebra.size());
      for (Element b = 0; b < relabel.size(); ++b) relabel[b] = relabel.size() - 1 - b;
      const FiniteAlgebra image = FiniteAlgebra::from_function(
          alg.signature(), q.algebra.size(), [&](SymbolId s, std::span<const Element> t) {
            std::vector<Element> back(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) back[i] = relabel[t[i]];
            return relabel[q.algebra.apply(s, back)];
          });
      const ElementMap e = compose(relabel, q.surjection);
      REQUIRE(is_homomorphism(e, alg, image));
      CHECK(find_isomorphism(quotient(alg, kernel(e)).algebra, image).has_value());
    }
  }
}

TEST_CASE("homomorphism theorem: factorization iff kernel inclusion") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 30; ++iter) {
    const FiniteAlgebra alg = fixtures::random_algebra(rng, 1 + rng() % 4, {2});
    const auto cons = all_congruences(alg);
    for (const auto& te : cons)
      for (const auto& th : cons) {
        const auto e = quotient(alg, te);
        const auto h = quotient(alg, th);
        const auto l = factor_through(e.surjection, e.algebra.size(), h.surjection);
        CHECK(l.has_value() == te.refines(th));
        if (l) {
          CHECK(is_homomorphism(*l, e.algebra, h.algebra));
          CHECK(compose(*l, e.surjection) == h.surjection);
        }
      }
  }
}

TEST_CASE("homomorphisms compose: subalgebra inclusion then quotient") {
  const std::vector<Element> gens{2};
  const auto sub = subalgebra_generated(z4(), gens);
  const auto q = quotient(z4(), Partition::from_blocks(4, {{0, 2}, {1, 3}}));
  CHECK(is_homomorphism(compose(q.surjection, sub.inclusion), sub.algebra, q.algebra));
}

TEST_CASE("find_isomorphism") {
  CHECK(find_isomorphism(fixtures::left_zero(2), fixtures::right_zero(2)) == std::nullopt);
  const FiniteAlgebra swapped = FiniteAlgebra::from_function(
      fixtures::binary_sig(), 2, [](SymbolId, std::span<const Element> t) {
        return Element(1 - std::min(1 - t[0], 1 - t[1]));
      });
  const auto iso = find_isomorphism(fixtures::chain_meet(2), swapped);
  REQUIRE(iso.has_value());
  CHECK(*iso == ElementMap{1, 0});
}
