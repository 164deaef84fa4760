#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "hsp_oracle.hpp"
#include "hspkit/variety.hpp"

using namespace hspkit;
using fixtures::z2;
using fixtures::z4;

namespace {

const Term x = Term::var(0);
const Term y = Term::var(1);
const Term z = Term::var(2);

Term m(Term a, Term b) { return Term::app(0, {std::move(a), std::move(b)}); }

TermEquation eq2(Term lhs, Term rhs) { return {VarSet::standard(2), std::move(lhs), std::move(rhs)}; }

// A handful of identities over one binary symbol, used for closure checks.
std::vector<TermEquation> sample_identities() {
  const VarSet xyz = VarSet::standard(3);
  return {
      eq2(m(x, y), m(y, x)),
      eq2(m(x, x), x),
      eq2(m(x, y), x),
      eq2(m(x, y), y),
      eq2(m(x, x), m(y, y)),
      {xyz, m(m(x, y), z), m(x, m(y, z))},
      {xyz, m(m(x, y), z), m(m(x, z), y)},
      eq2(m(x, m(x, y)), y),
  };
}

bool holds(const FiniteAlgebra& alg, const TermEquation& eq) { return satisfies_equation(alg, eq).holds; }

}  // namespace

TEST_CASE("satisfies_equation examples") {
  const TermEquation refl{VarSet::standard(1), x, x};
  CHECK(holds(z4(), refl));
  CHECK(holds(fixtures::left_zero(3), refl));

  CHECK(holds(z2(), eq2(m(x, y), m(y, x))));

  const auto lz = satisfies_equation(fixtures::left_zero(2), eq2(m(x, y), m(y, x)));
  CHECK_FALSE(lz.holds);
  REQUIRE(lz.counterexample.has_value());
  CHECK(*lz.counterexample == std::vector<Element>{0, 1});

  const FiniteAlgebra empty = subalgebra_generated(z2(), std::span<const Element>{}).algebra;
  CHECK(holds(empty, eq2(x, y)));

  const TermEquation unary{VarSet::standard(1), Term::app(0, {x}), x};
  CHECK_THROWS_AS(satisfies_equation(z2(), unary), Error);
  try {
    satisfies_equation(z2(), unary);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::signature_mismatch);
  }
}

TEST_CASE("free_algebra_in_variety examples") {
  const auto f1 = free_algebra_in_variety(z2(), 1);
  REQUIRE(f1.algebra.size() == 2);
  CHECK(f1.coordinates[0] == std::vector<Element>{0, 1});
  CHECK(f1.coordinates[1] == std::vector<Element>{0, 0});
  CHECK(f1.witness_terms[0] == x);
  CHECK(f1.witness_terms[1] == m(x, x));
  CHECK(f1.generators == std::vector<Element>{0});

  CHECK(free_algebra_in_variety(z2(), 0).algebra.size() == 0);

  const FiniteAlgebra one = fixtures::trivial(fixtures::binary_sig());
  for (std::size_t n = 1; n <= 4; ++n) CHECK(free_algebra_in_variety(one, n).algebra.size() == 1);

  // Known free spectra: left-zero semigroups give n elements, Z2 gives 2^n.
  CHECK(free_algebra_in_variety(fixtures::left_zero(2), 3).algebra.size() == 3);
  CHECK(free_algebra_in_variety(z2(), 3).algebra.size() == 8);
  CHECK(free_algebra_in_variety(fixtures::chain_meet(2), 3).algebra.size() == 7);

  FreeAlgebraLimits tight;
  tight.max_elements = 4;
  CHECK_THROWS_AS(free_algebra_in_variety(z2(), 3, tight), Error);
}

TEST_CASE("free algebra witnesses have least depth") {
  const auto f = free_algebra_in_variety(fixtures::nand2(), 2);
  const Signature& sig = f.algebra.signature();
  for (std::size_t d = 0; d <= 3; ++d)
    for (const Term& t : enumerate_terms(sig, 2, d)) {
      // Evaluate t in the free algebra under the generator assignment and
      // compare depth with the recorded witness.
      const Element e = evaluate(t, f.algebra, f.generators);
      CHECK(f.witness_terms[e].depth() <= t.depth());
    }
}

TEST_CASE("hsp_member examples") {
  CHECK(hsp_member(z4(), z4()).member);
  CHECK(hsp_member(fixtures::nand2(), fixtures::nand2()).member);

  const auto yes = hsp_member(z2(), z4());
  CHECK(yes.member);
  REQUIRE(yes.surjection.has_value());
  CHECK(is_homomorphism(*yes.surjection, yes.free->algebra, z2()));
  CHECK(is_surjective(*yes.surjection, 2));
  bool via_quotient = false;
  for (const Congruence& theta : all_congruences(z4()))
    via_quotient = via_quotient || find_isomorphism(quotient(z4(), theta).algebra, z2()).has_value();
  CHECK(via_quotient);

  const auto no = hsp_member(z4(), z2());
  CHECK_FALSE(no.member);
  REQUIRE(no.separating_identity.has_value());
  const TermEquation& cert = *no.separating_identity;
  CHECK(to_string(cert, z2().signature()) == "m(x,x) = m(y,y)");
  CHECK(holds(z2(), cert));
  REQUIRE(no.violating_assignment.has_value());
  CHECK(evaluate(cert.lhs, z4(), *no.violating_assignment) !=
        evaluate(cert.rhs, z4(), *no.violating_assignment));
  const std::vector<Element> assignment{1, 0, 0, 0};
  CHECK(evaluate(cert.lhs, z4(), assignment) != evaluate(cert.rhs, z4(), assignment));

  CHECK_THROWS_AS(hsp_member(z2(), fixtures::discrete_set(2)), Error);
}

TEST_CASE("hsp_member falls back to a generating set when |B| generators are too many") {
  FreeAlgebraLimits limits;
  limits.max_coordinates = 8;  // 2^2 assignments fit, 2^4 do not
  const FiniteAlgebra z2sq = product(fixtures::binary_sig(), std::vector<FiniteAlgebra>{z2(), z2()}).algebra;
  const auto r = hsp_member(z2sq, z2(), limits);
  CHECK(r.member);
  CHECK(r.generator_images.size() == 2);
  CHECK(is_surjective(*r.surjection, 4));
}

TEST_CASE("eventual_satisfaction examples") {
  CHECK(eventual_satisfaction(z2(), {}) == std::optional<std::size_t>{0});
  CHECK(eventual_satisfaction(z2(), {eq2(x, y), eq2(m(x, y), m(y, x))}) == std::optional<std::size_t>{1});
  CHECK(eventual_satisfaction(z2(), {eq2(m(x, y), m(y, x)), eq2(x, y)}) == std::nullopt);
  CHECK(eventual_satisfaction(z2(), {eq2(m(x, y), m(y, x)), eq2(x, x)}) == std::optional<std::size_t>{0});
}

TEST_CASE("smallest_generating_set") {
  CHECK(smallest_generating_set(z4()) == std::vector<Element>{1});
  CHECK(smallest_generating_set(fixtures::left_zero(3)) == std::vector<Element>{0, 1, 2});
  CHECK(smallest_generating_set(fixtures::trivial(fixtures::binary_sig())) == std::vector<Element>{0});
}

TEST_CASE("identities survive quotients, subalgebras and products") {
  std::mt19937_64 rng(31);
  const auto ids = sample_identities();
  for (int iter = 0; iter < 40; ++iter) {
    const FiniteAlgebra alg = fixtures::random_algebra(rng, 1 + rng() % 4, {2});
    std::vector<TermEquation> valid;
    for (const auto& eq : ids)
      if (holds(alg, eq)) valid.push_back(eq);
    if (valid.empty()) continue;

    std::vector<FiniteAlgebra> derived;
    for (const Congruence& theta : all_congruences(alg)) derived.push_back(quotient(alg, theta).algebra);
    for (const FiniteAlgebra& s : fixtures::subalgebras(alg)) derived.push_back(s);
    derived.push_back(product(alg.signature(), std::vector<FiniteAlgebra>{alg, alg}).algebra);
    derived.push_back(product(alg.signature(), std::span<const FiniteAlgebra>{}).algebra);
    for (const FiniteAlgebra& d : derived)
      for (const auto& eq : valid) CHECK(holds(d, eq));
  }
}

TEST_CASE("free algebra universal property") {
  std::mt19937_64 rng(77);
  const std::vector<FiniteAlgebra> classes{z2(), fixtures::left_zero(2), fixtures::chain_meet(2),
                                           fixtures::nand2()};
  for (const FiniteAlgebra& a : classes) {
    const auto f = free_algebra_in_variety(a, 2);
    for (const FiniteAlgebra& b : classes) {
      if (!hsp_member(b, a).member) continue;
      for (Element g0 = 0; g0 < b.size(); ++g0)
        for (Element g1 = 0; g1 < b.size(); ++g1) {
          const std::vector<Element> images{g0, g1};
          ElementMap h(f.algebra.size());
          for (Element e = 0; e < h.size(); ++e) h[e] = evaluate(f.witness_terms[e], b, images);
          CHECK(is_homomorphism(h, f.algebra, b));
          CHECK(h[f.generators[0]] == g0);
          CHECK(h[f.generators[1]] == g1);
        }
    }
  }
}

TEST_CASE("hsp_member agrees with explicit closure search") {
  const std::vector<FiniteAlgebra> corpus{
      fixtures::trivial(fixtures::binary_sig()), z2(), fixtures::cyclic(3), fixtures::left_zero(2),
      fixtures::right_zero(2), fixtures::chain_meet(2), fixtures::nand2(), fixtures::null2()};
  for (const FiniteAlgebra& a : corpus)
    for (const FiniteAlgebra& b : corpus) {
      const auto r = hsp_member(b, a);
      CHECK(r.member == fixtures::in_hs_p2(b, a));
      if (!r.member) {
        CHECK(holds(a, *r.separating_identity));
        CHECK_FALSE(holds(b, *r.separating_identity));
      }
    }
}

TEST_CASE("hsp_member is transitive on sampled triples") {
  std::mt19937_64 rng(99);
  std::vector<FiniteAlgebra> pool{z2(), fixtures::left_zero(2), fixtures::chain_meet(2),
                                  fixtures::null2(), fixtures::trivial(fixtures::binary_sig())};
  for (int i = 0; i < 6; ++i) pool.push_back(fixtures::random_groupoid(rng, 2));
  std::size_t chains = 0;
  for (const auto& a : pool)
    for (const auto& b : pool) {
      if (!hsp_member(b, a).member) continue;
      for (const auto& c : pool)
        if (hsp_member(c, b).member) {
          ++chains;
          CHECK(hsp_member(c, a).member);
        }
    }
  CHECK(chains > pool.size());
}
