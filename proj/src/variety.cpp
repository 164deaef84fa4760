#include "hspkit/variety.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace hspkit {

void check_equation(const TermEquation& eq, const Signature& sig) {
  try {
    check_well_formed(eq.lhs, sig, eq.vars.size());
    check_well_formed(eq.rhs, sig, eq.vars.size());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::unknown_variable) throw;
    throw Error(ErrorKind::signature_mismatch, std::string("equation does not fit signature: ") + e.what());
  }
}

std::string to_string(const TermEquation& eq, const Signature& sig) {
  return to_string(eq.lhs, sig, eq.vars) + " = " + to_string(eq.rhs, sig, eq.vars);
}

SatisfactionResult satisfies_equation(const FiniteAlgebra& alg, const TermEquation& eq) {
  check_equation(eq, alg.signature());
  SatisfactionResult result;
  for_each_assignment(alg.size(), eq.vars.size(), [&](std::span<const Element> h) {
    if (evaluate(eq.lhs, alg, h) == evaluate(eq.rhs, alg, h)) return true;
    result.holds = false;
    result.counterexample.emplace(h.begin(), h.end());
    return false;
  });
  return result;
}

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<Element>& v) const noexcept {
    std::size_t h = v.size();
    for (Element e : v) h ^= e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

struct Collision {
  Term lhs;
  Term rhs;
};

// Breadth-first closure of the projection tuples inside A^(A^n). When a
// target algebra with generator images is supplied, every element also
// carries the value of its witness term in the target, and the first pair of
// terms that agree in A but not in the target is reported.
class FreeAlgebraBuilder {
 public:
  FreeAlgebraBuilder(const FiniteAlgebra& alg, std::size_t n, FreeAlgebraLimits limits,
                     const FiniteAlgebra* target = nullptr,
                     std::span<const Element> target_generators = {})
      : alg_(alg), n_(n), limits_(limits), target_(target),
        target_generators_(target_generators.begin(), target_generators.end()) {
    std::size_t m = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (alg.size() != 0 && m > limits.max_coordinates / alg.size())
        throw Error(ErrorKind::size_limit_exceeded, "too many coordinates for the free algebra");
      m *= alg.size();
    }
    if (m > limits.max_coordinates)
      throw Error(ErrorKind::size_limit_exceeded, "too many coordinates for the free algebra");
    for_each_tuple(alg.size(), n, [&](std::span<const Element> h) {
      assignments_.emplace_back(h.begin(), h.end());
    });
    results_.resize(alg.signature().size());
  }

  std::optional<Collision> run() {
    const std::size_t m = assignments_.size();
    witness_.reserve(64);
    for (VarId i = 0; i < n_; ++i) {
      std::vector<Element> coords(m);
      for (std::size_t j = 0; j < m; ++j) coords[j] = assignments_[j][i];
      const Element value = target_ ? target_generators_[i] : 0;
      auto [element, collision] = insert(std::move(coords), Term::var(i), value);
      if (collision) return collision;
      generators_.push_back(element);
    }

    const Signature& sig = alg_.signature();
    std::size_t frontier = 0;
    bool first_round = true;
    std::vector<Element> args, coords, target_args;
    while (true) {
      const std::size_t known = coordinates_.size();
      if (!first_round && frontier == known) break;
      for (SymbolId s = 0; s < sig.size(); ++s) {
        const std::size_t k = sig.arity(s);
        if (k == 0 && !first_round) continue;
        std::optional<Collision> found;
        for_each_tuple(known, k, [&](std::span<const Element> idx) {
          if (found) return;
          if (k > 0 && *std::max_element(idx.begin(), idx.end()) < frontier) return;
          coords.assign(m, 0);
          for (std::size_t j = 0; j < m; ++j) {
            args.assign(k, 0);
            for (std::size_t i = 0; i < k; ++i) args[i] = coordinates_[idx[i]][j];
            coords[j] = alg_.apply(s, args);
          }
          Element value = 0;
          if (target_) {
            target_args.assign(k, 0);
            for (std::size_t i = 0; i < k; ++i) target_args[i] = target_values_[idx[i]];
            value = target_->apply(s, target_args);
          }
          std::vector<Term> children;
          for (Element e : idx) children.push_back(witness_[e]);
          auto [element, collision] = insert(coords, Term::app(s, std::move(children)), value);
          if (collision) {
            found = std::move(collision);
            return;
          }
          results_[s].emplace_back(std::vector<Element>(idx.begin(), idx.end()), element);
        });
        if (found) return found;
      }
      first_round = false;
      frontier = known;
    }
    return std::nullopt;
  }

  FreeAlgebraWitness finish() {
    const std::size_t size = coordinates_.size();
    const Signature& sig = alg_.signature();
    std::vector<std::vector<Element>> tables(sig.size());
    for (SymbolId s = 0; s < sig.size(); ++s) {
      std::size_t entries = 1;
      for (std::size_t i = 0; i < sig.arity(s); ++i) entries *= size;
      tables[s].assign(entries, 0);
      if (results_[s].size() != entries)
        throw std::logic_error("free algebra closure left table entries undefined");
      for (const auto& [args, out] : results_[s]) tables[s][tuple_index(args, size)] = out;
    }
    FreeAlgebraWitness w{FiniteAlgebra(sig, size, std::move(tables)),
                         VarSet::standard(n_),
                         std::move(generators_),
                         std::move(witness_),
                         std::move(coordinates_)};
    for (Element e = 0; e < size; ++e)
      for (std::size_t j = 0; j < assignments_.size(); ++j)
        if (evaluate(w.witness_terms[e], alg_, assignments_[j]) != w.coordinates[e][j])
          throw std::logic_error("free algebra witness term does not evaluate to its element");
    return w;
  }

  std::vector<Element> target_values() const { return target_values_; }

 private:
  std::pair<Element, std::optional<Collision>> insert(std::vector<Element> coords, Term witness,
                                                      Element target_value) {
    auto it = index_.find(coords);
    if (it != index_.end()) {
      const Element e = it->second;
      if (target_ && target_values_[e] != target_value)
        return {e, Collision{witness_[e], std::move(witness)}};
      return {e, std::nullopt};
    }
    if (coordinates_.size() >= limits_.max_elements)
      throw Error(ErrorKind::size_limit_exceeded,
                  "free algebra exceeds " + std::to_string(limits_.max_elements) + " elements");
    const Element e = coordinates_.size();
    index_.emplace(coords, e);
    coordinates_.push_back(std::move(coords));
    witness_.push_back(std::move(witness));
    if (target_) target_values_.push_back(target_value);
    return {e, std::nullopt};
  }

  const FiniteAlgebra& alg_;
  std::size_t n_;
  FreeAlgebraLimits limits_;
  const FiniteAlgebra* target_;
  std::vector<Element> target_generators_;

  std::vector<std::vector<Element>> assignments_;
  std::vector<std::vector<Element>> coordinates_;
  std::unordered_map<std::vector<Element>, Element, VectorHash> index_;
  std::vector<Term> witness_;
  std::vector<Element> target_values_;
  std::vector<Element> generators_;
  std::vector<std::vector<std::pair<std::vector<Element>, Element>>> results_;
};

HspResult decide_with_generators(const FiniteAlgebra& candidate, const FiniteAlgebra& cls,
                                 std::vector<Element> gens, FreeAlgebraLimits limits) {
  FreeAlgebraBuilder builder(cls, gens.size(), limits, &candidate, gens);
  HspResult result;
  result.generator_images = gens;
  if (auto collision = builder.run()) {
    TermEquation eq{VarSet::standard(gens.size()), collision->lhs, collision->rhs};
    result.member = false;
    result.separating_identity = eq;
    result.violating_assignment = gens;
    return result;
  }
  result.member = true;
  result.surjection = builder.target_values();
  result.free = builder.finish();
  if (!is_homomorphism(*result.surjection, result.free->algebra, candidate) ||
      !is_surjective(*result.surjection, candidate.size()))
    throw std::logic_error("free algebra map onto the candidate is not a surjective homomorphism");
  return result;
}

}  // namespace

FreeAlgebraWitness free_algebra_in_variety(const FiniteAlgebra& alg, std::size_t n,
                                           FreeAlgebraLimits limits) {
  FreeAlgebraBuilder builder(alg, n, limits);
  builder.run();
  return builder.finish();
}

std::vector<Element> smallest_generating_set(const FiniteAlgebra& alg) {
  const std::size_t n = alg.size();
  auto generates = [&](std::span<const Element> gens) {
    return subalgebra_generated(alg, gens).algebra.size() == n;
  };
  if (n > 16) {
    std::vector<Element> gens;
    std::vector<Element> reached;
    for (Element a = 0; a < n; ++a) {
      if (std::binary_search(reached.begin(), reached.end(), a)) continue;
      gens.push_back(a);
      reached = subalgebra_generated(alg, gens).inclusion;
    }
    return gens;
  }
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<Element> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      if (generates(pick)) return pick;
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return {};
}

HspResult hsp_member(const FiniteAlgebra& candidate, const FiniteAlgebra& cls,
                     FreeAlgebraLimits limits) {
  require_same_signature(candidate.signature(), cls.signature());
  std::vector<Element> all(candidate.size());
  for (Element b = 0; b < all.size(); ++b) all[b] = b;
  try {
    return decide_with_generators(candidate, cls, all, limits);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::size_limit_exceeded) throw;
    std::vector<Element> gens = smallest_generating_set(candidate);
    if (gens.size() >= all.size()) throw;
    return decide_with_generators(candidate, cls, std::move(gens), limits);
  }
}

std::optional<std::size_t> eventual_satisfaction(const FiniteAlgebra& alg,
                                                 const EquationSequence& seq) {
  for (const TermEquation& eq : seq) check_equation(eq, alg.signature());
  std::size_t i0 = seq.size();
  while (i0 > 0 && satisfies_equation(alg, seq[i0 - 1]).holds) --i0;
  if (!seq.empty() && i0 == seq.size()) return std::nullopt;
  return i0;
}

}  // namespace hspkit
