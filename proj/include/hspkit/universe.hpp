#pragma once

// The finite set of terms up to a depth, indexed, with the hypothesis
// instances that stay inside it. Shared by both deduction systems.

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hspkit/sigterm.hpp"

namespace hspkit {

class TermUniverse {
 public:
  // Throws size_limit_exceeded when there are more than max_terms terms.
  TermUniverse(const Signature& sig, std::size_t num_vars, std::size_t depth, std::size_t max_terms);

  std::size_t size() const noexcept { return terms_.size(); }
  const Term& term(std::size_t i) const { return terms_[i]; }
  std::span<const Term> terms() const noexcept { return terms_; }
  // Indices of the immediate subterms, which are always in the universe.
  std::span<const std::size_t> args(std::size_t i) const { return args_[i]; }
  std::optional<std::size_t> find(const Term& t) const;

  // Calls fn(l, r, sigma) for each substitution sigma of the variables of
  // lhs and rhs with sigma(lhs) = term l and sigma(rhs) = term r both in the
  // universe. `work` counts candidates examined across calls; exceeding
  // max_work throws size_limit_exceeded.
  void for_each_instance(const Term& lhs, const Term& rhs, std::size_t num_vars, std::size_t& work,
                         std::size_t max_work,
                         const std::function<void(std::size_t, std::size_t, Substitution)>& fn) const;

 private:
  std::vector<Term> terms_;
  std::unordered_map<Term, std::size_t, TermHash> index_;
  std::vector<std::vector<std::size_t>> args_;
};

}  // namespace hspkit
