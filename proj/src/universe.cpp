#include "hspkit/universe.hpp"

#include <algorithm>

#include "hspkit/finalg.hpp"

namespace hspkit {

namespace {

bool match(const Term& pattern, const Term& t, std::vector<std::optional<Term>>& sigma) {
  if (pattern.is_var()) {
    auto& slot = sigma[pattern.var_index()];
    if (slot) return *slot == t;
    slot = t;
    return true;
  }
  if (t.is_var() || t.symbol() != pattern.symbol()) return false;
  for (std::size_t i = 0; i < t.children().size(); ++i)
    if (!match(pattern.children()[i], t.children()[i], sigma)) return false;
  return true;
}

}  // namespace

TermUniverse::TermUniverse(const Signature& sig, std::size_t num_vars, std::size_t depth,
                           std::size_t max_terms) {
  const std::size_t count = count_terms(sig, num_vars, depth);
  if (count > max_terms)
    throw Error(ErrorKind::size_limit_exceeded, "term universe has " + std::to_string(count) +
                                                    " terms, limit is " + std::to_string(max_terms));
  terms_ = enumerate_terms(sig, num_vars, depth);
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
  args_.resize(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i)
    for (const Term& c : terms_[i].children()) args_[i].push_back(index_.at(c));
}

std::optional<std::size_t> TermUniverse::find(const Term& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void TermUniverse::for_each_instance(const Term& lhs, const Term& rhs, std::size_t num_vars, std::size_t& work,
                                     std::size_t max_work,
                                     const std::function<void(std::size_t, std::size_t, Substitution)>& fn) const {
  // Match the side whose variables cover the other's when possible; any
  // variables left over range over the whole universe.
  const auto lv = vars_of(lhs), rv = vars_of(rhs);
  const bool lhs_first = std::includes(lv.begin(), lv.end(), rv.begin(), rv.end()) ||
                         !std::includes(rv.begin(), rv.end(), lv.begin(), lv.end());
  const Term& primary = lhs_first ? lhs : rhs;
  const auto& primary_vars = lhs_first ? lv : rv;
  std::vector<VarId> extra;
  for (VarId v : lhs_first ? rv : lv)
    if (!std::binary_search(primary_vars.begin(), primary_vars.end(), v)) extra.push_back(v);

  auto charge = [&] {
    if (++work > max_work) throw Error(ErrorKind::size_limit_exceeded, "too many candidate hypothesis instances");
  };
  std::vector<std::optional<Term>> sigma(num_vars);
  for (const Term& u : terms_) {
    charge();
    std::fill(sigma.begin(), sigma.end(), std::nullopt);
    if (!match(primary, u, sigma)) continue;
    for_each_tuple(terms_.size(), extra.size(), [&](std::span<const Element> pick) {
      if (!extra.empty()) charge();
      for (std::size_t i = 0; i < extra.size(); ++i) sigma[extra[i]] = terms_[pick[i]];
      Substitution sub;
      for (VarId v = 0; v < sigma.size(); ++v)
        if (sigma[v]) sub.emplace(v, *sigma[v]);
      const auto l = find(substitute(lhs, sub));
      const auto r = find(substitute(rhs, sub));
      if (l && r) fn(*l, *r, std::move(sub));
    });
  }
}

}  // namespace hspkit
