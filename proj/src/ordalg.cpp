#include "hspkit/ordalg.hpp"

#include <algorithm>

namespace hspkit {

Relation Relation::identity(std::size_t n) {
  Relation r(n);
  for (Element a = 0; a < n; ++a) r.insert(a, a);
  return r;
}

Relation Relation::total(std::size_t n) {
  Relation r(n);
  std::fill(r.bits_.begin(), r.bits_.end(), 1);
  return r;
}

Relation Relation::from_pairs(std::size_t n, std::span<const std::pair<Element, Element>> pairs) {
  Relation r(n);
  for (auto [a, b] : pairs) {
    if (a >= n || b >= n) throw Error(ErrorKind::invalid_argument, "relation pair outside the carrier");
    r.insert(a, b);
  }
  return r;
}

bool Relation::insert(Element a, Element b) {
  auto& bit = bits_[a * n_ + b];
  if (bit) return false;
  bit = 1;
  return true;
}

bool Relation::is_reflexive() const {
  for (Element a = 0; a < n_; ++a)
    if (!(*this)(a, a)) return false;
  return true;
}

bool Relation::is_transitive() const {
  for (Element a = 0; a < n_; ++a)
    for (Element b = 0; b < n_; ++b)
      if ((*this)(a, b))
        for (Element c = 0; c < n_; ++c)
          if ((*this)(b, c) && !(*this)(a, c)) return false;
  return true;
}

bool Relation::is_antisymmetric() const {
  for (Element a = 0; a < n_; ++a)
    for (Element b = a + 1; b < n_; ++b)
      if ((*this)(a, b) && (*this)(b, a)) return false;
  return true;
}

bool Relation::contains(const Relation& other) const {
  if (other.n_ != n_) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (other.bits_[i] && !bits_[i]) return false;
  return true;
}

Relation Relation::inverse() const {
  Relation r(n_);
  for (Element a = 0; a < n_; ++a)
    for (Element b = 0; b < n_; ++b)
      if ((*this)(a, b)) r.insert(b, a);
  return r;
}

bool Relation::close_transitively() {
  bool changed = false;
  for (Element k = 0; k < n_; ++k)
    for (Element a = 0; a < n_; ++a)
      if ((*this)(a, k))
        for (Element b = 0; b < n_; ++b)
          if ((*this)(k, b)) changed |= insert(a, b);
  return changed;
}

std::vector<std::pair<Element, Element>> Relation::pairs() const {
  std::vector<std::pair<Element, Element>> out;
  for (Element a = 0; a < n_; ++a)
    for (Element b = 0; b < n_; ++b)
      if ((*this)(a, b)) out.emplace_back(a, b);
  return out;
}

namespace {

// Calls fn(f(args), f(args with position i replaced by b)) for every
// operation, argument tuple, position and b with args[i] r b. Stops when fn
// returns false.
template <class Fn>
bool for_each_monotone_pair(const FiniteAlgebra& alg, const Relation& r, Fn&& fn) {
  const Signature& sig = alg.signature();
  bool keep_going = true;
  std::vector<Element> moved;
  for (SymbolId s = 0; s < sig.size() && keep_going; ++s) {
    for_each_tuple(alg.size(), sig.arity(s), [&](std::span<const Element> args) {
      if (!keep_going) return;
      const Element base = alg.apply(s, args);
      moved.assign(args.begin(), args.end());
      for (std::size_t i = 0; i < args.size() && keep_going; ++i) {
        for (Element b = 0; b < alg.size() && keep_going; ++b) {
          if (b == args[i] || !r(args[i], b)) continue;
          moved[i] = b;
          keep_going = fn(base, alg.apply(s, moved));
        }
        moved[i] = args[i];
      }
    });
  }
  return keep_going;
}

}  // namespace

bool is_monotone(const FiniteAlgebra& alg, const Relation& r) {
  if (r.size() != alg.size()) throw Error(ErrorKind::invalid_argument, "relation size differs from carrier");
  return for_each_monotone_pair(alg, r, [&](Element lo, Element hi) { return r(lo, hi); });
}

OrderedAlgebra::OrderedAlgebra(FiniteAlgebra base, Relation leq) : base_(std::move(base)), leq_(std::move(leq)) {
  if (leq_.size() != base_.size()) throw Error(ErrorKind::invalid_argument, "order size differs from carrier");
  if (!leq_.is_partial_order()) throw Error(ErrorKind::invalid_argument, "order is not a partial order");
  if (!is_monotone(base_, leq_)) throw Error(ErrorKind::invalid_argument, "operations are not monotone");
}

OrderedAlgebra::OrderedAlgebra(FiniteAlgebra base)
    : base_(std::move(base)), leq_(Relation::identity(base_.size())) {}

bool is_stable_preorder(const OrderedAlgebra& alg, const Relation& r) {
  return r.size() == alg.size() && r.is_preorder() && r.contains(alg.leq()) && is_monotone(alg.base(), r);
}

StablePreorder stable_preorder_generated(const OrderedAlgebra& alg,
                                         std::span<const std::pair<Element, Element>> pairs) {
  Relation r = alg.leq();
  for (auto [a, b] : pairs) {
    if (a >= alg.size() || b >= alg.size())
      throw Error(ErrorKind::invalid_argument, "pair outside the carrier");
    r.insert(a, b);
  }
  for (bool changed = true; changed;) {
    changed = r.close_transitively();
    std::vector<std::pair<Element, Element>> missing;
    for_each_monotone_pair(alg.base(), r, [&](Element lo, Element hi) {
      if (!r(lo, hi)) missing.emplace_back(lo, hi);
      return true;
    });
    for (auto [a, b] : missing) changed |= r.insert(a, b);
  }
  return r;
}

OrderedQuotient quotient_ordered(const OrderedAlgebra& alg, const StablePreorder& r) {
  if (!is_stable_preorder(alg, r)) throw Error(ErrorKind::not_stable, "relation is not a stable preorder");
  const std::size_t n = alg.size();
  std::vector<std::size_t> labels(n);
  for (Element a = 0; a < n; ++a) {
    labels[a] = a;
    for (Element b = 0; b < a; ++b)
      if (r(a, b) && r(b, a)) {
        labels[a] = labels[b];
        break;
      }
  }
  Quotient q = quotient(alg.base(), Partition::from_labels(labels));
  Relation order(q.algebra.size());
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      if (r(a, b)) order.insert(q.surjection[a], q.surjection[b]);
  return {OrderedAlgebra(std::move(q.algebra), std::move(order)), std::move(q.surjection)};
}

Relation induced_preorder(std::span<const Element> map, const OrderedAlgebra& cod) {
  Relation r(map.size());
  for (Element a = 0; a < map.size(); ++a)
    for (Element b = 0; b < map.size(); ++b)
      if (cod.leq()(map[a], map[b])) r.insert(a, b);
  return r;
}

SatisfactionResult satisfies_inequation(const OrderedAlgebra& alg, const TermInequation& ineq) {
  check_equation(ineq, alg.signature());
  SatisfactionResult result;
  for_each_assignment(alg.size(), ineq.vars.size(), [&](std::span<const Element> h) {
    if (alg.leq()(evaluate(ineq.lhs, alg, h), evaluate(ineq.rhs, alg, h))) return true;
    result.holds = false;
    result.counterexample.emplace(h.begin(), h.end());
    return false;
  });
  return result;
}

OrderedSubalgebra subalgebra_generated(const OrderedAlgebra& alg, std::span<const Element> generators) {
  Subalgebra sub = subalgebra_generated(alg.base(), generators);
  const std::size_t m = sub.inclusion.size();
  Relation order(m);
  for (Element a = 0; a < m; ++a)
    for (Element b = 0; b < m; ++b)
      if (alg.leq()(sub.inclusion[a], sub.inclusion[b])) order.insert(a, b);
  return {OrderedAlgebra(std::move(sub.algebra), std::move(order)), std::move(sub.inclusion)};
}

OrderedAlgebra product(const Signature& sig, std::span<const OrderedAlgebra> factors, std::size_t max_size) {
  std::vector<FiniteAlgebra> bases;
  for (const OrderedAlgebra& f : factors) bases.push_back(f.base());
  ProductAlgebra p = product(sig, bases, max_size);
  const std::size_t n = p.algebra.size();
  Relation order(n);
  for (Element a = 0; a < n; ++a) {
    const auto da = p.decode(a);
    for (Element b = 0; b < n; ++b) {
      const auto db = p.decode(b);
      bool below = true;
      for (std::size_t i = 0; i < factors.size() && below; ++i) below = factors[i].leq()(da[i], db[i]);
      if (below) order.insert(a, b);
    }
  }
  return OrderedAlgebra(std::move(p.algebra), std::move(order));
}

}  // namespace hspkit
