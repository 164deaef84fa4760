#include "hspkit/finalg.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace hspkit {

FiniteAlgebra::FiniteAlgebra(Signature sig, std::size_t size,
                             std::vector<std::vector<Element>> tables)
    : sig_(std::move(sig)), size_(size), tables_(std::move(tables)) {
  if (tables_.size() != sig_.size())
    throw Error(ErrorKind::malformed_input, "expected one table per symbol");
  for (SymbolId s = 0; s < sig_.size(); ++s) {
    std::size_t expected = 1;
    for (std::size_t i = 0; i < sig_.arity(s); ++i) expected *= size_;
    if (tables_[s].size() != expected)
      throw Error(ErrorKind::malformed_input,
                  "table of '" + sig_.name(s) + "' has " + std::to_string(tables_[s].size()) +
                      " entries, expected " + std::to_string(expected));
    for (Element e : tables_[s])
      if (e >= size_)
        throw Error(ErrorKind::malformed_input,
                    "table of '" + sig_.name(s) + "' leaves the carrier");
  }
}

void require_same_signature(const Signature& a, const Signature& b) {
  if (!(a == b)) throw Error(ErrorKind::signature_mismatch, "algebras have different signatures");
}

namespace {

void check_map(std::span<const Element> map, std::size_t dom, std::size_t cod) {
  if (map.size() != dom)
    throw Error(ErrorKind::invalid_argument, "map is not total on the domain");
  for (Element e : map)
    if (e >= cod) throw Error(ErrorKind::invalid_argument, "map leaves the codomain");
}

}  // namespace

bool is_homomorphism(std::span<const Element> map, const FiniteAlgebra& dom,
                     const FiniteAlgebra& cod) {
  require_same_signature(dom.signature(), cod.signature());
  check_map(map, dom.size(), cod.size());
  std::vector<Element> image;
  for (SymbolId s = 0; s < dom.signature().size(); ++s) {
    bool ok = true;
    for_each_tuple(dom.size(), dom.signature().arity(s), [&](std::span<const Element> t) {
      if (!ok) return;
      image.assign(t.size(), 0);
      for (std::size_t i = 0; i < t.size(); ++i) image[i] = map[t[i]];
      ok = map[dom.apply(s, t)] == cod.apply(s, image);
    });
    if (!ok) return false;
  }
  return true;
}

Partition::Partition(std::vector<Element> rep) : rep_(std::move(rep)), index_(rep_.size()) {
  std::vector<std::size_t> block_of_rep(rep_.size(), 0);
  for (Element a = 0; a < rep_.size(); ++a) {
    if (rep_[a] == a) block_of_rep[a] = block_count_++;
    index_[a] = block_of_rep[rep_[a]];
  }
}

Partition Partition::discrete(std::size_t n) {
  std::vector<Element> rep(n);
  std::iota(rep.begin(), rep.end(), Element{0});
  return Partition(std::move(rep));
}

Partition Partition::total(std::size_t n) { return Partition(std::vector<Element>(n, 0)); }

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  std::map<std::size_t, Element> first;
  std::vector<Element> rep(labels.size());
  for (Element a = 0; a < labels.size(); ++a)
    rep[a] = first.try_emplace(labels[a], a).first->second;
  return Partition(std::move(rep));
}

Partition Partition::from_blocks(std::size_t n, const std::vector<std::vector<Element>>& blocks) {
  DisjointSets ds(n);
  std::vector<bool> seen(n, false);
  for (const auto& block : blocks) {
    for (Element a : block) {
      if (a >= n || seen[a])
        throw Error(ErrorKind::malformed_input, "blocks do not form a partition");
      seen[a] = true;
      ds.unite(block.front(), a);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw Error(ErrorKind::malformed_input, "blocks do not cover the carrier");
  return ds.finalize();
}

std::vector<std::vector<Element>> Partition::blocks() const {
  std::vector<std::vector<Element>> out(block_count_);
  for (Element a = 0; a < rep_.size(); ++a) out[index_[a]].push_back(a);
  return out;
}

bool Partition::refines(const Partition& other) const {
  if (size() != other.size()) return false;
  for (Element a = 0; a < rep_.size(); ++a)
    if (!other.same_block(a, rep_[a])) return false;
  return true;
}

DisjointSets::DisjointSets(std::size_t n) : parent_(n) {
  std::iota(parent_.begin(), parent_.end(), Element{0});
}

Element DisjointSets::find(Element a) {
  Element root = a;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[a] != root) a = std::exchange(parent_[a], root);
  return root;
}

bool DisjointSets::unite(Element a, Element b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (b < a) std::swap(a, b);
  parent_[b] = a;
  return true;
}

Partition DisjointSets::finalize() {
  std::vector<Element> rep(parent_.size());
  for (Element a = 0; a < parent_.size(); ++a) rep[a] = find(a);
  return Partition(std::move(rep));
}

bool is_congruence(const FiniteAlgebra& alg, const Partition& theta) {
  if (theta.size() != alg.size()) return false;
  std::vector<Element> reps;
  for (SymbolId s = 0; s < alg.signature().size(); ++s) {
    bool ok = true;
    for_each_tuple(alg.size(), alg.signature().arity(s), [&](std::span<const Element> t) {
      if (!ok) return;
      reps.assign(t.size(), 0);
      for (std::size_t i = 0; i < t.size(); ++i) reps[i] = theta.representative(t[i]);
      ok = theta.same_block(alg.apply(s, t), alg.apply(s, reps));
    });
    if (!ok) return false;
  }
  return true;
}

Element ProductAlgebra::encode(std::span<const Element> components) const {
  Element e = 0;
  for (std::size_t i = 0; i < factor_sizes.size(); ++i) e = e * factor_sizes[i] + components[i];
  return e;
}

std::vector<Element> ProductAlgebra::decode(Element e) const {
  std::vector<Element> out(factor_sizes.size());
  for (std::size_t i = factor_sizes.size(); i-- > 0;) {
    out[i] = e % factor_sizes[i];
    e /= factor_sizes[i];
  }
  return out;
}

ProductAlgebra product(const Signature& sig, std::span<const FiniteAlgebra> factors,
                       std::size_t max_size) {
  ProductAlgebra out;
  std::size_t size = 1;
  for (const FiniteAlgebra& f : factors) {
    require_same_signature(sig, f.signature());
    out.factor_sizes.push_back(f.size());
    if (f.size() != 0 && size > max_size / f.size())
      throw Error(ErrorKind::size_limit_exceeded, "product exceeds carrier limit");
    size *= f.size();
  }
  if (size > max_size) throw Error(ErrorKind::size_limit_exceeded, "product exceeds carrier limit");

  std::vector<std::vector<Element>> decoded(size);
  for (Element e = 0; e < size; ++e) decoded[e] = out.decode(e);

  std::vector<Element> component_args;
  std::vector<Element> result(factors.size());
  out.algebra = FiniteAlgebra::from_function(sig, size, [&](SymbolId s, std::span<const Element> t) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      component_args.assign(t.size(), 0);
      for (std::size_t j = 0; j < t.size(); ++j) component_args[j] = decoded[t[j]][i];
      result[i] = factors[i].apply(s, component_args);
    }
    return out.encode(result);
  });
  for (std::size_t i = 0; i < factors.size(); ++i) {
    ElementMap proj(size);
    for (Element e = 0; e < size; ++e) proj[e] = decoded[e][i];
    out.projections.push_back(std::move(proj));
  }
  return out;
}

Subalgebra subalgebra_generated(const FiniteAlgebra& alg, std::span<const Element> generators) {
  const std::size_t n = alg.size();
  std::vector<bool> member(n, false);
  std::vector<Element> members;
  auto add = [&](Element a) {
    if (a >= n) throw Error(ErrorKind::invalid_argument, "generator outside the carrier");
    if (!member[a]) {
      member[a] = true;
      members.push_back(a);
    }
  };
  for (Element g : generators) add(g);
  for (SymbolId s = 0; s < alg.signature().size(); ++s)
    if (alg.signature().arity(s) == 0) add(alg.apply(s, {}));

  // Close under operations until no new elements appear.
  std::size_t known = 0;
  while (known != members.size()) {
    known = members.size();
    const std::vector<Element> snapshot = members;
    std::vector<Element> args;
    for (SymbolId s = 0; s < alg.signature().size(); ++s) {
      const std::size_t k = alg.signature().arity(s);
      if (k == 0) continue;
      for_each_tuple(snapshot.size(), k, [&](std::span<const Element> idx) {
        args.assign(k, 0);
        for (std::size_t i = 0; i < k; ++i) args[i] = snapshot[idx[i]];
        add(alg.apply(s, args));
      });
    }
  }

  Subalgebra out;
  for (Element a = 0; a < n; ++a)
    if (member[a]) out.inclusion.push_back(a);
  std::vector<Element> position(n, 0);
  for (std::size_t i = 0; i < out.inclusion.size(); ++i) position[out.inclusion[i]] = i;
  std::vector<Element> args;
  out.algebra = FiniteAlgebra::from_function(
      alg.signature(), out.inclusion.size(), [&](SymbolId s, std::span<const Element> t) {
        args.assign(t.size(), 0);
        for (std::size_t i = 0; i < t.size(); ++i) args[i] = out.inclusion[t[i]];
        return position[alg.apply(s, args)];
      });
  return out;
}

namespace {

// Unites images of componentwise-related tuples until nothing changes.
Partition saturate(const FiniteAlgebra& alg, DisjointSets& ds) {
  constexpr Element unset = std::numeric_limits<Element>::max();
  const std::size_t n = alg.size();
  bool changed = true;
  std::vector<Element> first_image;
  while (changed) {
    changed = false;
    for (SymbolId s = 0; s < alg.signature().size(); ++s) {
      const std::size_t k = alg.signature().arity(s);
      if (k == 0) continue;
      first_image.assign(alg.table(s).size(), unset);
      for_each_tuple(n, k, [&](std::span<const Element> t) {
        std::size_t key = 0;
        for (Element a : t) key = key * n + ds.find(a);
        const Element image = alg.apply(s, t);
        Element& slot = first_image[key];
        if (slot == unset) slot = image;
        else if (ds.unite(slot, image)) changed = true;
      });
    }
  }
  return ds.finalize();
}

}  // namespace

Congruence congruence_generated(const FiniteAlgebra& alg,
                                std::span<const std::pair<Element, Element>> pairs) {
  DisjointSets ds(alg.size());
  for (auto [a, b] : pairs) {
    if (a >= alg.size() || b >= alg.size())
      throw Error(ErrorKind::invalid_argument, "pair outside the carrier");
    ds.unite(a, b);
  }
  return saturate(alg, ds);
}

Congruence join(const FiniteAlgebra& alg, const Congruence& a, const Congruence& b) {
  DisjointSets ds(alg.size());
  for (Element x = 0; x < alg.size(); ++x) {
    ds.unite(x, a.representative(x));
    ds.unite(x, b.representative(x));
  }
  return saturate(alg, ds);
}

Quotient quotient(const FiniteAlgebra& alg, const Congruence& theta) {
  if (!is_congruence(alg, theta))
    throw Error(ErrorKind::not_a_congruence, "partition is not closed under the operations");
  Quotient out;
  out.surjection.resize(alg.size());
  std::vector<Element> reps;
  for (Element a = 0; a < alg.size(); ++a) {
    out.surjection[a] = theta.block_index(a);
    if (theta.representative(a) == a) reps.push_back(a);
  }
  std::vector<Element> args;
  out.algebra = FiniteAlgebra::from_function(
      alg.signature(), theta.block_count(), [&](SymbolId s, std::span<const Element> t) {
        args.assign(t.size(), 0);
        for (std::size_t i = 0; i < t.size(); ++i) args[i] = reps[t[i]];
        return theta.block_index(alg.apply(s, args));
      });
  return out;
}

Congruence kernel(std::span<const Element> map) { return Partition::from_labels(map); }

std::vector<Congruence> all_congruences(const FiniteAlgebra& alg, std::size_t max_size) {
  const std::size_t n = alg.size();
  if (n > max_size)
    throw Error(ErrorKind::size_limit_exceeded,
                "congruence lattice enumeration limited to carriers of size " +
                    std::to_string(max_size));
  std::vector<Congruence> principals;
  for (Element a = 0; a < n; ++a)
    for (Element b = a + 1; b < n; ++b) {
      std::pair<Element, Element> p{a, b};
      Congruence c = congruence_generated(alg, std::span(&p, 1));
      if (std::find(principals.begin(), principals.end(), c) == principals.end())
        principals.push_back(std::move(c));
    }

  // Every congruence is a join of principal ones.
  std::vector<Congruence> found{Partition::discrete(n)};
  std::set<std::vector<Element>> seen;
  auto key = [](const Congruence& c) {
    return std::vector<Element>(c.representatives().begin(), c.representatives().end());
  };
  seen.insert(key(found[0]));
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const Congruence& p : principals) {
      Congruence j = join(alg, found[i], p);
      if (seen.insert(key(j)).second) found.push_back(std::move(j));
    }
  }
  std::sort(found.begin(), found.end(), [&](const Congruence& a, const Congruence& b) {
    if (a.block_count() != b.block_count()) return a.block_count() > b.block_count();
    return key(a) < key(b);
  });
  return found;
}

namespace {

// Cheap isomorphism invariants per element: how often it occurs as an
// output of each table and whether it is idempotent for each operation.
std::vector<std::vector<std::size_t>> element_invariants(const FiniteAlgebra& alg) {
  const std::size_t n = alg.size();
  const std::size_t syms = alg.signature().size();
  std::vector<std::vector<std::size_t>> inv(n, std::vector<std::size_t>(2 * syms, 0));
  for (SymbolId s = 0; s < syms; ++s) {
    for (Element out : alg.table(s)) ++inv[out][2 * s];
    const std::size_t k = alg.signature().arity(s);
    if (k == 0) continue;
    for (Element a = 0; a < n; ++a) {
      std::vector<Element> diag(k, a);
      inv[a][2 * s + 1] = alg.apply(s, diag) == a ? 1 : 0;
    }
  }
  return inv;
}

class IsoSearch {
 public:
  IsoSearch(const FiniteAlgebra& a, const FiniteAlgebra& b)
      : a_(a), b_(b), map_(a.size(), unassigned), used_(b.size(), false),
        inv_a_(element_invariants(a)), inv_b_(element_invariants(b)) {}

  std::optional<ElementMap> run() {
    if (extend(0)) return map_;
    return std::nullopt;
  }

 private:
  static constexpr Element unassigned = std::numeric_limits<Element>::max();

  // Checks every table entry whose arguments and value are all assigned.
  bool consistent() const {
    std::vector<Element> image;
    for (SymbolId s = 0; s < a_.signature().size(); ++s) {
      bool ok = true;
      for_each_tuple(a_.size(), a_.signature().arity(s), [&](std::span<const Element> t) {
        if (!ok) return;
        image.assign(t.size(), 0);
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (map_[t[i]] == unassigned) return;
          image[i] = map_[t[i]];
        }
        const Element out = map_[a_.apply(s, t)];
        if (out == unassigned) return;
        ok = out == b_.apply(s, image);
      });
      if (!ok) return false;
    }
    return true;
  }

  bool extend(Element next) {
    if (next == a_.size()) return true;
    for (Element cand = 0; cand < b_.size(); ++cand) {
      if (used_[cand] || inv_a_[next] != inv_b_[cand]) continue;
      map_[next] = cand;
      used_[cand] = true;
      if (consistent() && extend(next + 1)) return true;
      used_[cand] = false;
      map_[next] = unassigned;
    }
    return false;
  }

  const FiniteAlgebra& a_;
  const FiniteAlgebra& b_;
  ElementMap map_;
  std::vector<bool> used_;
  std::vector<std::vector<std::size_t>> inv_a_;
  std::vector<std::vector<std::size_t>> inv_b_;
};

}  // namespace

std::optional<ElementMap> find_isomorphism(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (!(a.signature() == b.signature()) || a.size() != b.size()) return std::nullopt;
  return IsoSearch(a, b).run();
}

std::optional<ElementMap> factor_through(std::span<const Element> e, std::size_t e_codomain,
                                         std::span<const Element> h) {
  if (e.size() != h.size()) throw Error(ErrorKind::invalid_argument, "maps have different domains");
  constexpr Element unset = std::numeric_limits<Element>::max();
  ElementMap l(e_codomain, unset);
  for (Element a = 0; a < e.size(); ++a) {
    if (e[a] >= e_codomain) throw Error(ErrorKind::invalid_argument, "map leaves the codomain");
    if (l[e[a]] == unset) l[e[a]] = h[a];
    else if (l[e[a]] != h[a]) return std::nullopt;
  }
  for (Element& x : l)
    if (x == unset) x = 0;
  return l;
}

ElementMap compose(std::span<const Element> second, std::span<const Element> first) {
  ElementMap out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
  return out;
}

bool is_surjective(std::span<const Element> map, std::size_t codomain_size) {
  std::vector<bool> hit(codomain_size, false);
  for (Element e : map)
    if (e < codomain_size) hit[e] = true;
  return std::find(hit.begin(), hit.end(), false) == hit.end();
}

}  // namespace hspkit
