#include "hspkit/eqlogic.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "hspkit/universe.hpp"

namespace hspkit {

namespace {

constexpr std::string_view kRuleNames[] = {"Refl", "Sym", "Trans", "Cong", "Subst", "Axiom"};

std::string path_string(const std::vector<std::size_t>& path) {
  std::string out = "root";
  for (std::size_t i : path) out += "/" + std::to_string(i);
  return out;
}

[[noreturn]] void malformed(const std::vector<std::size_t>& path, const std::string& what) {
  throw Error(ErrorKind::malformed_proof, "proof node " + path_string(path) + ": " + what);
}

std::size_t expected_children(const Proof& p, const Signature& sig, const std::vector<std::size_t>& path) {
  switch (p.rule) {
    case Rule::refl:
    case Rule::axiom:
      return 0;
    case Rule::sym:
    case Rule::subst:
      return 1;
    case Rule::trans:
      return 2;
    case Rule::cong:
      if (p.symbol >= sig.size()) malformed(path, "Cong names an unknown symbol");
      return sig.arity(p.symbol);
  }
  malformed(path, "unknown rule");
}

void check_structure(const Proof& p, const std::vector<TermEquation>& gamma, const Signature& sig,
                     std::vector<std::size_t>& path) {
  if (p.children.size() != expected_children(p, sig, path))
    malformed(path, std::string(to_string(p.rule)) + " has " + std::to_string(p.children.size()) +
                        " premises");
  try {
    check_equation(p.conclusion, sig);
  } catch (const Error& e) {
    malformed(path, std::string("conclusion is not well formed: ") + e.what());
  }
  if (p.rule == Rule::axiom && p.axiom >= gamma.size())
    malformed(path, "axiom index " + std::to_string(p.axiom) + " out of range");
  if (p.rule == Rule::subst) {
    for (const auto& [v, image] : p.substitution) {
      if (v >= p.children[0].conclusion.vars.size())
        malformed(path, "substitution binds a variable the premise does not have");
      try {
        check_well_formed(image, sig, p.conclusion.vars.size());
      } catch (const Error& e) {
        malformed(path, std::string("substitution image is not well formed: ") + e.what());
      }
    }
  }
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    path.push_back(i);
    check_structure(p.children[i], gamma, sig, path);
    path.pop_back();
  }
}

bool covers(const Substitution& sub, const Term& t) {
  for (VarId v : vars_of(t))
    if (!sub.contains(v)) return false;
  return true;
}

// Empty string when the node is a correct instance of its rule.
std::string rule_failure(const Proof& p, const std::vector<TermEquation>& gamma) {
  const TermEquation& c = p.conclusion;
  auto same_vars = [&] {
    return std::all_of(p.children.begin(), p.children.end(),
                       [&](const Proof& q) { return q.conclusion.vars == c.vars; });
  };
  switch (p.rule) {
    case Rule::refl:
      return c.lhs == c.rhs ? "" : "Refl needs identical sides";
    case Rule::sym: {
      const TermEquation& q = p.children[0].conclusion;
      if (!same_vars()) return "Sym changes the variable set";
      return q.lhs == c.rhs && q.rhs == c.lhs ? "" : "Sym does not flip its premise";
    }
    case Rule::trans: {
      const TermEquation& a = p.children[0].conclusion;
      const TermEquation& b = p.children[1].conclusion;
      if (!same_vars()) return "Trans changes the variable set";
      if (a.rhs != b.lhs) return "Trans premises do not share a middle term";
      return a.lhs == c.lhs && b.rhs == c.rhs ? "" : "Trans conclusion does not match its premises";
    }
    case Rule::cong: {
      if (!same_vars()) return "Cong changes the variable set";
      if (c.lhs.is_var() || c.rhs.is_var() || c.lhs.symbol() != p.symbol || c.rhs.symbol() != p.symbol)
        return "Cong conclusion is not headed by its symbol";
      for (std::size_t i = 0; i < p.children.size(); ++i) {
        const TermEquation& q = p.children[i].conclusion;
        if (c.lhs.children()[i] != q.lhs || c.rhs.children()[i] != q.rhs)
          return "Cong argument " + std::to_string(i) + " does not match its premise";
      }
      return "";
    }
    case Rule::subst: {
      const TermEquation& q = p.children[0].conclusion;
      if (!covers(p.substitution, q.lhs) || !covers(p.substitution, q.rhs))
        return "substitution does not bind every premise variable";
      if (substitute(q.lhs, p.substitution) != c.lhs || substitute(q.rhs, p.substitution) != c.rhs)
        return "Subst conclusion is not the substituted premise";
      return "";
    }
    case Rule::axiom:
      return alpha_equal(c, gamma[p.axiom]) ? "" : "Axiom conclusion is not the cited hypothesis";
  }
  return "unknown rule";
}

std::optional<ProofCheck> first_failure(const Proof& p, const std::vector<TermEquation>& gamma,
                                        std::vector<std::size_t>& path) {
  if (std::string why = rule_failure(p, gamma); !why.empty()) return ProofCheck{false, path, why};
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    path.push_back(i);
    auto failure = first_failure(p.children[i], gamma, path);
    path.pop_back();
    if (failure) return failure;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Rule rule) { return kRuleNames[static_cast<std::size_t>(rule)]; }

std::optional<Rule> parse_rule(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kRuleNames); ++i)
    if (kRuleNames[i] == name) return static_cast<Rule>(i);
  return std::nullopt;
}

std::size_t Proof::node_count() const {
  std::size_t n = 1;
  for (const Proof& c : children) n += c.node_count();
  return n;
}

bool alpha_equal(const TermEquation& a, const TermEquation& b) {
  if (a.vars != b.vars) return false;
  std::map<VarId, VarId> ra, rb;
  const Term al = normalize_vars(a.lhs, ra);
  const Term ar = normalize_vars(a.rhs, ra);
  const Term bl = normalize_vars(b.lhs, rb);
  const Term br = normalize_vars(b.rhs, rb);
  return al == bl && ar == br;
}

ProofCheck verify_proof(const Proof& p, const std::vector<TermEquation>& gamma, const Signature& sig) {
  std::vector<std::size_t> path;
  check_structure(p, gamma, sig, path);
  return first_failure(p, gamma, path).value_or(ProofCheck{});
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::size_t>& v) const noexcept {
    std::size_t h = v.size();
    for (std::size_t e : v) h ^= e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

Proof make_refl(const VarSet& vars, const Term& t) { return Proof{Rule::refl, {vars, t, t}, 0, {}, 0, {}}; }

Proof make_sym(Proof p) {
  TermEquation c{p.conclusion.vars, p.conclusion.rhs, p.conclusion.lhs};
  return Proof{Rule::sym, std::move(c), 0, {}, 0, {std::move(p)}};
}

Proof make_trans(Proof a, Proof b) {
  TermEquation c{a.conclusion.vars, a.conclusion.lhs, b.conclusion.rhs};
  std::vector<Proof> children;
  children.push_back(std::move(a));
  children.push_back(std::move(b));
  return Proof{Rule::trans, std::move(c), 0, {}, 0, std::move(children)};
}

// Congruence closure over a finite, subterm-closed universe. Every merge
// records why its two endpoints are equal, so that any derived equality can
// be turned back into a proof tree.
class ClosureEngine {
 public:
  ClosureEngine(const std::vector<TermEquation>& gamma, const VarSet& vars, const TermUniverse& universe)
      : gamma_(gamma), vars_(vars), u_(universe) {
    const std::size_t n = u_.size();
    uf_.resize(n);
    std::iota(uf_.begin(), uf_.end(), 0);
    parent_.assign(n, kNone);
    edge_.assign(n, kNone);
  }

  void add_axiom_instances(std::size_t max_work) {
    std::size_t work = 0;
    for (std::size_t g = 0; g < gamma_.size(); ++g)
      u_.for_each_instance(gamma_[g].lhs, gamma_[g].rhs, gamma_[g].vars.size(), work, max_work,
                           [&](std::size_t l, std::size_t r, Substitution sub) {
                             merge(l, r, Justification{l, r, false, g, std::move(sub)});
                           });
  }

  void close() {
    std::unordered_map<std::vector<std::size_t>, std::size_t, KeyHash> table;
    std::vector<std::size_t> key;
    bool changed = true;
    while (changed) {
      changed = false;
      table.clear();
      for (std::size_t t = 0; t < u_.size(); ++t) {
        if (u_.term(t).is_var()) continue;
        key.assign(1, u_.term(t).symbol());
        for (std::size_t a : u_.args(t)) key.push_back(find(a));
        auto [it, inserted] = table.try_emplace(key, t);
        if (!inserted && find(it->second) != find(t)) {
          merge(it->second, t, Justification{it->second, t, true, 0, {}});
          changed = true;
        }
      }
    }
  }

  bool same_class(std::size_t a, std::size_t b) { return find(a) == find(b); }

  Proof explain(std::size_t a, std::size_t b) const {
    if (a == b) return make_refl(vars_, u_.term(a));
    std::vector<std::size_t> up_a{a};
    for (std::size_t x = a; parent_[x] != kNone;) up_a.push_back(x = parent_[x]);
    std::vector<std::size_t> up_b{b};
    while (std::find(up_a.begin(), up_a.end(), up_b.back()) == up_a.end())
      up_b.push_back(parent_[up_b.back()]);
    const std::size_t lca = up_b.back();

    std::optional<Proof> acc;
    auto append = [&](Proof step) {
      acc = acc ? make_trans(std::move(*acc), std::move(step)) : std::move(step);
    };
    for (std::size_t x = a; x != lca; x = parent_[x]) append(step(x, parent_[x], edge_[x]));
    for (std::size_t i = up_b.size() - 1; i > 0; --i) {
      const std::size_t child = up_b[i - 1];
      append(step(up_b[i], child, edge_[child]));
    }
    return std::move(*acc);
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct Justification {
    std::size_t left;
    std::size_t right;
    bool congruence;
    std::size_t axiom;
    Substitution sigma;
  };

  std::size_t find(std::size_t a) {
    while (uf_[a] != a) a = uf_[a] = uf_[uf_[a]];
    return a;
  }

  void merge(std::size_t a, std::size_t b, Justification why) {
    const std::size_t ra = find(a), rb = find(b);
    if (ra == rb) return;
    // Make a the root of its proof tree, then hang it below b.
    std::size_t prev = kNone, prev_edge = kNone;
    for (std::size_t cur = a; cur != kNone;) {
      const std::size_t next = parent_[cur], next_edge = edge_[cur];
      parent_[cur] = prev;
      edge_[cur] = prev_edge;
      prev = cur;
      prev_edge = next_edge;
      cur = next;
    }
    parent_[a] = b;
    edge_[a] = justifications_.size();
    justifications_.push_back(std::move(why));
    uf_[std::max(ra, rb)] = std::min(ra, rb);
  }

  Proof step(std::size_t from, std::size_t to, std::size_t edge) const {
    const Justification& j = justifications_[edge];
    Proof p = justify(j);
    return j.left == from && j.right == to ? std::move(p) : make_sym(std::move(p));
  }

  Proof justify(const Justification& j) const {
    const Term& l = u_.term(j.left);
    const Term& r = u_.term(j.right);
    if (j.congruence) {
      std::vector<Proof> premises;
      for (std::size_t i = 0; i < u_.args(j.left).size(); ++i)
        premises.push_back(explain(u_.args(j.left)[i], u_.args(j.right)[i]));
      return Proof{Rule::cong, {vars_, l, r}, l.symbol(), {}, 0, std::move(premises)};
    }
    const TermEquation& g = gamma_[j.axiom];
    Proof axiom{Rule::axiom, g, 0, {}, j.axiom, {}};
    bool identity = g.vars == vars_;
    for (const auto& [v, image] : j.sigma) identity = identity && image == Term::var(v);
    if (identity) return axiom;
    return Proof{Rule::subst, {vars_, l, r}, 0, j.sigma, 0, {std::move(axiom)}};
  }

  const std::vector<TermEquation>& gamma_;
  VarSet vars_;
  const TermUniverse& u_;
  std::vector<std::size_t> uf_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> edge_;
  std::vector<Justification> justifications_;
};

}  // namespace

std::optional<Proof> derive(const std::vector<TermEquation>& gamma, const TermEquation& goal,
                            const Signature& sig, std::size_t depth, DeriveLimits limits) {
  check_equation(goal, sig);
  for (const TermEquation& g : gamma) check_equation(g, sig);
  if (goal.lhs.depth() > depth || goal.rhs.depth() > depth)
    throw Error(ErrorKind::invalid_argument, "goal is deeper than the search depth");
  if (goal.lhs == goal.rhs) return make_refl(goal.vars, goal.lhs);

  const TermUniverse universe(sig, goal.vars.size(), depth, limits.max_universe);
  ClosureEngine engine(gamma, goal.vars, universe);
  engine.add_axiom_instances(limits.max_instance_work);
  engine.close();
  const std::size_t l = *universe.find(goal.lhs);
  const std::size_t r = *universe.find(goal.rhs);
  if (!engine.same_class(l, r)) return std::nullopt;
  Proof p = engine.explain(l, r);
  if (!check_proof(p, gamma, sig)) throw std::logic_error("derive produced a proof that does not check");
  return p;
}

void for_each_canonical_algebra(const Signature& sig, std::size_t n, std::size_t max_tables,
                                const std::function<bool(const FiniteAlgebra&)>& fn) {
  // Flat layout: all entries of symbol 0, then symbol 1, ...
  std::vector<std::size_t> offsets{0};
  for (const Symbol& s : sig.symbols()) {
    std::size_t entries = 1;
    for (std::size_t i = 0; i < s.arity; ++i) entries *= n;
    offsets.push_back(offsets.back() + entries);
  }
  const std::size_t total = offsets.back();
  if (n == 0) {
    if (total == 0) fn(FiniteAlgebra(sig, 0, std::vector<std::vector<Element>>(sig.size())));
    return;
  }
  std::size_t raw = 1;
  for (std::size_t i = 0; i < total; ++i) {
    if (raw > max_tables / n)
      throw Error(ErrorKind::size_limit_exceeded,
                  "more than " + std::to_string(max_tables) + " operation tables of size " + std::to_string(n));
    raw *= n;
  }

  // For each non-identity permutation p, source[pos] is the entry whose
  // image under p lands at pos.
  std::vector<std::vector<Element>> perms;
  std::vector<Element> p(n);
  std::iota(p.begin(), p.end(), 0);
  while (std::next_permutation(p.begin(), p.end())) perms.push_back(p);
  std::vector<std::vector<std::size_t>> source(perms.size(), std::vector<std::size_t>(total));
  for (std::size_t k = 0; k < perms.size(); ++k) {
    std::vector<Element> inverse(n);
    for (Element a = 0; a < n; ++a) inverse[perms[k][a]] = a;
    for (SymbolId s = 0; s < sig.size(); ++s) {
      const std::size_t arity = sig.arity(s);
      std::size_t pos = offsets[s];
      for_each_tuple(n, arity, [&](std::span<const Element> t) {
        std::vector<Element> pre(arity);
        for (std::size_t i = 0; i < arity; ++i) pre[i] = inverse[t[i]];
        source[k][pos++] = offsets[s] + tuple_index(pre, n);
      });
    }
  }
  auto canonical = [&](const std::vector<Element>& v) {
    for (std::size_t k = 0; k < perms.size(); ++k)
      for (std::size_t pos = 0; pos < total; ++pos) {
        const Element image = perms[k][v[source[k][pos]]];
        if (image < v[pos]) return false;
        if (image > v[pos]) break;
      }
    return true;
  };

  std::vector<Element> values(total, 0);
  while (true) {
    if (canonical(values)) {
      std::vector<std::vector<Element>> tables(sig.size());
      for (SymbolId s = 0; s < sig.size(); ++s)
        tables[s].assign(values.begin() + offsets[s], values.begin() + offsets[s + 1]);
      if (!fn(FiniteAlgebra(sig, n, std::move(tables)))) return;
    }
    std::size_t i = total;
    while (i > 0 && values[i - 1] == n - 1) values[--i] = 0;
    if (i == 0) return;
    ++values[i - 1];
  }
}

EntailmentVerdict semantic_entails(const std::vector<TermEquation>& gamma, const TermEquation& goal,
                                   const Signature& sig, std::size_t depth, EntailmentLimits limits) {
  if (limits.max_model_size < 1) throw Error(ErrorKind::invalid_argument, "max model size must be at least 1");
  check_equation(goal, sig);
  for (const TermEquation& g : gamma) check_equation(g, sig);

  std::optional<Refuted> refuted;
  for (std::size_t n = 1; n <= limits.max_model_size && !refuted; ++n) {
    for_each_canonical_algebra(sig, n, limits.max_tables, [&](const FiniteAlgebra& alg) {
      for (const TermEquation& g : gamma)
        if (!satisfies_equation(alg, g).holds) return true;
      auto result = satisfies_equation(alg, goal);
      if (result.holds) return true;
      refuted = Refuted{alg, std::move(*result.counterexample)};
      return false;
    });
  }
  if (refuted) return std::move(*refuted);
  if (auto proof = derive(gamma, goal, sig, depth, limits.derive)) return Proved{std::move(*proof)};
  return Unknown{limits.max_model_size, depth, count_terms(sig, goal.vars.size(), depth)};
}

}  // namespace hspkit
