#include "hspkit/quantalg.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>

#include "hspkit/eqlogic.hpp"
#include "hspkit/universe.hpp"

namespace hspkit {

namespace {

std::int64_t parse_integer(std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorKind::malformed_input, "not a number: '" + std::string(text) + "'");
  return v;
}

}  // namespace

Distance parse_distance(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "inf" || text == "infinity" || text == "∞") return Distance::infinity();
  try {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      const std::int64_t den = parse_integer(text.substr(slash + 1));
      if (den == 0) throw Error(ErrorKind::malformed_input, "zero denominator in '" + std::string(text) + "'");
      return Rational(parse_integer(text.substr(0, slash)), den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      const std::string_view frac = text.substr(dot + 1);
      if (frac.empty() || frac.size() > 15 || frac.front() == '-' || frac.front() == '+')
        throw Error(ErrorKind::malformed_input, "bad decimal '" + std::string(text) + "'");
      std::int64_t scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      const std::string_view whole = text.substr(0, dot);
      const bool negative = !whole.empty() && whole.front() == '-';
      const std::int64_t w = whole.empty() || whole == "-" ? 0 : parse_integer(whole);
      const Rational magnitude = Rational(negative ? -w : w) + Rational(parse_integer(frac), scale);
      return negative ? -magnitude : magnitude;
    }
    return Rational(parse_integer(text));
  } catch (const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) throw *err;
    throw Error(ErrorKind::malformed_input, "bad distance '" + std::string(text) + "': " + e.what());
  }
}

std::string to_string(const Distance& d) {
  if (d.is_infinite()) return "inf";
  const Rational& r = d.value();
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

DistanceMatrix::DistanceMatrix(std::size_t n) : n_(n), d_(n * n, Distance::infinity()) {
  for (Element a = 0; a < n; ++a) d_[a * n + a] = Distance(0);
}

DistanceMatrix::DistanceMatrix(const std::vector<std::vector<Distance>>& rows) : n_(rows.size()) {
  d_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw Error(ErrorKind::invalid_argument, "distance matrix is not square");
    d_.insert(d_.end(), row.begin(), row.end());
  }
  for (Element a = 0; a < n_; ++a)
    for (Element b = 0; b < a; ++b)
      if ((*this)(a, b) != (*this)(b, a)) throw Error(ErrorKind::invalid_argument, "distance matrix is not symmetric");
}

bool DistanceMatrix::has_zero_diagonal() const {
  for (Element a = 0; a < n_; ++a)
    if ((*this)(a, a) != Distance(0)) return false;
  return true;
}

bool DistanceMatrix::has_negative_entry() const {
  return std::any_of(d_.begin(), d_.end(), [](const Distance& d) { return d.is_negative(); });
}

bool DistanceMatrix::satisfies_triangle() const {
  for (Element a = 0; a < n_; ++a)
    for (Element b = 0; b < n_; ++b)
      for (Element c = 0; c < n_; ++c)
        if ((*this)(a, c) > (*this)(a, b) + (*this)(b, c)) return false;
  return true;
}

bool DistanceMatrix::is_pseudometric() const {
  return has_zero_diagonal() && !has_negative_entry() && satisfies_triangle();
}

bool DistanceMatrix::is_metric() const {
  if (!is_pseudometric()) return false;
  for (Element a = 0; a < n_; ++a)
    for (Element b = 0; b < n_; ++b)
      if (a != b && (*this)(a, b) == Distance(0)) return false;
  return true;
}

bool DistanceMatrix::below(const DistanceMatrix& other) const {
  if (other.n_ != n_) return false;
  for (std::size_t i = 0; i < d_.size(); ++i)
    if (d_[i] > other.d_[i]) return false;
  return true;
}

bool is_nonexpansive(const FiniteAlgebra& alg, const DistanceMatrix& d) {
  if (d.size() != alg.size()) throw Error(ErrorKind::invalid_argument, "metric size differs from carrier");
  const Signature& sig = alg.signature();
  for (SymbolId s = 0; s < sig.size(); ++s) {
    const std::size_t k = sig.arity(s);
    bool ok = true;
    for_each_tuple(alg.size(), k, [&](std::span<const Element> a) {
      if (!ok) return;
      const Element fa = alg.apply(s, a);
      for_each_tuple(alg.size(), k, [&](std::span<const Element> b) {
        if (!ok) return;
        Distance bound(0);
        for (std::size_t i = 0; i < k; ++i) bound = std::max(bound, d(a[i], b[i]));
        ok = d(fa, alg.apply(s, b)) <= bound;
      });
    });
    if (!ok) return false;
  }
  return true;
}

QuantAlgebra::QuantAlgebra(FiniteAlgebra base, ExtMetric d) : base_(std::move(base)), d_(std::move(d)) {
  if (d_.size() != base_.size()) throw Error(ErrorKind::invalid_argument, "metric size differs from carrier");
  if (!d_.is_metric()) throw Error(ErrorKind::invalid_argument, "distance matrix is not an extended metric");
  if (!is_nonexpansive(base_, d_)) throw Error(ErrorKind::invalid_argument, "operations are not nonexpansive");
}

bool is_quant_congruence(const QuantAlgebra& alg, const DistanceMatrix& p) {
  return p.size() == alg.size() && p.is_pseudometric() && p.below(alg.metric()) &&
         is_nonexpansive(alg.base(), p);
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// One operation applied to argument nodes, landing on a result node. For a
// finite algebra these are the table entries; for a term universe, the
// compound terms.
struct Application {
  SymbolId symbol;
  std::vector<std::size_t> args;
  std::size_t result;
};

// Why an entry of the matrix was lowered. Values are the entry's value at
// that moment, and premises name the events that justified the entries used,
// so the history stays valid after later improvements.
struct Event {
  enum class Kind { constraint, triang, cong };

  Event(Kind kind, std::size_t a, std::size_t b, Distance value) : kind(kind), a(a), b(b), value(value) {}

  Kind kind;
  std::size_t a;
  std::size_t b;
  Distance value;
  std::size_t source = kNone;  // constraint: hypothesis index; triang: middle node
  std::size_t app_a = kNone;   // cong
  std::size_t app_b = kNone;
  Substitution sigma;          // constraint
  std::vector<std::size_t> premises;  // kNone for a node paired with itself
};

// Largest pseudometric below an initial matrix that keeps the operations
// nonexpansive on the given applications: Floyd-Warshall inside each
// component of finite distances, then one sweep over pairs of applications
// with the same symbol, repeated until nothing changes.
class MetricSolver {
 public:
  MetricSolver(DistanceMatrix initial, bool trace)
      : p_(std::move(initial)), trace_(trace), best_(p_.size() * p_.size(), kNone) {}

  const DistanceMatrix& matrix() const { return p_; }
  const std::vector<Event>& events() const { return events_; }
  std::size_t best_event(std::size_t a, std::size_t b) const { return best_[a * p_.size() + b]; }

  void constrain(std::size_t a, std::size_t b, const Distance& eps, std::size_t source, Substitution sigma = {}) {
    if (a == b || eps >= p_(a, b)) return;
    Event e{Event::Kind::constraint, a, b, eps};
    e.source = source;
    e.sigma = std::move(sigma);
    improve(std::move(e));
  }

  void run(const std::vector<Application>& apps) {
    for (bool changed = true; changed;) {
      changed = floyd_warshall();
      changed |= congruence_sweep(apps);
    }
  }

 private:
  void improve(Event e) {
    const std::size_t n = p_.size();
    p_.set(e.a, e.b, e.value);
    if (!trace_) return;
    best_[e.a * n + e.b] = best_[e.b * n + e.a] = events_.size();
    events_.push_back(std::move(e));
  }

  std::vector<std::size_t> component_ids() const {
    const std::size_t n = p_.size();
    std::vector<std::size_t> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](std::size_t a) {
      while (comp[a] != a) a = comp[a] = comp[comp[a]];
      return a;
    };
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (!p_(a, b).is_infinite()) {
          const std::size_t ra = find(a), rb = find(b);
          if (ra != rb) comp[std::max(ra, rb)] = std::min(ra, rb);
        }
    for (std::size_t a = 0; a < n; ++a) comp[a] = find(a);
    return comp;
  }

  bool floyd_warshall() {
    const std::size_t n = p_.size();
    const auto comp = component_ids();
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t a = 0; a < n; ++a) members[comp[a]].push_back(a);
    bool changed = false;
    for (const auto& [root, nodes] : members) {
      if (nodes.size() < 3) continue;
      for (std::size_t k : nodes)
        for (std::size_t a : nodes) {
          if (a == k) continue;
          for (std::size_t b : nodes) {
            if (b == a || b == k) continue;
            const Distance via = p_(a, k) + p_(k, b);
            if (via >= p_(a, b)) continue;
            Event e{Event::Kind::triang, a, b, via};
            e.source = k;
            if (trace_) e.premises = {best_event(a, k), best_event(k, b)};
            improve(std::move(e));
            changed = true;
          }
        }
    }
    return changed;
  }

  bool congruence_sweep(const std::vector<Application>& apps) {
    const auto comp = component_ids();
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < apps.size(); ++i) {
      std::vector<std::size_t> key{apps[i].symbol};
      for (std::size_t a : apps[i].args) key.push_back(comp[a]);
      groups[std::move(key)].push_back(i);
    }
    bool changed = false;
    for (const auto& [key, members] : groups)
      for (std::size_t x = 0; x < members.size(); ++x)
        for (std::size_t y = x + 1; y < members.size(); ++y) {
          const Application& u = apps[members[x]];
          const Application& v = apps[members[y]];
          if (u.result == v.result) continue;
          Distance bound(0);
          for (std::size_t i = 0; i < u.args.size(); ++i) bound = std::max(bound, p_(u.args[i], v.args[i]));
          if (bound >= p_(u.result, v.result)) continue;
          Event e{Event::Kind::cong, u.result, v.result, bound};
          e.app_a = members[x];
          e.app_b = members[y];
          if (trace_)
            for (std::size_t i = 0; i < u.args.size(); ++i)
              e.premises.push_back(u.args[i] == v.args[i] ? kNone : best_event(u.args[i], v.args[i]));
          improve(std::move(e));
          changed = true;
        }
    return changed;
  }

  DistanceMatrix p_;
  bool trace_;
  std::vector<std::size_t> best_;
  std::vector<Event> events_;
};

std::vector<Application> table_applications(const FiniteAlgebra& alg) {
  std::vector<Application> apps;
  for (SymbolId s = 0; s < alg.signature().size(); ++s)
    for_each_tuple(alg.size(), alg.signature().arity(s), [&](std::span<const Element> t) {
      apps.push_back({s, std::vector<std::size_t>(t.begin(), t.end()), alg.apply(s, t)});
    });
  return apps;
}

}  // namespace

QuantCongruence quant_congruence_generated(const QuantAlgebra& alg,
                                           const std::vector<DistanceConstraint>& constraints) {
  for (const auto& c : constraints) {
    if (c.eps.is_negative()) throw Error(ErrorKind::negative_epsilon, "constraint bound " + to_string(c.eps) + " is negative");
    if (c.a >= alg.size() || c.b >= alg.size()) throw Error(ErrorKind::invalid_argument, "constraint outside the carrier");
  }
  MetricSolver solver(alg.metric(), false);
  for (std::size_t i = 0; i < constraints.size(); ++i)
    solver.constrain(constraints[i].a, constraints[i].b, constraints[i].eps, i);
  solver.run(table_applications(alg.base()));
  return solver.matrix();
}

QuantQuotient quotient_quant(const QuantAlgebra& alg, const QuantCongruence& p) {
  if (!is_quant_congruence(alg, p))
    throw Error(ErrorKind::not_a_congruence, "matrix is not a congruence of the quantitative algebra");
  const std::size_t n = alg.size();
  std::vector<std::size_t> labels(n);
  for (Element a = 0; a < n; ++a) {
    labels[a] = a;
    for (Element b = 0; b < a; ++b)
      if (p(a, b) == Distance(0)) {
        labels[a] = labels[b];
        break;
      }
  }
  Quotient q = quotient(alg.base(), Partition::from_labels(labels));
  DistanceMatrix d(q.algebra.size());
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) d.set(q.surjection[a], q.surjection[b], p(a, b));
  return {QuantAlgebra(std::move(q.algebra), std::move(d)), std::move(q.surjection)};
}

DistanceMatrix induced_pseudometric(std::span<const Element> map, const DistanceMatrix& cod) {
  DistanceMatrix p(map.size());
  for (Element a = 0; a < map.size(); ++a)
    for (Element b = 0; b < map.size(); ++b) p.set(a, b, cod(map[a], map[b]));
  return p;
}

Cardinal parse_cardinal(std::string_view text) {
  if (text == "omega" || text == "w" || text == "aleph0") return Cardinal::aleph0();
  const std::int64_t c = parse_integer(text);
  if (c < 2) throw Error(ErrorKind::malformed_input, "cluster bound must be at least 2");
  return Cardinal::finite(static_cast<std::size_t>(c));
}

std::string to_string(const Cardinal& c) { return c.omega ? "omega" : std::to_string(c.value); }

bool is_c_reflexive(const DistanceMatrix& dom, const DistanceMatrix& cod, std::span<const Element> e, Cardinal c,
                    ReflexivityLimits limits) {
  if (!c.omega && c.value < 2) throw Error(ErrorKind::invalid_argument, "cluster bound must be at least 2");
  if (e.size() != dom.size()) throw Error(ErrorKind::invalid_argument, "map size differs from its domain");
  for (Element a : e)
    if (a >= cod.size()) throw Error(ErrorKind::invalid_argument, "map leaves its codomain");
  if (!is_surjective(e, cod.size())) throw Error(ErrorKind::invalid_argument, "map is not surjective");

  const std::size_t m = cod.size();
  // Subsets of a subset with an isometric section have one too, so only the
  // largest admissible size needs checking.
  const std::size_t k = c.omega ? m : std::min(c.value - 1, m);
  std::vector<std::vector<Element>> fibers(m);
  for (Element a = 0; a < e.size(); ++a) fibers[e[a]].push_back(a);

  std::size_t nodes = 0;
  std::vector<Element> subset(k), chosen(k);
  auto extend = [&](auto&& self, std::size_t i) -> bool {
    if (i == k) return true;
    for (Element a : fibers[subset[i]]) {
      if (++nodes > limits.max_search_nodes)
        throw Error(ErrorKind::size_limit_exceeded, "isometric section search exceeded its budget");
      bool fits = true;
      for (std::size_t j = 0; j < i && fits; ++j) fits = dom(a, chosen[j]) == cod(subset[i], subset[j]);
      if (!fits) continue;
      chosen[i] = a;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    if (!extend(extend, 0)) return false;
    std::size_t i = k;
    while (i > 0 && subset[i - 1] == m - k + i - 1) --i;
    if (i == 0) return true;
    ++subset[i - 1];
    for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
}

void check_clustered_equation(const ClusteredEquation& eq, const Signature& sig) {
  check_equation(TermEquation{eq.vars, eq.lhs, eq.rhs}, sig);
  if (!eq.c.omega && eq.c.value < 2) throw Error(ErrorKind::invalid_argument, "cluster bound must be at least 2");
  if (eq.clusters.size() != eq.vars.size())
    throw Error(ErrorKind::invalid_argument, "clusters do not partition the variables");
  for (const auto& block : eq.clusters.blocks())
    if (!eq.c.exceeds(block.size()))
      throw Error(ErrorKind::invalid_argument, "a cluster has " + std::to_string(block.size()) +
                                                   " variables, bound is " + to_string(eq.c));
  for (const auto& cond : eq.conditions) {
    if (cond.x >= eq.vars.size() || cond.y >= eq.vars.size())
      throw Error(ErrorKind::unknown_variable, "condition names an unknown variable");
    if (!eq.clusters.same_block(cond.x, cond.y))
      throw Error(ErrorKind::invalid_argument, "condition relates variables in different clusters");
    if (cond.eps.is_negative()) throw Error(ErrorKind::negative_epsilon, "condition bound is negative");
  }
  if (eq.eps.is_negative()) throw Error(ErrorKind::negative_epsilon, "conclusion bound is negative");
}

SatisfactionResult satisfies_clustered_equation(const QuantAlgebra& alg, const ClusteredEquation& eq) {
  check_clustered_equation(eq, alg.signature());
  const DistanceMatrix& d = alg.metric();
  SatisfactionResult result;
  for_each_assignment(alg.size(), eq.vars.size(), [&](std::span<const Element> h) {
    for (const auto& cond : eq.conditions)
      if (d(h[cond.x], h[cond.y]) > cond.eps) return true;
    if (d(evaluate(eq.lhs, alg, h), evaluate(eq.rhs, alg, h)) <= eq.eps) return true;
    result.holds = false;
    result.counterexample.emplace(h.begin(), h.end());
    return false;
  });
  return result;
}

std::string to_string(const QuantEquation& eq, const Signature& sig) {
  return to_string(eq.lhs, sig, eq.vars) + " =_" + to_string(eq.eps) + " " + to_string(eq.rhs, sig, eq.vars);
}

SatisfactionResult satisfies_quant_equation(const QuantAlgebra& alg, const QuantEquation& eq) {
  return satisfies_clustered_equation(
      alg, ClusteredEquation{eq.vars, Partition::discrete(eq.vars.size()), {}, eq.lhs, eq.rhs, eq.eps,
                             Cardinal::finite(2)});
}

namespace {

constexpr std::string_view kQuantRuleNames[] = {"Refl", "Sym", "Triang", "Max", "Arch", "Cong", "Subst", "Axiom"};

std::string quant_path(const std::vector<std::size_t>& path) {
  std::string out = "root";
  for (std::size_t i : path) out += "/" + std::to_string(i);
  return out;
}

[[noreturn]] void quant_malformed(const std::vector<std::size_t>& path, const std::string& what) {
  throw Error(ErrorKind::malformed_proof, "proof node " + quant_path(path) + ": " + what);
}

void check_quant_structure(const QuantProof& p, const std::vector<QuantEquation>& gamma, const Signature& sig,
                           std::vector<std::size_t>& path) {
  std::size_t expected = 0;
  switch (p.rule) {
    case QuantRule::refl:
    case QuantRule::axiom:
      expected = 0;
      break;
    case QuantRule::sym:
    case QuantRule::max:
    case QuantRule::subst:
      expected = 1;
      break;
    case QuantRule::triang:
      expected = 2;
      break;
    case QuantRule::arch:
      expected = p.children.empty() && p.conclusion.eps.is_infinite() ? 0 : 1;
      break;
    case QuantRule::cong:
      if (p.symbol >= sig.size()) quant_malformed(path, "Cong names an unknown symbol");
      expected = sig.arity(p.symbol);
      break;
  }
  if (p.children.size() != expected)
    quant_malformed(path, std::string(to_string(p.rule)) + " has " + std::to_string(p.children.size()) + " premises");
  try {
    check_equation(TermEquation{p.conclusion.vars, p.conclusion.lhs, p.conclusion.rhs}, sig);
  } catch (const Error& e) {
    quant_malformed(path, std::string("conclusion is not well formed: ") + e.what());
  }
  if (p.conclusion.eps.is_negative()) quant_malformed(path, "negative bound");
  if (p.rule == QuantRule::axiom && p.axiom >= gamma.size())
    quant_malformed(path, "axiom index " + std::to_string(p.axiom) + " out of range");
  if (p.rule == QuantRule::subst)
    for (const auto& [v, image] : p.substitution) {
      if (v >= p.children[0].conclusion.vars.size())
        quant_malformed(path, "substitution binds a variable the premise does not have");
      try {
        check_well_formed(image, sig, p.conclusion.vars.size());
      } catch (const Error& e) {
        quant_malformed(path, std::string("substitution image is not well formed: ") + e.what());
      }
    }
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    path.push_back(i);
    check_quant_structure(p.children[i], gamma, sig, path);
    path.pop_back();
  }
}

std::string quant_rule_failure(const QuantProof& p, const std::vector<QuantEquation>& gamma) {
  const QuantEquation& c = p.conclusion;
  const bool same_vars = std::all_of(p.children.begin(), p.children.end(),
                                     [&](const QuantProof& q) { return q.conclusion.vars == c.vars; });
  if (!same_vars && p.rule != QuantRule::subst) return std::string(to_string(p.rule)) + " changes the variable set";
  auto same_terms = [&](const QuantEquation& q) { return q.lhs == c.lhs && q.rhs == c.rhs; };
  switch (p.rule) {
    case QuantRule::refl:
      if (c.lhs != c.rhs) return "Refl needs identical sides";
      return c.eps == Distance(0) ? "" : "Refl concludes distance 0";
    case QuantRule::sym: {
      const QuantEquation& q = p.children[0].conclusion;
      if (q.lhs != c.rhs || q.rhs != c.lhs) return "Sym does not flip its premise";
      return q.eps == c.eps ? "" : "Sym changes the bound";
    }
    case QuantRule::triang: {
      const QuantEquation& a = p.children[0].conclusion;
      const QuantEquation& b = p.children[1].conclusion;
      if (a.rhs != b.lhs) return "Triang premises do not share a middle term";
      if (a.lhs != c.lhs || b.rhs != c.rhs) return "Triang conclusion does not match its premises";
      return a.eps + b.eps == c.eps ? "" : "Triang bound is not the sum of its premises";
    }
    case QuantRule::max: {
      const QuantEquation& q = p.children[0].conclusion;
      if (!same_terms(q)) return "Max changes the terms";
      return c.eps > q.eps ? "" : "Max must strictly weaken the bound";
    }
    case QuantRule::arch: {
      if (p.children.empty()) return "";
      const QuantEquation& q = p.children[0].conclusion;
      if (!same_terms(q)) return "Arch changes the terms";
      return q.eps <= c.eps ? "" : "Arch premise bound exceeds the conclusion";
    }
    case QuantRule::cong: {
      if (c.lhs.is_var() || c.rhs.is_var() || c.lhs.symbol() != p.symbol || c.rhs.symbol() != p.symbol)
        return "Cong conclusion is not headed by its symbol";
      for (std::size_t i = 0; i < p.children.size(); ++i) {
        const QuantEquation& q = p.children[i].conclusion;
        if (c.lhs.children()[i] != q.lhs || c.rhs.children()[i] != q.rhs)
          return "Cong argument " + std::to_string(i) + " does not match its premise";
        if (q.eps != c.eps) return "Cong premises must share the conclusion's bound";
      }
      return "";
    }
    case QuantRule::subst: {
      const QuantEquation& q = p.children[0].conclusion;
      for (const Term* t : {&q.lhs, &q.rhs})
        for (VarId v : vars_of(*t))
          if (!p.substitution.contains(v)) return "substitution does not bind every premise variable";
      if (substitute(q.lhs, p.substitution) != c.lhs || substitute(q.rhs, p.substitution) != c.rhs)
        return "Subst conclusion is not the substituted premise";
      return q.eps == c.eps ? "" : "Subst changes the bound";
    }
    case QuantRule::axiom: {
      const QuantEquation& g = gamma[p.axiom];
      if (g.eps != c.eps) return "Axiom bound differs from the cited hypothesis";
      return alpha_equal(TermEquation{c.vars, c.lhs, c.rhs}, TermEquation{g.vars, g.lhs, g.rhs})
                 ? ""
                 : "Axiom conclusion is not the cited hypothesis";
    }
  }
  return "unknown rule";
}

std::optional<QuantProofCheck> first_quant_failure(const QuantProof& p, const std::vector<QuantEquation>& gamma,
                                                   std::vector<std::size_t>& path) {
  if (std::string why = quant_rule_failure(p, gamma); !why.empty()) return QuantProofCheck{false, path, why};
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    path.push_back(i);
    auto failure = first_quant_failure(p.children[i], gamma, path);
    path.pop_back();
    if (failure) return failure;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(QuantRule rule) { return kQuantRuleNames[static_cast<std::size_t>(rule)]; }

std::optional<QuantRule> parse_quant_rule(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kQuantRuleNames); ++i)
    if (kQuantRuleNames[i] == name) return static_cast<QuantRule>(i);
  return std::nullopt;
}

std::size_t QuantProof::node_count() const {
  std::size_t n = 1;
  for (const QuantProof& c : children) n += c.node_count();
  return n;
}

QuantProofCheck verify_quant_proof(const QuantProof& p, const std::vector<QuantEquation>& gamma,
                                   const Signature& sig) {
  std::vector<std::size_t> path;
  check_quant_structure(p, gamma, sig, path);
  return first_quant_failure(p, gamma, path).value_or(QuantProofCheck{});
}

namespace {

// Turns the solver's event history over a term universe into proof trees.
class QuantProofBuilder {
 public:
  QuantProofBuilder(const MetricSolver& solver, const TermUniverse& u, const std::vector<Application>& apps,
                    const std::vector<QuantEquation>& gamma, const VarSet& vars, std::size_t max_nodes)
      : solver_(solver), u_(u), apps_(apps), gamma_(gamma), vars_(vars), max_nodes_(max_nodes) {}

  // Proves term(from) =_v term(to) where v is the event's value.
  QuantProof prove(std::size_t event, std::size_t from, std::size_t to) {
    if (from == to) return node(QuantRule::refl, u_.term(from), u_.term(to), Distance(0));
    const Event& e = solver_.events()[event];
    QuantProof p = oriented(e);
    if (e.a == from && e.b == to) return p;
    QuantProof s = node(QuantRule::sym, p.conclusion.rhs, p.conclusion.lhs, p.conclusion.eps);
    s.children.push_back(std::move(p));
    return s;
  }

  // Raises a proof's bound to `eps` with Max when it is strictly lower.
  QuantProof weaken(QuantProof p, const Distance& eps) {
    if (p.conclusion.eps == eps) return p;
    QuantProof m = node(QuantRule::max, p.conclusion.lhs, p.conclusion.rhs, eps);
    m.children.push_back(std::move(p));
    return m;
  }

  QuantProof node(QuantRule rule, const Term& l, const Term& r, const Distance& eps) {
    if (++nodes_ > max_nodes_) throw Error(ErrorKind::size_limit_exceeded, "quantitative proof is too large");
    return QuantProof{rule, QuantEquation{vars_, l, r, eps}, 0, {}, 0, {}};
  }

 private:
  QuantProof oriented(const Event& e) {
    const Term& l = u_.term(e.a);
    const Term& r = u_.term(e.b);
    switch (e.kind) {
      case Event::Kind::constraint: {
        const QuantEquation& g = gamma_[e.source];
        QuantProof axiom = node(QuantRule::axiom, g.lhs, g.rhs, g.eps);
        axiom.conclusion.vars = g.vars;
        axiom.axiom = e.source;
        bool identity = g.vars == vars_;
        for (const auto& [v, image] : e.sigma) identity = identity && image == Term::var(v);
        if (identity) return axiom;
        QuantProof s = node(QuantRule::subst, l, r, e.value);
        s.substitution = e.sigma;
        s.children.push_back(std::move(axiom));
        return s;
      }
      case Event::Kind::triang: {
        QuantProof t = node(QuantRule::triang, l, r, e.value);
        t.children.push_back(prove(e.premises[0], e.a, e.source));
        t.children.push_back(prove(e.premises[1], e.source, e.b));
        return t;
      }
      case Event::Kind::cong: {
        const Application& x = apps_[e.app_a];
        const Application& y = apps_[e.app_b];
        QuantProof c = node(QuantRule::cong, l, r, e.value);
        c.symbol = x.symbol;
        for (std::size_t i = 0; i < x.args.size(); ++i)
          c.children.push_back(weaken(prove(e.premises[i], x.args[i], y.args[i]), e.value));
        return c;
      }
    }
    throw std::logic_error("unknown solver event");
  }

  const MetricSolver& solver_;
  const TermUniverse& u_;
  const std::vector<Application>& apps_;
  const std::vector<QuantEquation>& gamma_;
  const VarSet& vars_;
  std::size_t max_nodes_;
  std::size_t nodes_ = 0;
};

}  // namespace

QuantVerdict quant_entails(const std::vector<QuantEquation>& gamma, const QuantEquation& goal, const Signature& sig,
                           std::size_t depth, QuantDeriveLimits limits) {
  auto check = [&](const QuantEquation& eq) {
    check_equation(TermEquation{eq.vars, eq.lhs, eq.rhs}, sig);
    if (eq.eps.is_negative()) throw Error(ErrorKind::negative_epsilon, "bound " + to_string(eq.eps) + " is negative");
  };
  check(goal);
  for (const auto& g : gamma) check(g);
  if (goal.lhs.depth() > depth || goal.rhs.depth() > depth)
    throw Error(ErrorKind::invalid_argument, "goal is deeper than the search depth");

  const TermUniverse u(sig, goal.vars.size(), depth, limits.max_universe);
  std::vector<Application> apps;
  for (std::size_t t = 0; t < u.size(); ++t)
    if (!u.term(t).is_var())
      apps.push_back({u.term(t).symbol(), std::vector<std::size_t>(u.args(t).begin(), u.args(t).end()), t});

  MetricSolver solver(DistanceMatrix(u.size()), true);
  std::size_t work = 0;
  for (std::size_t g = 0; g < gamma.size(); ++g)
    u.for_each_instance(gamma[g].lhs, gamma[g].rhs, gamma[g].vars.size(), work, limits.max_instance_work,
                        [&](std::size_t l, std::size_t r, Substitution sub) {
                          solver.constrain(l, r, gamma[g].eps, g, std::move(sub));
                        });
  solver.run(apps);

  const std::size_t s = *u.find(goal.lhs);
  const std::size_t t = *u.find(goal.rhs);
  const Distance best = solver.matrix()(s, t);
  QuantProofBuilder builder(solver, u, apps, gamma, goal.vars, limits.max_proof_nodes);
  auto verified = [&](QuantProof p) {
    if (!check_quant_proof(p, gamma, sig))
      throw std::logic_error("quant_entails produced a proof that does not check");
    return p;
  };
  if (best.is_infinite()) {
    if (!goal.eps.is_infinite()) return QuantUnknown{depth, u.size()};
    // Nothing is known about the pair, and the vacuous Arch gives distance infinity.
    return QuantProved{verified(builder.node(QuantRule::arch, goal.lhs, goal.rhs, goal.eps))};
  }
  QuantProof p = builder.prove(solver.best_event(s, t), s, t);
  if (best > goal.eps) return BoundWitness{best, verified(std::move(p))};
  return QuantProved{verified(builder.weaken(std::move(p), goal.eps))};
}

QuantSubalgebra subalgebra_generated(const QuantAlgebra& alg, std::span<const Element> generators) {
  Subalgebra sub = subalgebra_generated(alg.base(), generators);
  const std::size_t m = sub.inclusion.size();
  DistanceMatrix d(m);
  for (Element a = 0; a < m; ++a)
    for (Element b = 0; b < m; ++b) d.set(a, b, alg.metric()(sub.inclusion[a], sub.inclusion[b]));
  return {QuantAlgebra(std::move(sub.algebra), std::move(d)), std::move(sub.inclusion)};
}

QuantAlgebra product(const Signature& sig, std::span<const QuantAlgebra> factors, std::size_t max_size) {
  std::vector<FiniteAlgebra> bases;
  for (const QuantAlgebra& f : factors) bases.push_back(f.base());
  ProductAlgebra p = product(sig, bases, max_size);
  const std::size_t n = p.algebra.size();
  DistanceMatrix d(n);
  for (Element a = 0; a < n; ++a) {
    const auto da = p.decode(a);
    for (Element b = a + 1; b < n; ++b) {
      const auto db = p.decode(b);
      Distance sup(0);
      for (std::size_t i = 0; i < factors.size(); ++i) sup = std::max(sup, factors[i].metric()(da[i], db[i]));
      d.set(a, b, sup);
    }
  }
  return QuantAlgebra(std::move(p.algebra), std::move(d));
}

}  // namespace hspkit
