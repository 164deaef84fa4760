#include "hspkit/io.hpp"

#include <fstream>
#include <sstream>

namespace hspkit::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::malformed_input, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object with \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t natural(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) bad(std::string(what) + " must be a natural number");
  return j.get<std::size_t>();
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) bad(std::string(what) + " must be a string");
  return j.get<std::string>();
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  return j;
}

VarSet read_vars(const Json& j) {
  std::vector<std::string> names;
  for (const Json& v : array(j, "vars")) names.push_back(text(v, "variable name"));
  return VarSet(std::move(names));
}

Json write_vars(const VarSet& vars) {
  Json out = Json::array();
  for (const std::string& n : vars.names()) out.push_back(n);
  return out;
}

VarId var_named(const VarSet& vars, const Json& j) {
  const std::string name = text(j, "variable");
  auto v = vars.find(name);
  if (!v) throw Error(ErrorKind::unknown_variable, "unknown variable '" + name + "'");
  return *v;
}

Cardinal read_cardinal(const Json& j) {
  if (j.is_string()) return parse_cardinal(j.get<std::string>());
  const std::size_t c = natural(j, "c");
  if (c < 2) bad("c must be at least 2");
  return Cardinal::finite(c);
}

template <class P, class ReadConclusion, class ParseRule>
P read_tree(const Json& j, const Signature& sig, ReadConclusion&& read_conclusion, ParseRule&& parse_rule) {
  const std::string name = text(field(j, "rule"), "rule");
  const auto rule = parse_rule(name);
  if (!rule) bad("unknown rule '" + name + "'");
  auto conclusion = read_conclusion(field(j, "conclusion"));
  std::vector<P> children;
  if (auto it = j.find("children"); it != j.end())
    for (const Json& c : array(*it, "children")) children.push_back(read_tree<P>(c, sig, read_conclusion, parse_rule));
  SymbolId symbol = 0;
  if (auto it = j.find("symbol"); it != j.end()) {
    const std::string sym = text(*it, "symbol");
    auto s = sig.find(sym);
    if (!s) throw Error(ErrorKind::signature_mismatch, "unknown symbol '" + sym + "'");
    symbol = *s;
  }
  const std::size_t axiom = j.contains("axiom") ? natural(j["axiom"], "axiom") : 0;
  Substitution substitution;
  if (auto it = j.find("substitution"); it != j.end()) {
    if (!it->is_object()) bad("substitution must be an object");
    if (children.empty()) bad("a substitution needs a premise to bind");
    const VarSet& from = children[0].conclusion.vars;
    for (const auto& [var, image] : it->items()) {
      auto v = from.find(var);
      if (!v) throw Error(ErrorKind::unknown_variable, "substitution binds unknown variable '" + var + "'");
      substitution.emplace(*v, parse_term(text(image, "substitution image"), sig, conclusion.vars));
    }
  }
  return P{*rule, std::move(conclusion), symbol, std::move(substitution), axiom, std::move(children)};
}

template <class P, class WriteConclusion>
Json write_tree(const P& p, const Signature& sig, WriteConclusion&& conclusion) {
  Json out;
  out["rule"] = std::string(to_string(p.rule));
  out["conclusion"] = conclusion(p.conclusion);
  if (p.rule == decltype(p.rule)::cong) out["symbol"] = sig.name(p.symbol);
  if (p.rule == decltype(p.rule)::axiom) out["axiom"] = p.axiom;
  if (p.rule == decltype(p.rule)::subst) {
    Json sub = Json::object();
    const VarSet& from = p.children.at(0).conclusion.vars;
    for (const auto& [v, image] : p.substitution) sub[from.name(v)] = to_string(image, sig, p.conclusion.vars);
    out["substitution"] = std::move(sub);
  }
  if (!p.children.empty()) {
    out["children"] = Json::array();
    for (const auto& c : p.children) out["children"].push_back(write_tree(c, sig, conclusion));
  }
  return out;
}

std::string distance_text(const Distance& d) { return to_string(d); }

}  // namespace

Json load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
}

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    bad(e.what());
  }
}

Signature read_signature(const Json& j) {
  const Json& list = j.is_object() ? field(j, "signature") : j;
  std::vector<Symbol> symbols;
  for (const Json& s : array(list, "signature")) {
    if (!s.is_array() || s.size() != 2) bad("signature entries are [name, arity]");
    symbols.push_back({text(s[0], "symbol name"), natural(s[1], "arity")});
  }
  return Signature(std::move(symbols));
}

Json write_signature(const Signature& sig) {
  Json out = Json::array();
  for (const Symbol& s : sig.symbols()) out.push_back(Json::array({s.name, s.arity}));
  return out;
}

FiniteAlgebra read_algebra(const Json& j) {
  Signature sig = read_signature(field(j, "signature"));
  const std::size_t n = natural(field(j, "size"), "size");
  std::vector<std::vector<Element>> tables;
  const Json empty = Json::object();
  const Json& given = j.contains("tables") ? j["tables"] : empty;
  if (!given.is_object()) bad("tables must be an object");
  for (const Symbol& s : sig.symbols()) {
    std::vector<Element> table;
    for (const Json& e : array(field(given, s.name.c_str()), "table")) table.push_back(natural(e, "table entry"));
    tables.push_back(std::move(table));
  }
  if (given.size() != sig.size()) bad("tables name a symbol outside the signature");
  try {
    return FiniteAlgebra(std::move(sig), n, std::move(tables));
  } catch (const Error& e) {
    bad(e.what());
  }
}

Json write_algebra(const FiniteAlgebra& alg) {
  Json out;
  out["signature"] = write_signature(alg.signature());
  out["size"] = alg.size();
  Json tables = Json::object();
  for (SymbolId s = 0; s < alg.signature().size(); ++s) {
    const auto t = alg.table(s);
    tables[alg.signature().name(s)] = std::vector<Element>(t.begin(), t.end());
  }
  out["tables"] = std::move(tables);
  return out;
}

OrderedAlgebra read_ordered(const Json& j) {
  FiniteAlgebra base = read_algebra(j);
  Relation leq = Relation::identity(base.size());
  if (j.contains("leq"))
    for (auto [a, b] : read_pairs(j["leq"])) {
      if (a >= base.size() || b >= base.size()) bad("order pair outside the carrier");
      leq.insert(a, b);
    }
  leq.close_transitively();
  try {
    return OrderedAlgebra(std::move(base), std::move(leq));
  } catch (const Error& e) {
    bad(e.what());
  }
}

Json write_ordered(const OrderedAlgebra& alg) {
  Json out = write_algebra(alg.base());
  out["leq"] = write_relation(alg.leq());
  return out;
}

Distance read_distance(const Json& j) {
  if (j.is_string()) return parse_distance(j.get<std::string>());
  if (j.is_number_integer()) return Distance(j.get<std::int64_t>());
  if (j.is_number_float()) return parse_distance(j.dump());
  bad("a distance is a string or a number");
}

DistanceMatrix read_metric(const Json& j) {
  const std::size_t n = natural(field(j, "size"), "size");
  const Json& rows = array(field(j, "d"), "d");
  if (rows.size() != n) bad("d must have one row per element");
  DistanceMatrix d(n);
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    const Json& row = array(rows[a], "row");
    std::size_t start;
    if (row.size() == n) {
      start = 0;
    } else if (row.size() == n - a) {
      start = a;
    } else {
      bad("row " + std::to_string(a) + " has " + std::to_string(row.size()) + " entries");
    }
    for (std::size_t k = 0; k < row.size(); ++k) {
      const std::size_t b = start + k;
      if (row[k].is_null()) continue;
      const Distance v = read_distance(row[k]);
      if (v.is_negative()) throw Error(ErrorKind::negative_epsilon, "negative distance " + to_string(v));
      if (a == b) {
        if (v != Distance(0)) bad("distances on the diagonal must be 0");
        continue;
      }
      if (seen[a][b] && d(a, b) != v) bad("distance matrix is not symmetric");
      d.set(a, b, v);
      seen[a][b] = seen[b][a] = true;
    }
  }
  return d;
}

Json write_metric(const DistanceMatrix& d) {
  Json rows = Json::array();
  for (Element a = 0; a < d.size(); ++a) {
    Json row = Json::array();
    for (Element b = 0; b < d.size(); ++b) row.push_back(distance_text(d(a, b)));
    rows.push_back(std::move(row));
  }
  return Json{{"size", d.size()}, {"d", std::move(rows)}};
}

QuantAlgebra read_quant(const Json& j) {
  FiniteAlgebra base = read_algebra(j);
  Json metric{{"size", base.size()}, {"d", field(j, "d")}};
  DistanceMatrix d = read_metric(metric);
  try {
    return QuantAlgebra(std::move(base), std::move(d));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::invalid_argument) throw;
    bad(e.what());
  }
}

Json write_quant(const QuantAlgebra& alg) {
  Json out = write_algebra(alg.base());
  out["d"] = write_metric(alg.metric())["d"];
  return out;
}

TermEquation read_equation(const Json& j, const Signature& sig) {
  VarSet vars = read_vars(field(j, "vars"));
  Term lhs = parse_term(text(field(j, "lhs"), "lhs"), sig, vars);
  Term rhs = parse_term(text(field(j, "rhs"), "rhs"), sig, vars);
  return {std::move(vars), std::move(lhs), std::move(rhs)};
}

Json write_equation(const TermEquation& eq, const Signature& sig) {
  return Json{{"vars", write_vars(eq.vars)},
              {"lhs", to_string(eq.lhs, sig, eq.vars)},
              {"rhs", to_string(eq.rhs, sig, eq.vars)}};
}

EquationSequence read_equations(const Json& j, const Signature& sig) {
  EquationSequence out;
  for (const Json& e : array(j, "equation list")) out.push_back(read_equation(e, sig));
  return out;
}

QuantEquation read_quant_equation(const Json& j, const Signature& sig) {
  TermEquation eq = read_equation(j, sig);
  return {std::move(eq.vars), std::move(eq.lhs), std::move(eq.rhs), read_distance(field(j, "eps"))};
}

Json write_quant_equation(const QuantEquation& eq, const Signature& sig) {
  Json out = write_equation(TermEquation{eq.vars, eq.lhs, eq.rhs}, sig);
  out["eps"] = distance_text(eq.eps);
  return out;
}

std::vector<QuantEquation> read_quant_equations(const Json& j, const Signature& sig) {
  std::vector<QuantEquation> out;
  for (const Json& e : array(j, "equation list")) out.push_back(read_quant_equation(e, sig));
  return out;
}

ClusteredEquation read_clustered(const Json& j, const Signature& sig) {
  VarSet vars = read_vars(field(j, "vars"));
  const Cardinal c = j.contains("c") ? read_cardinal(j["c"]) : Cardinal::finite(2);
  Partition clusters = Partition::discrete(vars.size());
  if (j.contains("clusters")) {
    std::vector<std::vector<Element>> blocks;
    std::vector<bool> covered(vars.size(), false);
    for (const Json& block : array(j["clusters"], "clusters")) {
      blocks.emplace_back();
      for (const Json& v : array(block, "cluster")) {
        const VarId id = var_named(vars, v);
        if (covered[id]) bad("variable '" + vars.name(id) + "' is in two clusters");
        covered[id] = true;
        blocks.back().push_back(id);
      }
    }
    if (std::find(covered.begin(), covered.end(), false) != covered.end())
      bad("clusters do not cover every variable");
    clusters = Partition::from_blocks(vars.size(), blocks);
  }
  std::vector<VarCondition> conditions;
  if (j.contains("conditions"))
    for (const Json& cond : array(j["conditions"], "conditions")) {
      if (!cond.is_array() || cond.size() != 3) bad("conditions are [x, y, eps]");
      conditions.push_back({var_named(vars, cond[0]), var_named(vars, cond[1]), read_distance(cond[2])});
    }
  const Json& conclusion = field(j, "conclusion");
  if (!conclusion.is_array() || conclusion.size() != 3) bad("conclusion is [s, t, eps]");
  Term lhs = parse_term(text(conclusion[0], "conclusion term"), sig, vars);
  Term rhs = parse_term(text(conclusion[1], "conclusion term"), sig, vars);
  ClusteredEquation eq{std::move(vars),       std::move(clusters), std::move(conditions),
                       std::move(lhs),        std::move(rhs),      read_distance(conclusion[2]),
                       c};
  check_clustered_equation(eq, sig);
  return eq;
}

Proof read_proof(const Json& j, const Signature& sig) {
  return read_tree<Proof>(
      j, sig, [&](const Json& c) { return read_equation(c, sig); }, [](std::string_view r) { return parse_rule(r); });
}

Json write_proof(const Proof& p, const Signature& sig) {
  return write_tree(p, sig, [&](const TermEquation& c) { return write_equation(c, sig); });
}

QuantProof read_quant_proof(const Json& j, const Signature& sig) {
  return read_tree<QuantProof>(
      j, sig, [&](const Json& c) { return read_quant_equation(c, sig); },
      [](std::string_view r) { return parse_quant_rule(r); });
}

Json write_quant_proof(const QuantProof& p, const Signature& sig) {
  return write_tree(p, sig, [&](const QuantEquation& c) { return write_quant_equation(c, sig); });
}

std::vector<std::pair<Element, Element>> read_pairs(const Json& j) {
  std::vector<std::pair<Element, Element>> out;
  for (const Json& p : array(j, "pairs")) {
    if (!p.is_array() || p.size() != 2) bad("pairs are [a, b]");
    out.emplace_back(natural(p[0], "element"), natural(p[1], "element"));
  }
  return out;
}

std::vector<DistanceConstraint> read_constraints(const Json& j) {
  std::vector<DistanceConstraint> out;
  for (const Json& c : array(j, "constraints")) {
    if (!c.is_array() || c.size() != 3) bad("constraints are [a, b, eps]");
    out.push_back({natural(c[0], "element"), natural(c[1], "element"), read_distance(c[2])});
  }
  return out;
}

Json write_partition(const Partition& p) { return p.blocks(); }

Json write_relation(const Relation& r) {
  Json out = Json::array();
  for (auto [a, b] : r.pairs())
    if (a != b) out.push_back(Json::array({a, b}));
  return out;
}

Json write_assignment(std::span<const Element> assignment, const VarSet& vars) {
  Json out = Json::object();
  for (VarId v = 0; v < assignment.size(); ++v) out[vars.name(v)] = assignment[v];
  return out;
}

}  // namespace hspkit::io
