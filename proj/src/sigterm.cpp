#include "hspkit/sigterm.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

namespace hspkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::unknown_variable: return "UnknownVariable";
    case ErrorKind::arity_mismatch: return "ArityMismatch";
    case ErrorKind::signature_mismatch: return "SignatureMismatch";
    case ErrorKind::size_limit_exceeded: return "SizeLimitExceeded";
    case ErrorKind::not_a_congruence: return "NotACongruence";
    case ErrorKind::not_stable: return "NotStable";
    case ErrorKind::negative_epsilon: return "NegativeEpsilon";
    case ErrorKind::malformed_proof: return "MalformedProof";
    case ErrorKind::malformed_input: return "MalformedInput";
    case ErrorKind::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

Signature::Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  std::set<std::string_view> seen;
  for (const Symbol& s : symbols_) {
    if (s.name.empty())
      throw Error(ErrorKind::malformed_input, "empty symbol name");
    if (!seen.insert(s.name).second)
      throw Error(ErrorKind::malformed_input, "duplicate symbol '" + s.name + "'");
  }
}

std::optional<SymbolId> Signature::find(std::string_view name) const {
  for (SymbolId i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

bool Signature::has_constants() const {
  return std::any_of(symbols_.begin(), symbols_.end(),
                     [](const Symbol& s) { return s.arity == 0; });
}

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string_view> seen;
  for (const std::string& n : names_) {
    if (n.empty()) throw Error(ErrorKind::malformed_input, "empty variable name");
    if (!seen.insert(n).second)
      throw Error(ErrorKind::malformed_input, "duplicate variable '" + n + "'");
  }
}

VarSet VarSet::standard(std::size_t n) {
  static const char* const short_names[] = {"x", "y", "z", "u", "v", "w"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i)
    names.push_back(n <= 6 ? std::string(short_names[i]) : "x" + std::to_string(i + 1));
  return VarSet(std::move(names));
}

std::optional<VarId> VarSet::find(std::string_view name) const {
  for (VarId i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::var(VarId id) {
  auto node = std::make_shared<Node>(Node{true, id, {}, 0, mix(0x51ed270b, id)});
  return Term(std::move(node));
}

Term Term::app(SymbolId symbol, std::vector<Term> children) {
  std::size_t depth = 0;
  std::size_t h = mix(0x2545f491, symbol);
  for (const Term& c : children) {
    depth = std::max(depth, c.depth());
    h = mix(h, c.hash());
  }
  auto node = std::make_shared<Node>(Node{false, symbol, std::move(children), depth + 1, h});
  return Term(std::move(node));
}

Term Term::app(const Signature& sig, SymbolId symbol, std::vector<Term> children) {
  if (symbol >= sig.size())
    throw Error(ErrorKind::signature_mismatch, "unknown symbol #" + std::to_string(symbol));
  if (sig.arity(symbol) != children.size())
    throw Error(ErrorKind::arity_mismatch,
                "symbol '" + sig.name(symbol) + "' expects " +
                    std::to_string(sig.arity(symbol)) + " arguments, got " +
                    std::to_string(children.size()));
  return app(symbol, std::move(children));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.is_var() != b.is_var() || a.node_->index != b.node_->index)
    return false;
  auto ca = a.children();
  auto cb = b.children();
  return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.is_var() != b.is_var())
    return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = a.node_->index <=> b.node_->index; c != 0) return c;
  auto ca = a.children();
  auto cb = b.children();
  return std::lexicographical_compare_three_way(ca.begin(), ca.end(), cb.begin(), cb.end());
}

namespace {

void collect_vars(const Term& t, std::set<VarId>& out) {
  if (t.is_var()) {
    out.insert(t.var_index());
    return;
  }
  for (const Term& c : t.children()) collect_vars(c, out);
}

}  // namespace

std::vector<VarId> vars_of(const Term& t) {
  std::set<VarId> s;
  collect_vars(t, s);
  return {s.begin(), s.end()};
}

void check_well_formed(const Term& t, const Signature& sig, std::size_t num_vars) {
  if (t.is_var()) {
    if (t.var_index() >= num_vars)
      throw Error(ErrorKind::unknown_variable,
                  "variable #" + std::to_string(t.var_index()) + " outside variable set");
    return;
  }
  if (t.symbol() >= sig.size())
    throw Error(ErrorKind::signature_mismatch, "unknown symbol #" + std::to_string(t.symbol()));
  if (sig.arity(t.symbol()) != t.children().size())
    throw Error(ErrorKind::arity_mismatch, "wrong child count under '" + sig.name(t.symbol()) + "'");
  for (const Term& c : t.children()) check_well_formed(c, sig, num_vars);
}

Term substitute(const Term& t, const Substitution& sub) {
  if (t.is_var()) {
    auto it = sub.find(t.var_index());
    if (it == sub.end())
      throw Error(ErrorKind::unknown_variable,
                  "substitution undefined on variable #" + std::to_string(t.var_index()));
    return it->second;
  }
  std::vector<Term> children;
  children.reserve(t.children().size());
  for (const Term& c : t.children()) children.push_back(substitute(c, sub));
  return Term::app(t.symbol(), std::move(children));
}

Term normalize_vars(const Term& t, std::map<VarId, VarId>& renaming) {
  if (t.is_var()) {
    auto [it, inserted] = renaming.try_emplace(t.var_index(), renaming.size());
    return Term::var(it->second);
  }
  std::vector<Term> children;
  for (const Term& c : t.children()) children.push_back(normalize_vars(c, renaming));
  return Term::app(t.symbol(), std::move(children));
}

namespace {

std::size_t sat_mul(std::size_t a, std::size_t b) {
  constexpr auto max = std::numeric_limits<std::size_t>::max();
  if (a != 0 && b > max / a) return max;
  return a * b;
}

std::size_t sat_add(std::size_t a, std::size_t b) {
  constexpr auto max = std::numeric_limits<std::size_t>::max();
  return a > max - b ? max : a + b;
}

std::size_t sat_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

}  // namespace

std::size_t count_terms(const Signature& sig, std::size_t num_vars, std::size_t max_depth) {
  std::size_t level = num_vars;
  for (std::size_t d = 1; d <= max_depth; ++d) {
    std::size_t next = num_vars;
    for (const Symbol& s : sig.symbols()) next = sat_add(next, sat_pow(level, s.arity));
    if (next == level) break;
    level = next;
  }
  return level;
}

std::vector<Term> enumerate_terms(const Signature& sig, std::size_t num_vars,
                                  std::size_t max_depth) {
  std::vector<Term> level;
  for (VarId v = 0; v < num_vars; ++v) level.push_back(Term::var(v));
  for (std::size_t d = 1; d <= max_depth; ++d) {
    std::vector<Term> next;
    for (VarId v = 0; v < num_vars; ++v) next.push_back(level[v]);
    for (SymbolId s = 0; s < sig.size(); ++s) {
      const std::size_t k = sig.arity(s);
      if (k > 0 && level.empty()) continue;
      std::vector<std::size_t> idx(k, 0);
      while (true) {
        std::vector<Term> children;
        children.reserve(k);
        for (std::size_t i : idx) children.push_back(level[i]);
        next.push_back(Term::app(s, std::move(children)));
        std::size_t pos = k;
        while (pos > 0) {
          if (++idx[pos - 1] < level.size()) break;
          idx[--pos] = 0;
        }
        if (pos == 0) break;
      }
    }
    if (next.size() == level.size()) break;
    level = std::move(next);
  }
  return level;
}

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, const Signature& sig, const VarSet& vars)
      : text_(text), sig_(sig), vars_(vars) {}

  Term parse() {
    Term t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  static bool is_delim(char c) {
    return c == '(' || c == ')' || c == ',' || std::isspace(static_cast<unsigned char>(c));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::malformed_input,
                "cannot parse term '" + std::string(text_) + "' at offset " +
                    std::to_string(pos_) + ": " + why);
  }

  Term term() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    std::string_view name = text_.substr(start, pos_ - start);
    skip_ws();
    const bool has_args = pos_ < text_.size() && text_[pos_] == '(';
    auto sym = sig_.find(name);
    if (!has_args) {
      if (sym) {
        if (sig_.arity(*sym) != 0)
          throw Error(ErrorKind::arity_mismatch,
                      "symbol '" + std::string(name) + "' used without arguments");
        return Term::app(*sym);
      }
      if (auto v = vars_.find(name)) return Term::var(*v);
      throw Error(ErrorKind::unknown_variable, "unknown variable '" + std::string(name) + "'");
    }
    if (!sym)
      throw Error(ErrorKind::signature_mismatch, "unknown symbol '" + std::string(name) + "'");
    ++pos_;
    std::vector<Term> children;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ')') {
      ++pos_;
    } else {
      while (true) {
        children.push_back(term());
        skip_ws();
        if (pos_ >= text_.size()) fail("unbalanced parentheses");
        if (text_[pos_] == ',') { ++pos_; continue; }
        if (text_[pos_] == ')') { ++pos_; break; }
        fail("expected ',' or ')'");
      }
    }
    return Term::app(sig_, *sym, std::move(children));
  }

  std::string_view text_;
  const Signature& sig_;
  const VarSet& vars_;
  std::size_t pos_ = 0;
};

void print_term(const Term& t, const Signature& sig, const VarSet& vars, std::string& out) {
  if (t.is_var()) {
    out += vars.name(t.var_index());
    return;
  }
  out += sig.name(t.symbol());
  if (t.children().empty()) return;
  out += '(';
  bool first = true;
  for (const Term& c : t.children()) {
    if (!first) out += ',';
    first = false;
    print_term(c, sig, vars, out);
  }
  out += ')';
}

}  // namespace

Term parse_term(std::string_view text, const Signature& sig, const VarSet& vars) {
  return TermParser(text, sig, vars).parse();
}

std::string to_string(const Term& t, const Signature& sig, const VarSet& vars) {
  std::string out;
  print_term(t, sig, vars, out);
  return out;
}

}  // namespace hspkit
