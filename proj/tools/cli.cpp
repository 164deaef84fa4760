#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>

#include "hspkit/io.hpp"

namespace hspkit::cli {

namespace {

using io::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Bounds {
  std::size_t max_carrier = 64;
  std::size_t max_universe = 20000;
  std::size_t max_model = 3;
  std::uint64_t seed = 0;
};

struct Outcome {
  std::string verdict;
  int code = affirmative;
  Json certificate;
  Json bounds = Json::object();
};

Outcome yes(Json certificate = nullptr) { return {"true", affirmative, std::move(certificate)}; }
Outcome no(Json certificate = nullptr) { return {"false", negative, std::move(certificate)}; }
Outcome value(Json certificate) { return {"value", affirmative, std::move(certificate)}; }

// A path, or JSON given inline when the argument starts with '[' or '{'.
Json load_arg(const std::string& arg, const char* option) {
  if (arg.empty()) throw UsageError(std::string("missing --") + option);
  if (arg.front() == '[' || arg.front() == '{') return io::parse(arg);
  if (!std::filesystem::exists(arg)) throw UsageError("--" + std::string(option) + ": no such file " + arg);
  return io::load(arg);
}

int exit_code(ErrorKind kind) {
  return kind == ErrorKind::size_limit_exceeded ? size_limit : malformed_input;
}

Json bounds_json(const Bounds& b) {
  return Json{{"max_carrier", b.max_carrier},
              {"max_universe", b.max_universe},
              {"max_model", b.max_model},
              {"seed", b.seed}};
}

void print(std::ostream& out, const std::string& format, const Json& report) {
  if (format != "text") {
    out << report.dump() << '\n';
    return;
  }
  for (const auto& [key, v] : report.items()) {
    if (v.is_null()) continue;
    out << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump(2)) << '\n';
  }
}

class Commands {
 public:
  explicit Commands(const Bounds& bounds) : bounds_(bounds) {}

  void install(CLI::App& app) {
    add(app, "sat", "Check an equation in an algebra", {"algebra", "equation"}, [this] { return sat(); });
    add(app, "ineq-sat", "Check an inequation in an ordered algebra", {"algebra", "inequation"},
        [this] { return ineq_sat(); });
    add(app, "qsat", "Check a quantitative or clustered equation in a quantitative algebra", {"algebra", "equation"},
        [this] { return qsat(); });
    add(app, "congr", "Congruence generated by pairs", {"algebra", "pairs"}, [this] { return congr(); });
    add(app, "ord-congr", "Stable preorder generated by pairs", {"algebra", "pairs"},
        [this] { return ord_congr(); });
    add(app, "qcongr", "Pseudometric congruence generated by distance constraints", {"algebra", "constraints"},
        [this] { return qcongr(); });
    add(app, "quotient", "Quotient by the congruence generated by pairs or constraints",
        {"algebra", "pairs", "constraints", "kind"}, [this] { return quotient_cmd(); });
    add(app, "hsp", "Decide membership of a candidate in the variety of a class algebra", {"class", "candidate"},
        [this] { return hsp(); });
    add(app, "free", "Free algebra on n generators in the variety of an algebra", {"algebra", "generators"},
        [this] { return free(); });
    add(app, "eventual", "Least index from which an algebra satisfies a sequence", {"algebra", "sequence"},
        [this] { return eventual(); });
    add(app, "prove", "Search for an equational proof at a depth", {"signature", "gamma", "goal", "depth"},
        [this] { return prove(); });
    add(app, "entails", "Countermodel search, then proof search", {"signature", "gamma", "goal", "depth"},
        [this] { return entails(); });
    add(app, "qprove", "Search for a quantitative proof at a depth", {"signature", "gamma", "goal", "depth"},
        [this] { return qprove(); });
    add(app, "qentails", "Countermodels from a corpus, then quantitative proof search",
        {"signature", "gamma", "goal", "depth", "models"}, [this] { return qentails(); });
    add(app, "creflexive", "Decide c-reflexivity of a surjection between metric spaces", {"map", "c"},
        [this] { return creflexive(); });
    add(app, "check-proof", "Check an equational proof", {"signature", "gamma", "proof"},
        [this] { return check_proof_cmd(); });
    add(app, "qcheck-proof", "Check a quantitative proof", {"signature", "gamma", "proof"},
        [this] { return qcheck_proof_cmd(); });
  }

  Outcome run(const std::string& name) { return handlers_.at(name)(); }

 private:
  void add(CLI::App& app, const std::string& name, const std::string& help, std::vector<std::string> options,
           std::function<Outcome()> handler) {
    CLI::App* sub = app.add_subcommand(name, help);
    for (const std::string& o : options) {
      if (o == "depth") {
        sub->add_option("--depth", depth_, "Term depth bound")->capture_default_str();
      } else if (o == "generators") {
        sub->add_option("--generators", generators_, "Number of free generators")->required();
      } else if (o == "kind") {
        sub->add_option("--kind", kind_, "plain, ordered or quant")
            ->check(CLI::IsMember({"plain", "ordered", "quant"}))
            ->capture_default_str();
      } else if (o == "c") {
        sub->add_option("--c", c_, "Cluster bound: a natural >= 2 or omega")->required();
      } else {
        const bool optional = o == "gamma" || o == "models" || o == "pairs" || o == "constraints";
        auto* opt = sub->add_option("--" + o, args_[o], "JSON file, or inline JSON");
        if (!optional) opt->required();
      }
    }
    handlers_[name] = std::move(handler);
  }

  Json arg(const std::string& name) { return load_arg(args_[name], name.c_str()); }

  template <class A>
  const A& sized(const A& alg) {
    if (alg.size() > bounds_.max_carrier)
      throw Error(ErrorKind::size_limit_exceeded, "carrier of size " + std::to_string(alg.size()) +
                                                      " exceeds --max-carrier " + std::to_string(bounds_.max_carrier));
    return alg;
  }

  FiniteAlgebra algebra(const std::string& name = "algebra") {
    return sized(io::read_algebra(arg(name)));
  }

  Signature signature() { return io::read_signature(arg("signature")); }

  Json gamma_json() { return args_["gamma"].empty() ? Json::array() : arg("gamma"); }

  Json depth_bound() const { return Json{{"depth", depth_}, {"max_universe", bounds_.max_universe}}; }

  static Json violation(const Json& equation, const std::vector<Element>& assignment, const VarSet& vars) {
    return Json{{"equation", equation}, {"assignment", io::write_assignment(assignment, vars)}};
  }

  Outcome sat() {
    const FiniteAlgebra a = algebra();
    const TermEquation eq = io::read_equation(arg("equation"), a.signature());
    const SatisfactionResult r = satisfies_equation(a, eq);
    if (r.holds) return yes();
    return no(violation(io::write_equation(eq, a.signature()), *r.counterexample, eq.vars));
  }

  Outcome ineq_sat() {
    const OrderedAlgebra a = sized(io::read_ordered(arg("algebra")));
    const TermInequation ineq = io::read_equation(arg("inequation"), a.signature());
    const SatisfactionResult r = satisfies_inequation(a, ineq);
    if (r.holds) return yes();
    return no(violation(io::write_equation(ineq, a.signature()), *r.counterexample, ineq.vars));
  }

  Outcome qsat() {
    const QuantAlgebra a = sized(io::read_quant(arg("algebra")));
    const Json doc = arg("equation");
    if (doc.contains("conclusion")) {
      const ClusteredEquation eq = io::read_clustered(doc, a.signature());
      const SatisfactionResult r = satisfies_clustered_equation(a, eq);
      if (r.holds) return yes();
      return no(Json{{"assignment", io::write_assignment(*r.counterexample, eq.vars)}});
    }
    const QuantEquation eq = io::read_quant_equation(doc, a.signature());
    const SatisfactionResult r = satisfies_quant_equation(a, eq);
    if (r.holds) return yes();
    return no(violation(io::write_quant_equation(eq, a.signature()), *r.counterexample, eq.vars));
  }

  std::vector<std::pair<Element, Element>> pairs() {
    return args_["pairs"].empty() ? std::vector<std::pair<Element, Element>>{} : io::read_pairs(arg("pairs"));
  }

  std::vector<DistanceConstraint> constraints() {
    return args_["constraints"].empty() ? std::vector<DistanceConstraint>{} : io::read_constraints(arg("constraints"));
  }

  Outcome congr() {
    const FiniteAlgebra a = algebra();
    return value(Json{{"blocks", io::write_partition(congruence_generated(a, pairs()))}});
  }

  Outcome ord_congr() {
    const OrderedAlgebra a = sized(io::read_ordered(arg("algebra")));
    return value(Json{{"pairs", io::write_relation(stable_preorder_generated(a, pairs()))}});
  }

  Outcome qcongr() {
    const QuantAlgebra a = sized(io::read_quant(arg("algebra")));
    return value(Json{{"d", io::write_metric(quant_congruence_generated(a, constraints()))["d"]}});
  }

  Outcome quotient_cmd() {
    if (kind_ == "ordered") {
      const OrderedAlgebra a = sized(io::read_ordered(arg("algebra")));
      const OrderedQuotient q = quotient_ordered(a, stable_preorder_generated(a, pairs()));
      return value(Json{{"algebra", io::write_ordered(q.algebra)}, {"surjection", q.surjection}});
    }
    if (kind_ == "quant") {
      const QuantAlgebra a = sized(io::read_quant(arg("algebra")));
      const QuantQuotient q = quotient_quant(a, quant_congruence_generated(a, constraints()));
      return value(Json{{"algebra", io::write_quant(q.algebra)}, {"surjection", q.surjection}});
    }
    const FiniteAlgebra a = algebra();
    const Quotient q = quotient(a, congruence_generated(a, pairs()));
    return value(Json{{"algebra", io::write_algebra(q.algebra)}, {"surjection", q.surjection}});
  }

  FreeAlgebraLimits free_limits() const {
    FreeAlgebraLimits limits;
    limits.max_elements = bounds_.max_carrier;
    return limits;
  }

  Outcome hsp() {
    const FiniteAlgebra cls = algebra("class");
    const FiniteAlgebra candidate = algebra("candidate");
    const HspResult r = hsp_member(candidate, cls, free_limits());
    if (!r.member)
      return no(violation(io::write_equation(*r.separating_identity, cls.signature()), *r.violating_assignment,
                          r.separating_identity->vars));
    return yes(Json{{"free_size", r.free->algebra.size()},
                    {"generator_images", r.generator_images},
                    {"surjection", *r.surjection}});
  }

  Outcome free() {
    const FiniteAlgebra a = algebra();
    const FreeAlgebraWitness w = free_algebra_in_variety(a, generators_, free_limits());
    Json terms = Json::array();
    for (const Term& t : w.witness_terms) terms.push_back(to_string(t, a.signature(), w.vars));
    return value(Json{{"algebra", io::write_algebra(w.algebra)},
                      {"generators", w.generators},
                      {"witness_terms", std::move(terms)}});
  }

  Outcome eventual() {
    const FiniteAlgebra a = algebra();
    const auto i0 = eventual_satisfaction(a, io::read_equations(arg("sequence"), a.signature()));
    if (!i0) return no(Json{{"i0", nullptr}});
    return value(Json{{"i0", *i0}});
  }

  Outcome prove() {
    const Signature sig = signature();
    const auto gamma = io::read_equations(gamma_json(), sig);
    const TermEquation goal = io::read_equation(arg("goal"), sig);
    const auto proof = derive(gamma, goal, sig, depth_, DeriveLimits{.max_universe = bounds_.max_universe});
    Outcome o = proof ? Outcome{"proved", affirmative, Json{{"proof", io::write_proof(*proof, sig)}}}
                      : Outcome{"unknown", unknown, nullptr};
    o.bounds = depth_bound();
    return o;
  }

  Outcome entails() {
    const Signature sig = signature();
    const auto gamma = io::read_equations(gamma_json(), sig);
    const TermEquation goal = io::read_equation(arg("goal"), sig);
    EntailmentLimits limits;
    limits.max_model_size = bounds_.max_model;
    limits.derive.max_universe = bounds_.max_universe;
    const EntailmentVerdict v = semantic_entails(gamma, goal, sig, depth_, limits);
    Outcome o;
    if (const auto* p = std::get_if<Proved>(&v)) {
      o = {"proved", affirmative, Json{{"proof", io::write_proof(p->proof, sig)}}};
    } else if (const auto* r = std::get_if<Refuted>(&v)) {
      o = {"refuted", negative,
           Json{{"countermodel", io::write_algebra(r->countermodel)},
                {"assignment", io::write_assignment(r->assignment, goal.vars)}}};
    } else {
      o = {"unknown", unknown, Json{{"universe_size", std::get<Unknown>(v).universe_size}}};
    }
    o.bounds = depth_bound();
    o.bounds["max_model"] = bounds_.max_model;
    return o;
  }

  Outcome quant_search(const Signature& sig, const std::vector<QuantEquation>& gamma, const QuantEquation& goal) {
    QuantDeriveLimits limits;
    limits.max_universe = bounds_.max_universe;
    const QuantVerdict v = quant_entails(gamma, goal, sig, depth_, limits);
    Outcome o;
    if (const auto* p = std::get_if<QuantProved>(&v)) {
      o = {"proved", affirmative, Json{{"proof", io::write_quant_proof(p->proof, sig)}}};
    } else if (const auto* b = std::get_if<BoundWitness>(&v)) {
      o = {"unknown", unknown, Json{{"best", to_string(b->best)}, {"proof", io::write_quant_proof(b->proof, sig)}}};
    } else {
      o = {"unknown", unknown, Json{{"best", "inf"}, {"universe_size", std::get<QuantUnknown>(v).universe_size}}};
    }
    o.bounds = depth_bound();
    return o;
  }

  Outcome qprove() {
    const Signature sig = signature();
    const auto gamma = io::read_quant_equations(gamma_json(), sig);
    return quant_search(sig, gamma, io::read_quant_equation(arg("goal"), sig));
  }

  Outcome qentails() {
    const Signature sig = signature();
    const auto gamma = io::read_quant_equations(gamma_json(), sig);
    const QuantEquation goal = io::read_quant_equation(arg("goal"), sig);
    if (!args_["models"].empty()) {
      const Json models = arg("models");
      if (!models.is_array()) throw Error(ErrorKind::malformed_input, "--models must be a JSON array of algebras");
      for (std::size_t i = 0; i < models.size(); ++i) {
        const QuantAlgebra m = sized(io::read_quant(models[i]));
        require_same_signature(m.signature(), sig);
        const bool models_gamma = std::all_of(gamma.begin(), gamma.end(), [&](const QuantEquation& g) {
          return satisfies_quant_equation(m, g).holds;
        });
        if (!models_gamma) continue;
        const SatisfactionResult r = satisfies_quant_equation(m, goal);
        if (!r.holds)
          return {"refuted", negative,
                  Json{{"model_index", i},
                       {"countermodel", io::write_quant(m)},
                       {"assignment", io::write_assignment(*r.counterexample, goal.vars)}}};
      }
    }
    return quant_search(sig, gamma, goal);
  }

  static DistanceMatrix metric_of(const Json& j) {
    return j.contains("signature") ? io::read_quant(j).metric() : io::read_metric(j);
  }

  Outcome creflexive() {
    const Json doc = arg("map");
    if (!doc.is_object() || !doc.contains("domain") || !doc.contains("codomain") || !doc.contains("map"))
      throw Error(ErrorKind::malformed_input, "a map document has \"domain\", \"codomain\" and \"map\"");
    const DistanceMatrix dom = metric_of(doc["domain"]);
    const DistanceMatrix cod = metric_of(doc["codomain"]);
    ElementMap e;
    for (const Json& x : doc["map"]) {
      if (!x.is_number_unsigned()) throw Error(ErrorKind::malformed_input, "map entries are elements");
      e.push_back(x.get<Element>());
    }
    const Cardinal c = parse_cardinal(c_);
    Outcome o = is_c_reflexive(dom, cod, e, c) ? yes() : no();
    o.bounds = Json{{"c", to_string(c)}};
    return o;
  }

  static Json failure(const std::vector<std::size_t>& path, const std::string& reason) {
    std::string p = "root";
    for (std::size_t i : path) p += "/" + std::to_string(i);
    return Json{{"path", p}, {"reason", reason}};
  }

  Outcome check_proof_cmd() {
    const Signature sig = signature();
    const auto gamma = io::read_equations(gamma_json(), sig);
    const ProofCheck r = verify_proof(io::read_proof(arg("proof"), sig), gamma, sig);
    return r.ok ? yes() : no(failure(r.path, r.reason));
  }

  Outcome qcheck_proof_cmd() {
    const Signature sig = signature();
    const auto gamma = io::read_quant_equations(gamma_json(), sig);
    const QuantProofCheck r = verify_quant_proof(io::read_quant_proof(arg("proof"), sig), gamma, sig);
    return r.ok ? yes() : no(failure(r.path, r.reason));
  }

  const Bounds& bounds_;
  std::map<std::string, std::string> args_;
  std::map<std::string, std::function<Outcome()>> handlers_;
  std::size_t depth_ = 3;
  std::size_t generators_ = 0;
  std::string kind_ = "plain";
  std::string c_;
};

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  Bounds bounds;
  std::string format = "json";
  CLI::App app{"Finite universal algebra toolkit", "hspkit"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--max-carrier", bounds.max_carrier, "Largest carrier loaded or built")->capture_default_str();
  app.add_option("--max-universe", bounds.max_universe, "Largest term universe")->capture_default_str();
  app.add_option("--max-model", bounds.max_model, "Largest countermodel size")->capture_default_str();
  app.add_option("--seed", bounds.seed, "Seed for randomized sampling")->capture_default_str();
  Commands commands(bounds);
  commands.install(app);

  Json report;
  report["command"] = args.empty() ? "" : args.front();
  report["verdict"] = nullptr;
  report["certificate"] = nullptr;
  report["bounds_used"] = nullptr;
  int code = affirmative;
  auto finish = [&](int c) {
    report["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    print(out, format, report);
    return c;
  };
  auto fail = [&](int c, const std::string& kind, const std::string& message) {
    report["verdict"] = "error";
    report["error"] = Json{{"kind", kind}, {"message", message}};
    return finish(c);
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return affirmative;
  } catch (const CLI::ParseError& e) {
    return fail(usage_error, "UsageError", e.what());
  }
  const std::string name = app.get_subcommands().front()->get_name();
  report["command"] = name;
  try {
    Outcome o = commands.run(name);
    Json used = bounds_json(bounds);
    for (const auto& [k, v] : o.bounds.items()) used[k] = v;
    report["verdict"] = o.verdict;
    report["certificate"] = std::move(o.certificate);
    report["bounds_used"] = std::move(used);
    code = o.code;
  } catch (const UsageError& e) {
    return fail(usage_error, "UsageError", e.what());
  } catch (const Error& e) {
    return fail(exit_code(e.kind()), std::string(to_string(e.kind())), e.what());
  } catch (const std::exception& e) {
    return fail(size_limit, "InternalError", e.what());
  }
  return finish(code);
}

}  // namespace hspkit::cli
