#include <doctest.h>

#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "hspkit/io.hpp"

using namespace hspkit;
using io::Json;

namespace {

const std::string data = HSPKIT_DATA_DIR;

struct Run {
  int code;
  Json report;
};

Run run(std::vector<std::string> args) {
  for (std::string& a : args)
    if (a.ends_with(".json") && a.front() != '[' && a.front() != '{') a = data + "/" + a;
  std::ostringstream out;
  const int code = cli::execute(args, out);
  return {code, Json::parse(out.str())};
}

Json equation_json(const std::string& file, const Signature& sig) {
  return io::write_equation(io::read_equation(io::load(data + "/" + file), sig), sig);
}

}  // namespace

TEST_CASE("hsp reports the separating identity") {
  const Run r = run({"hsp", "--class", "z2.json", "--candidate", "z4.json"});
  CHECK(r.code == 1);
  CHECK(r.report["verdict"] == "false");
  CHECK(r.report["certificate"]["equation"]["lhs"] == "m(x,x)");
  CHECK(r.report["certificate"]["equation"]["rhs"] == "m(y,y)");

  const HspResult direct = hsp_member(fixtures::z4(), fixtures::z2(), FreeAlgebraLimits{.max_elements = 64});
  CHECK(r.report["certificate"]["equation"] == io::write_equation(*direct.separating_identity, fixtures::binary_sig()));
  CHECK(r.report["certificate"]["assignment"] ==
        io::write_assignment(*direct.violating_assignment, direct.separating_identity->vars));

  const Run member = run({"hsp", "--class", "z4.json", "--candidate", "z2.json"});
  CHECK(member.code == 0);
  CHECK(member.report["verdict"] == "true");
  CHECK(member.report["certificate"]["surjection"].size() == 16);
}

TEST_CASE("sat, eventual and creflexive") {
  CHECK(run({"sat", "--algebra", "z2.json", "--equation", "refl.json"}).code == 0);
  const Run lz = run({"sat", "--algebra", "left_zero2.json", "--equation", "comm.json"});
  CHECK(lz.code == 1);
  CHECK(lz.report["certificate"]["assignment"] == Json{{"x", 0}, {"y", 1}});

  const Run e1 = run({"eventual", "--algebra", "z2.json", "--sequence", "seq_then_comm.json"});
  CHECK(e1.code == 0);
  CHECK(e1.report["certificate"]["i0"] == 1);
  const Run e2 = run({"eventual", "--algebra", "z2.json", "--sequence", "seq_comm_then_trivial.json"});
  CHECK(e2.code == 1);
  CHECK(e2.report["certificate"]["i0"].is_null());

  CHECK(run({"creflexive", "--map", "far_to_near.json", "--c", "2"}).code == 0);
  CHECK(run({"creflexive", "--map", "far_to_near.json", "--c", "3"}).code == 1);
  CHECK(run({"creflexive", "--map", "far_to_near.json", "--c", "omega"}).code == 1);
}

TEST_CASE("entailment commands agree with the library") {
  const Signature sig = fixtures::binary_sig();
  const Run refuted = run({"entails", "--signature", "groupoid_sig.json", "--goal", "comm.json", "--depth", "2"});
  CHECK(refuted.code == 1);
  CHECK(refuted.report["verdict"] == "refuted");
  const EntailmentVerdict v =
      semantic_entails({}, io::read_equation(io::load(data + "/comm.json"), sig), sig, 2);
  const Refuted& direct = std::get<Refuted>(v);
  CHECK(refuted.report["certificate"]["countermodel"] == io::write_algebra(direct.countermodel));

  const Run proved = run({"prove", "--signature", "groupoid_sig.json", "--gamma", "comm_gamma.json", "--goal",
                          "comm_swap_goal.json", "--max-universe", "30000"});
  CHECK(proved.code == 0);
  const auto gamma = io::read_equations(io::load(data + "/comm_gamma.json"), sig);
  const auto goal = io::read_equation(io::load(data + "/comm_swap_goal.json"), sig);
  const auto proof = derive(gamma, goal, sig, 3, DeriveLimits{.max_universe = 30000});
  REQUIRE(proof);
  CHECK(proved.report["certificate"]["proof"] == io::write_proof(*proof, sig));
  CHECK(check_proof(io::read_proof(proved.report["certificate"]["proof"], sig), gamma, sig));

  const Run capped = run({"prove", "--signature", "groupoid_sig.json", "--gamma", "comm_gamma.json", "--goal",
                          "comm_swap_goal.json"});
  CHECK(capped.code == 70);
  CHECK(capped.report["error"]["kind"] == "SizeLimitExceeded");

  const Run lz = run({"entails", "--signature", "groupoid_sig.json", "--gamma", "lz_gamma.json", "--goal",
                      "lz_goal.json", "--max-universe", "30000"});
  CHECK(lz.code == 0);
  CHECK(lz.report["verdict"] == "proved");
  CHECK(equation_json("lz_goal.json", sig) == lz.report["certificate"]["proof"]["conclusion"]);
}

TEST_CASE("quantitative commands") {
  const Run p = run({"qcongr", "--algebra", "m3.json", "--constraints", "m3_constraints.json"});
  CHECK(p.code == 0);
  CHECK(p.report["certificate"]["d"][0] == Json::array({"0", "1/5", "6/5"}));

  const Run q = run({"quotient", "--kind", "quant", "--algebra", "m3.json", "--constraints", "[[0,1,\"0\"]]"});
  CHECK(q.code == 0);
  CHECK(q.report["certificate"]["algebra"]["size"] == 2);

  CHECK(run({"qsat", "--algebra", "half.json", "--equation", "clustered_close.json"}).code == 0);
  const Run bare = run({"qsat", "--algebra", "half.json", "--equation", "clustered_bare.json"});
  CHECK(bare.code == 1);
  CHECK(bare.report["certificate"]["assignment"] == Json{{"x", 0}, {"y", 2}});

  const Run proved = run({"qprove", "--signature", "unary_sig.json", "--gamma", "quant_chain_gamma.json", "--goal",
                          "quant_chain_goal.json", "--depth", "1"});
  CHECK(proved.code == 0);
  const Signature unary = io::read_signature(io::load(data + "/unary_sig.json"));
  const auto gamma = io::read_quant_equations(io::load(data + "/quant_chain_gamma.json"), unary);
  CHECK(check_quant_proof(io::read_quant_proof(proved.report["certificate"]["proof"], unary), gamma, unary));

  const Run tight = run({"qprove", "--signature", "unary_sig.json", "--gamma", "quant_chain_gamma.json", "--goal",
                         R"({"vars":["x","y","z"],"lhs":"x","rhs":"z","eps":"1/10"})", "--depth", "1"});
  CHECK(tight.code == 2);
  CHECK(tight.report["certificate"]["best"] == "1/5");

  // The half-unit line satisfies both hypotheses but not x =_{1/10} z.
  const std::string half_models = "[" + io::load(data + "/half.json").dump() + "]";
  const Run none = run({"qentails", "--signature", "[]", "--gamma", "quant_chain_gamma.json", "--goal",
                        R"({"vars":["x","y","z"],"lhs":"x","rhs":"z","eps":"1/10"})", "--models", half_models});
  CHECK(none.code == 2);
  const Run refuted = run({"qentails", "--signature", "[]", "--goal",
                           R"({"vars":["x","y"],"lhs":"x","rhs":"y","eps":"1/10"})", "--models", half_models});
  CHECK(refuted.code == 1);
  CHECK(refuted.report["certificate"]["assignment"] == Json{{"x", 0}, {"y", 1}});

  CHECK(run({"qcheck-proof", "--signature", "unary_sig.json", "--gamma", "triang_gamma.json", "--proof",
             "triang_proof.json"})
            .code == 0);
  const Run backwards = run({"qcheck-proof", "--signature", "unary_sig.json", "--gamma", "triang_gamma.json",
                             "--proof", "max_backwards_proof.json"});
  CHECK(backwards.code == 1);
  CHECK(backwards.report["certificate"]["path"] == "root");
}

TEST_CASE("ordered commands") {
  CHECK(run({"ineq-sat", "--algebra", "sl2.json", "--inequation", "absorb_leq.json"}).code == 0);
  const Run flipped = run({"ineq-sat", "--algebra", "sl2.json", "--inequation",
                           R"j({"vars":["x","y"],"lhs":"x","rhs":"m(x,y)"})j"});
  CHECK(flipped.code == 1);
  const Run r = run({"ord-congr", "--algebra", "sl2.json", "--pairs", "[[1,0]]"});
  CHECK(r.report["certificate"]["pairs"] == Json::array({Json::array({0, 1}), Json::array({1, 0})}));
  const Run q = run({"quotient", "--kind", "ordered", "--algebra", "sl2.json", "--pairs", "[[1,0]]"});
  CHECK(q.report["certificate"]["algebra"]["size"] == 1);
  const Run c = run({"congr", "--algebra", "z4.json", "--pairs", "[[0,2]]"});
  CHECK(c.report["certificate"]["blocks"] == Json::array({Json::array({0, 2}), Json::array({1, 3})}));
  const Run f = run({"free", "--algebra", "z2.json", "--generators", "2"});
  CHECK(f.report["certificate"]["algebra"]["size"] == 4);
}

TEST_CASE("every failure still prints a report") {
  struct Case {
    std::vector<std::string> args;
    int code;
    std::string kind;
  };
  const std::vector<Case> cases{
      {{}, 64, "UsageError"},
      {{"bogus"}, 64, "UsageError"},
      {{"sat", "--algebra", "z2.json"}, 64, "UsageError"},
      {{"sat", "--algebra", "missing.json", "--equation", "refl.json"}, 64, "UsageError"},
      {{"sat", "--algebra", "{\"size\": 2", "--equation", "refl.json"}, 65, "MalformedInput"},
      {{"sat", "--algebra", "z2.json", "--equation", R"({"vars":["x"],"lhs":"x","rhs":"y"})"}, 65,
       "UnknownVariable"},
      {{"sat", "--algebra", R"({"signature":[["m",2]],"size":2,"tables":{"m":[0,1,2,3]}})", "--equation",
        "refl.json"},
       65, "MalformedInput"},
      {{"qcongr", "--algebra", "m3.json", "--constraints", R"([[0,1,"-1"]])"}, 65, "NegativeEpsilon"},
      {{"check-proof", "--signature", "groupoid_sig.json", "--proof",
        R"({"rule":"Trans","conclusion":{"vars":["x"],"lhs":"x","rhs":"x"}})"},
       65, "MalformedProof"},
      {{"sat", "--algebra", "z4.json", "--equation", "refl.json", "--max-carrier", "3"}, 70, "SizeLimitExceeded"},
      {{"sat", "--algebra", "z2.json", "--equation", "refl.json", "--format", "yaml"}, 64, "UsageError"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.kind);
    const Run r = run(c.args);
    CHECK(r.code == c.code);
    CHECK(r.report["verdict"] == "error");
    CHECK(r.report["error"]["kind"] == c.kind);
    CHECK(r.report.contains("elapsed_ms"));
  }
}

TEST_CASE("text reports") {
  std::ostringstream out;
  CHECK(cli::execute({"sat", "--algebra", data + "/z2.json", "--equation", data + "/comm.json", "--format", "text"},
                     out) == 0);
  CHECK(out.str().starts_with("command: sat\nverdict: true\n"));
}

TEST_CASE("io round trips") {
  const Signature sig = fixtures::binary_sig();
  const FiniteAlgebra z4 = fixtures::z4();
  CHECK(io::read_algebra(io::write_algebra(z4)) == z4);
  const QuantAlgebra m3 = io::read_quant(io::load(data + "/m3.json"));
  CHECK(io::read_quant(io::write_quant(m3)) == m3);
  CHECK(m3.metric()(0, 2) == Distance(2));
  const OrderedAlgebra sl2 = io::read_ordered(io::load(data + "/sl2.json"));
  CHECK(io::read_ordered(io::write_ordered(sl2)) == sl2);
  const Signature unary = io::read_signature(io::load(data + "/unary_sig.json"));
  const auto gamma = io::read_quant_equations(io::load(data + "/triang_gamma.json"), unary);
  const QuantProof p = io::read_quant_proof(io::load(data + "/triang_proof.json"), unary);
  CHECK(check_quant_proof(p, gamma, unary));
  CHECK(io::write_quant_proof(p, unary) == io::load(data + "/triang_proof.json"));

  CHECK_THROWS_AS(io::read_metric(io::parse(R"({"size":2,"d":[["0","1"],["2","0"]]})")), Error);
  CHECK_THROWS_AS(io::read_metric(io::parse(R"({"size":2,"d":[["1","1"],["0"]]})")), Error);
  CHECK(io::read_metric(io::parse(R"({"size":2,"d":[[0, 0.5],[null, 0]]})"))(1, 0) == Distance(Rational(1, 2)));
  CHECK_THROWS_AS(io::read_clustered(io::parse(R"({"vars":["x","y"],"clusters":[["x"]],"conclusion":["x","y","1"]})"),
                                     sig),
                  Error);
  const ClusteredEquation eq = io::read_clustered(io::load(data + "/clustered_close.json"), Signature{});
  CHECK(eq.c == Cardinal::finite(3));
  CHECK(eq.clusters.block_count() == 1);
}
