#pragma once

// JSON reading and writing for every object the command-line front end
// exchanges. Readers throw Error(malformed_input) for documents of the wrong
// shape and let the library's own validation errors through.

#include <filesystem>

#include <json.hpp>

#include "hspkit/eqlogic.hpp"
#include "hspkit/ordalg.hpp"
#include "hspkit/quantalg.hpp"

namespace hspkit::io {

using Json = nlohmann::ordered_json;

// Parses a file, throwing malformed_input on unreadable or invalid JSON.
Json load(const std::filesystem::path& path);
Json parse(std::string_view text);

// [["name", arity], ...], or an object carrying such a list under
// "signature".
Signature read_signature(const Json& j);
Json write_signature(const Signature& sig);

// {"signature": ..., "size": n, "tables": {"name": [flat row-major table]}}
FiniteAlgebra read_algebra(const Json& j);
Json write_algebra(const FiniteAlgebra& alg);

// An algebra document with "leq": [[a, b], ...]. Reflexive and transitive
// pairs may be omitted.
OrderedAlgebra read_ordered(const Json& j);
Json write_ordered(const OrderedAlgebra& alg);

// {"size": n, "d": rows}. Each row is either complete or starts at the
// diagonal; entries are "p/q", "inf", decimals or JSON numbers, and the
// lower triangle is filled in by symmetry.
DistanceMatrix read_metric(const Json& j);
Json write_metric(const DistanceMatrix& d);
Distance read_distance(const Json& j);

// An algebra document with a "d" field in the metric format.
QuantAlgebra read_quant(const Json& j);
Json write_quant(const QuantAlgebra& alg);

// {"vars": [...], "lhs": "...", "rhs": "..."}
TermEquation read_equation(const Json& j, const Signature& sig);
Json write_equation(const TermEquation& eq, const Signature& sig);
// A JSON array of equations.
EquationSequence read_equations(const Json& j, const Signature& sig);

// An equation document with "eps".
QuantEquation read_quant_equation(const Json& j, const Signature& sig);
Json write_quant_equation(const QuantEquation& eq, const Signature& sig);
std::vector<QuantEquation> read_quant_equations(const Json& j, const Signature& sig);

// {"vars", "clusters": [[names]], "conditions": [["x", "y", eps]],
//  "conclusion": ["s", "t", eps], "c": n or "omega"}. Missing clusters
// mean one cluster per variable.
ClusteredEquation read_clustered(const Json& j, const Signature& sig);

// Nested {"rule", "conclusion", "children"} nodes, with "symbol" on Cong,
// "substitution": {"x": "term"} on Subst and "axiom": index on Axiom.
Proof read_proof(const Json& j, const Signature& sig);
Json write_proof(const Proof& p, const Signature& sig);
QuantProof read_quant_proof(const Json& j, const Signature& sig);
Json write_quant_proof(const QuantProof& p, const Signature& sig);

// [[a, b], ...]
std::vector<std::pair<Element, Element>> read_pairs(const Json& j);
// [[a, b, eps], ...]
std::vector<DistanceConstraint> read_constraints(const Json& j);

Json write_partition(const Partition& p);
Json write_relation(const Relation& r);
Json write_assignment(std::span<const Element> assignment, const VarSet& vars);

}  // namespace hspkit::io
