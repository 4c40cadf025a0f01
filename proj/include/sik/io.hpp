#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sik/cij.hpp"
#include "sik/morse.hpp"
#include "sik/oracle.hpp"

namespace sik {

using Json = nlohmann::ordered_json;

/// {"rational":[p,q]} or {"real":"decimal", "radius":"decimal"} (radius optional).
Json to_json(const Angle& a);
Angle angle_from_json(const Json& j);

Json to_json(const NormalFormDecomposition& d);
/// {"n","p":[p-,p0,p+],"q":[q-,q0,q+],"thetas_over_2pi":[...],
/// "alphas_over_2pi":[...],"betas_over_2pi":[...],"hyp_dim"}. Missing counts
/// default to 0; unknown keys are rejected.
NormalFormDecomposition decomposition_from_json(const Json& j);

Json to_json(const IndexSeed& s);
IndexSeed seed_from_json(const Json& j);

Json to_json(const OrbitRecord& r);
Json to_json(const System& sys);
/// {"n":int,"orbits":[{"label","period","dec","seed"}], "source":{...}?}.
System system_from_json(const Json& j);

/// {"n":int,"rows":[[...],...]}
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// {"type":"N1","lambda":1,"b":1} | {"type":"D","lambda":2} |
/// {"type":"R","theta":angle} | {"type":"N2","theta":angle,"B":[[..],[..]]}
/// with "triviality":"trivial"|"nontrivial" accepted in place of B.
Json to_json(const BasicBlock& b);
BasicBlock block_from_json(const Json& j);

/// {"n":int,"segments":[{"S":[[...]],"dt":real}]}
Json to_json(const PathSpec& path);
PathSpec path_from_json(const Json& j);

/// {"N","m":[...],"m_bar","delta","checks":{...}}; checks are not trusted on input.
Json to_json(const CijTuple& t);
CijTuple tuple_from_json(const Json& j);

/// Parses text, mapping parse failures to InputError.
Json parse_json(const std::string& text);
/// Throws InputError when j has a key outside allowed.
void require_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& what);

}  // namespace sik
