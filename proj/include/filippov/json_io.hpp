#ifndef FILIPPOV_JSON_IO_HPP
#define FILIPPOV_JSON_IO_HPP

#include <string>

#include "json.hpp"

#include "filippov/algebroid.hpp"
#include "filippov/cochain.hpp"
#include "filippov/cohomology.hpp"
#include "filippov/deformation.hpp"
#include "filippov/multipoly.hpp"
#include "filippov/nlie.hpp"

// Indices are 1-based on the wire and 0-based in memory. Parsers throw
// input_error naming the JSON location of the problem.
namespace filippov::json_io
{

using Json = nlohmann::ordered_json;

Json parse_text(const std::string &text, const std::string &source = "input");

Json to_json(const Rational &r);
Rational rational_from_json(const Json &j, const std::string &at = "");
Json to_json(const Vector &v);
// {"k": "p/q"} sparse vector with 1-based keys.
Json sparse_to_json(const Vector &v);
Vector sparse_from_json(const Json &j, int dim, const std::string &at = "");

Json to_json(const MultiPoly &p);
MultiPoly poly_from_json(const Json &j, int num_vars, const std::string &at = "");
Json to_json(const PolyVectorField &v);
PolyVectorField field_from_json(const Json &j, int num_vars, const std::string &at = "");
Json to_json(const PolySection &s);
PolySection section_from_json(const Json &j, int num_vars, int rank, const std::string &at = "");

Json to_json(const RationalMatrix &m);
RationalMatrix matrix_from_json(const Json &j, const std::string &at = "");

Json to_json(const NLieAlgebra &a);
NLieAlgebra algebra_from_json(const Json &j, const std::string &at = "");
Json to_json(const Representation &rho);
Representation representation_from_json(const Json &j, const std::string &at = "");
Json to_json(const Cochain &c);
Cochain cochain_from_json(const Json &j, const std::string &at = "");

Json to_json(const DeformationPath &p);
DeformationPath path_from_json(const Json &j, const std::string &at = "");
Json to_json(const EquivalenceMap &e);
EquivalenceMap equivalence_from_json(const Json &j, const std::string &at = "");

Json to_json(const PolyFilippovAlgebroid &a);
PolyFilippovAlgebroid algebroid_from_json(const Json &j, const std::string &at = "");

Json to_json(const Witness &w);
Json to_json(const AlgebroidWitness &w);
Json to_json(const CohomologyReport &r);

} // namespace filippov::json_io

#endif
