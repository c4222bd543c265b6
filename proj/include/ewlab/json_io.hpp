#ifndef EWLAB_JSON_IO_HPP
#define EWLAB_JSON_IO_HPP

#include "ewlab/decomp.hpp"
#include "ewlab/linalg.hpp"
#include "ewlab/optimality.hpp"
#include "ewlab/posmaps.hpp"
#include "ewlab/witness.hpp"

#include <json.hpp>

#include <string>

namespace ewlab {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent serialized input.
struct ParseError : Error {
    using Error::Error;
};

// Matrices: {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);
Json to_json(const ComplexVector& v);  // [[re, im], ...]
ComplexVector vector_from_json(const Json& j);
Json bipartite_to_json(const ComplexMatrix& m, const BipartiteDims& dims);

Json to_json(const Witness& w);
Witness witness_from_json(const Json& j);

Json to_json(const ElementaryMap& phi);
ElementaryMap map_from_json(const Json& j);

Json to_json(const Tolerances& tol);
Json to_json(const BlockPositivityReport& r);
Json to_json(const PositivityReport& r);
Json to_json(const ValidationReport& r);
Json to_json(const SpaResult& r, bool include_state = true);
Json to_json(const SeparabilityCertificate& c);
Json to_json(const DecompositionCertificate& c);
Json to_json(const PptDetection& d);
Json to_json(const PptSearchResult& r);
Json to_json(const NonOptimalityCertificate& c);
Json to_json(const SpanReport& r);
Json to_json(const RankOneSearchResult& r);
Json to_json(const FMatrixEvidence& e);
Json to_json(const OptimalityVerdict& v, const OptimalityConfig& config);

Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ewlab

#endif  // EWLAB_JSON_IO_HPP
