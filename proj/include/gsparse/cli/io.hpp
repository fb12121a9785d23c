#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsparse/certify.hpp"
#include "gsparse/core.hpp"
#include "gsparse/decode.hpp"
#include "gsparse/decomposition.hpp"
#include "gsparse/sensing.hpp"

namespace gsparse::cli {

using Json = nlohmann::json;

// File formats. Indices are 1-based on disk.
//   groups:  {"n": int, "groups": [[int, ...], ...]}
//   vector:  {"data": [real, ...]}
//   matrix:  {"rows": int, "cols": int, "data": [row-major reals], "provenance": {...}}
//   problem: {"matrix": <matrix>, "y": [real, ...], "eps": real}
Json to_json(const GroupStructure& groups);
GroupStructure groups_from_json(const Json& j);

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json to_json(const SensingMatrix& a);
SensingMatrix matrix_from_json(const Json& j);

Json to_json(const RecoveryProblem& problem);
RecoveryProblem problem_from_json(const Json& j);

Json to_json(const DecodeResult& result);
DecodeResult decode_result_from_json(const Json& j);

Json to_json(const IsometryReport& report);
IsometryReport isometry_from_json(const Json& j);

// Undefined constants are written as null.
Json to_json(const GrnspCertificate& cert);
GrnspCertificate certificate_from_json(const Json& j);

Json to_json(const ConvexDecomposition& dec);
ConvexDecomposition decomposition_from_json(const Json& j);

Json to_json(const DecompositionCheck& check);

Json to_json(const GrnspSampleReport& report);

Json index_set_to_json(const IndexSet& indices);  // written 1-based
IndexSet index_set_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Two-space indent with a trailing newline.
std::string dump(const Json& j);

// 17 significant digits via std::to_chars: '.' decimal point, no locale.
std::string format_real(double x);

}  // namespace gsparse::cli
