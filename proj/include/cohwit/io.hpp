#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "cohwit/linalg.hpp"
#include "cohwit/measurements.hpp"

namespace cohwit::io {

using json = nlohmann::json;

// Matrix document: {"dim": d, "data": [[re, im], ...]} with d*d row-major pairs.
// Vector document: same fields with d pairs. Extra fields are ignored on read.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& doc);

json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const json& doc);

// Measurement document: {"dim": d, "kind": "projectors"|"povm", "operators": [matrix, ...]}.
// Structural problems throw FormatError; invariant violations throw
// InvalidMeasurement with the offending operator index.
json measurement_to_json(const Reference& ref);
json measurement_to_json(const ProjectorSet& p);
Reference measurement_from_json(const json& doc, double tol = tol::kStructure);

json read_json_file(const std::filesystem::path& path);

/// Canonical single-line dump plus trailing newline; doubles use the shortest
/// round-trip representation, so write -> read -> write is byte-identical.
std::string canonical(const json& doc);
void write_json_file(const std::filesystem::path& path, const json& doc);

}  // namespace cohwit::io
