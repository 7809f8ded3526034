#pragma once

// Shared matrix document format:
//
//   { "dim": N, "entries": [[re, im], [re, im], ...] }
//
// `entries` holds N*N pairs in row-major order (row 0 first). Real-valued
// matrices (joint, stochastic and flow matrices) are written with zero
// imaginary parts.

#include <string>

#include <json.hpp>

#include "hvt/qcore.hpp"

namespace hvt {

nlohmann::json matrix_to_json(const ComplexMatrix& m);
nlohmann::json matrix_to_json(const RealMatrix& m);

/// Throws ValidationError when fields are missing, mistyped or the entry
/// count does not equal dim^2.
ComplexMatrix matrix_from_json(const nlohmann::json& doc);

/// Parse errors carry the line and column reported by the JSON parser.
ComplexMatrix load_matrix(const std::string& path);
Unitary load_unitary(const std::string& path, double tol = kUnitaryTol);
DensityMatrix load_density(const std::string& path, double tol = kDensityTol);

void save_json(const std::string& path, const nlohmann::json& doc);
nlohmann::json load_json(const std::string& path);

}  // namespace hvt
