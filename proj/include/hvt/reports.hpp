#pragma once

// Structured (JSON) and plain-text renderings of results and reports.
// Matrices use the shared matrix format from matrix_io.

#include <string>

#include <json.hpp>

#include "hvt/axioms.hpp"
#include "hvt/blocks.hpp"
#include "hvt/sampling.hpp"
#include "hvt/theories.hpp"

namespace hvt {

nlohmann::json to_json(const TheoryResult& r);
nlohmann::json to_json(const BlockPartition& p);
nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const AxiomReport& r);
nlohmann::json to_json(const AxiomTable& t);
nlohmann::json to_json(const NogoReport& r);
nlohmann::json to_json(const DecompReport& r);
nlohmann::json to_json(const StrongContinuityReport& r);
nlohmann::json to_json(const SampleReport& r);

Witness witness_from_json(const nlohmann::json& doc);

/// Fixed-point rendering with `digits` decimals, one row per line.
std::string format_matrix(const RealMatrix& m, int digits = 4, const std::string& indent = "  ");

std::string to_text(const TheoryResult& r);
std::string to_text(const BlockPartition& p);
std::string to_text(const AxiomReport& r);
std::string to_text(const AxiomTable& t);
std::string to_text(const NogoReport& r);
std::string to_text(const DecompReport& r);
std::string to_text(const StrongContinuityReport& r);
std::string to_text(const SampleReport& r);

}  // namespace hvt
