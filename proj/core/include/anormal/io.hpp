#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "anormal/lab.hpp"
#include "anormal/shift.hpp"

namespace anormal::io {

using Json = nlohmann::ordered_json;

/// Reads a whole file; throws Error(file_not_found).
std::string read_file(const std::filesystem::path& path);

/// Parses JSON text; throws Error(parse_error) with the parser's position.
Json parse_json(std::string_view text, std::string_view what);

/// Serializes with every floating-point number printed to 17 significant
/// digits (non-finite values become null), so equal inputs give equal bytes.
std::string dump(const Json& j, int indent = 2);

/// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

// Matrix files: {"rows": r, "cols": c, "data": [[re, im], ...]} row-major.
ComplexMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const ComplexMatrix& m);

// Shift files: {"weights": seq, "metric": seq}; seq = {"preperiod": [...],
// "period": [...]} with rationals as [num, den] and complex rationals as
// {"re": [num, den], "im": [num, den]}.
shift::WeightedShiftInstance shift_from_json(const Json& j);
Json shift_to_json(const shift::WeightedShiftInstance& s);
Json rational_to_json(const shift::Rational& q);
Json gaussian_to_json(const shift::GaussianRational& z);

Json tolerance_to_json(const Tolerance& tol);
/// Missing fields keep their defaults; unknown fields are rejected.
Tolerance tolerance_from_json(const Json& j, Tolerance base = {});

Json spec_to_json(const lab::GeneratorSpec& spec);
lab::GeneratorSpec spec_from_json(const Json& j);

/// {"dims": [lo, hi], "index_max": k, "trials": t, "seed": s,
///  "checks": [...], "families": [...], "tolerances": {...}}
lab::SuiteConfig suite_config_from_json(const Json& j);
Json suite_config_to_json(const lab::SuiteConfig& cfg);

Json verdict_to_json(const ClassVerdict& v);
Json check_report_to_json(const lab::CheckReport& r);
Json suite_summary_to_json(const lab::SuiteSummary& s);
Json search_result_to_json(const lab::SearchResult& r);
Json shift_verdict_to_json(const shift::ShiftVerdict& v);

}  // namespace anormal::io
