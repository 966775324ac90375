#pragma once

// JSON problem files. Unknown keys are rejected; the norm index "s" is
// written as 1, 2 or the string "inf".

#include "rmolp/model.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace rmolp {

/// Throws Error(ParseError) on malformed JSON, missing or unknown keys, or
/// wrong value types. Dimension checks are left to validate_problem.
UncertainMOLP parse_problem(std::string_view text);
UncertainMOLP problem_from_json(const nlohmann::json& doc);

nlohmann::json problem_to_json(const UncertainMOLP& problem);

// Field helpers shared with certificate parsing.
Vector vector_from_json(const nlohmann::json& value, std::string_view field);
Matrix matrix_from_json(const nlohmann::json& value, std::string_view field);
double number_from_json(const nlohmann::json& value, std::string_view field);
nlohmann::json vector_to_json(const Vector& x);
nlohmann::json matrix_to_json(const Matrix& a);

NormIndex norm_from_json(const nlohmann::json& value);
nlohmann::json norm_to_json(NormIndex s);

}  // namespace rmolp
