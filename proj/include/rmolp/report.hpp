#pragma once

// Report payloads: deterministic JSON text, input digests, and the
// certificate schema shared by `certify` and `verify`.

#include "rmolp/efficiency.hpp"
#include "rmolp/feasibility.hpp"
#include "rmolp/oracle.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace rmolp {

/// Sorted keys, floats at 17 significant digits, non-finite floats as null.
std::string serialize_json(const nlohmann::json& value);

/// Lowercase hex SHA-256 of the raw bytes.
std::string sha256_hex(std::string_view bytes);

nlohmann::json certificate_to_json(const EfficiencyCertificate& certificate);
/// Throws Error(ParseError) on schema violations.
EfficiencyCertificate certificate_from_json(const nlohmann::json& value);

nlohmann::json witness_to_json(const DominanceWitness& witness);
nlohmann::json radius_to_json(const RadiusResult& radius);
nlohmann::json verification_to_json(const VerificationReport& report);

std::string_view to_string(OracleOutcome outcome);
std::string_view to_string(BallVerdict verdict);

}  // namespace rmolp
