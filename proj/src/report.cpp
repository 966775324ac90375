#include "rmolp/report.hpp"

#include "rmolp/error.hpp"
#include "rmolp/problem_io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rmolp {

using nlohmann::json;

namespace {

void write(const json& value, std::string& out) {
  switch (value.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {  // std::map order
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        write(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) out += ',';
        write(value[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double x = value.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        break;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      break;
    }
    default:
      out += value.dump();
  }
}

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorCode::ParseError, "certificate: " + message);
}

json endpoint_to_json(const EndpointCertificate& e) {
  json out;
  out["lambda"] = vector_to_json(e.lambda);
  out["residual"] = e.residual;
  out["method"] = e.exact ? "linear_program" : "projected_gradient";
  json rows = json::array();
  for (const RowMultiplier& r : e.multipliers) {
    json row;
    row["constraint"] = r.constraint;
    row["derivation"] = r.derivation;
    row["mu"] = r.mu;
    row["a"] = vector_to_json(r.scenario.a);
    row["b"] = r.scenario.b;
    row["complementarity"] = r.complementarity;
    if (r.witness) row["witness"] = vector_to_json(*r.witness);
    rows.push_back(std::move(row));
  }
  out["multipliers"] = std::move(rows);
  return out;
}

std::size_t index_field(const json& row, const char* key) {
  if (!row.contains(key) || !row[key].is_number_unsigned()) {
    fail(std::string(key) + " must be a nonnegative integer");
  }
  return row[key].get<std::size_t>();
}

EndpointCertificate endpoint_from_json(const json& value, const char* name) {
  if (!value.is_object()) fail(std::string(name) + " must be an object");
  EndpointCertificate e;
  if (!value.contains("lambda")) fail(std::string(name) + " lacks lambda");
  e.lambda = vector_from_json(value["lambda"], "lambda");
  if (value.contains("residual")) e.residual = number_from_json(value["residual"], "residual");
  if (value.contains("method")) e.exact = value["method"] == "linear_program";
  if (!value.contains("multipliers") || !value["multipliers"].is_array()) {
    fail(std::string(name) + " lacks a multipliers array");
  }
  for (const json& row : value["multipliers"]) {
    if (!row.is_object()) fail("multiplier records must be objects");
    RowMultiplier r;
    r.constraint = index_field(row, "constraint");
    r.derivation = row.contains("derivation") ? index_field(row, "derivation") : 0;
    for (const char* key : {"mu", "a", "b"}) {
      if (!row.contains(key)) fail(std::string("multiplier record lacks ") + key);
    }
    r.mu = number_from_json(row["mu"], "mu");
    r.scenario = {vector_from_json(row["a"], "a"), number_from_json(row["b"], "b")};
    if (row.contains("witness")) r.witness = vector_from_json(row["witness"], "witness");
    if (row.contains("complementarity")) {
      r.complementarity = number_from_json(row["complementarity"], "complementarity");
    }
    e.multipliers.push_back(std::move(r));
  }
  return e;
}

}  // namespace

std::string serialize_json(const json& value) {
  std::string out;
  write(value, out);
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

json certificate_to_json(const EfficiencyCertificate& certificate) {
  json out;
  out["nominal"] = endpoint_to_json(certificate.nominal);
  out["perturbed"] = endpoint_to_json(certificate.perturbed);
  return out;
}

EfficiencyCertificate certificate_from_json(const json& value) {
  if (!value.is_object() || !value.contains("nominal") || !value.contains("perturbed")) {
    fail("expected an object with nominal and perturbed endpoints");
  }
  return {endpoint_from_json(value["nominal"], "nominal"),
          endpoint_from_json(value["perturbed"], "perturbed")};
}

json witness_to_json(const DominanceWitness& witness) {
  json out;
  out["rho"] = witness.rho;
  out["x"] = vector_to_json(witness.x);
  out["gap"] = vector_to_json(witness.gap);
  return out;
}

json radius_to_json(const RadiusResult& radius) {
  json out;
  out["rho"] = radius.rho;
  out["minimizer"] = vector_to_json(radius.p_star);
  out["lambda"] = vector_to_json(radius.lambda);
  out["mu"] = radius.mu;
  out["certified"] = radius.certified;
  return out;
}

json verification_to_json(const VerificationReport& report) {
  json checks = json::object();
  for (const CertificateCheck& c : report.checks) {
    checks[c.name] = {{"passed", c.passed}, {"residual", c.residual}};
  }
  json out;
  out["valid"] = report.valid;
  out["checks"] = std::move(checks);
  if (!report.valid) out["first_failure"] = report.first_failure;
  return out;
}

std::string_view to_string(OracleOutcome outcome) {
  switch (outcome) {
    case OracleOutcome::Confirmed: return "Confirmed";
    case OracleOutcome::Refuted: return "Refuted";
    case OracleOutcome::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string_view to_string(BallVerdict verdict) {
  switch (verdict) {
    case BallVerdict::Feasible: return "Feasible";
    case BallVerdict::Infeasible: return "Infeasible";
    case BallVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

}  // namespace rmolp
