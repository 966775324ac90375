#include "rmolp/cli.hpp"

#include "rmolp/efficiency.hpp"
#include "rmolp/error.hpp"
#include "rmolp/feasibility.hpp"
#include "rmolp/oracle.hpp"
#include "rmolp/problem_io.hpp"
#include "rmolp/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rmolp {

using nlohmann::json;

namespace {

struct Options {
  std::string problem_file;
  bool json_mode = false;
  bool text_mode = false;
  bool timing = false;
  double alpha = 0.0;
  std::string point;
  std::size_t oracle_k = 0;
  std::string cert_file;
  double tol = kCertificateTolerance;
};

// Terminates a command with a documented exit code.
struct Failure {
  int code;
  std::string message;
  std::string error_name;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeU:
    case ErrorCode::SlaterViolated:
      return kExitPrecondition;
    case ErrorCode::NominalInfeasible:
    case ErrorCode::NotFeasiblePoint:
      return kExitInfeasible;
    case ErrorCode::NumericalBreakdown:
    case ErrorCode::NonCertified:
      return kExitUndecided;
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::SingularZ:
    case ErrorCode::EmptyVertexList:
    case ErrorCode::BadInterval:
    case ErrorCode::BoxTooLarge:
      return kExitInput;
  }
  return kExitInput;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitInput, "cannot read " + path, "ParseError"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct LoadedProblem {
  std::string digest;
  ValidatedProblem problem;
};

LoadedProblem load(const std::string& path) {
  const std::string text = read_file(path);
  return {sha256_hex(text), validate_problem(parse_problem(text))};
}

Vector parse_point(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size()) {
      throw Error(ErrorCode::ParseError, "point entries must be numbers: \"" + item + "\"");
    }
    values.push_back(v);
  }
  if (values.empty()) throw Error(ErrorCode::ParseError, "point is empty");
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

std::vector<DataPoint> nominal_rows(const ValidatedProblem& p) {
  std::vector<DataPoint> rows;
  for (std::size_t j = 0; j < p->constraints.size(); ++j) {
    const auto* s = std::get_if<Singleton>(&p->constraints[j]);
    if (s == nullptr) {
      throw Failure{kExitPrecondition,
                    "constraint " + std::to_string(j) + " is a " +
                        std::string(kind_name(p->constraints[j])) +
                        "; radius analysis needs singleton constraints",
                    "WrongConstraintClass"};
    }
    rows.push_back({s->a_bar, s->b_bar});
  }
  return rows;
}

struct Outcome {
  json report;
  int code = kExitOk;
};

Outcome cmd_radius(const Options& opt) {
  const LoadedProblem lp = load(opt.problem_file);
  const RadiusResult r = radius_of_robust_feasibility(nominal_rows(lp.problem));
  Outcome o;
  o.report["input_digest"] = lp.digest;
  o.report["verdict"] = "Computed";
  o.report["radius"] = radius_to_json(r);
  return o;
}

Outcome cmd_feasible(const Options& opt) {
  const LoadedProblem lp = load(opt.problem_file);
  const BallFeasibility f = ball_robust_feasible(nominal_rows(lp.problem), opt.alpha);
  Outcome o;
  o.report["input_digest"] = lp.digest;
  o.report["verdict"] = std::string(to_string(f.verdict));
  o.report["alpha"] = opt.alpha;
  o.report["rho"] = f.radius.rho;
  if (f.x) {
    o.report["witness"] = {{"x", vector_to_json(*f.x)}, {"min_slack", f.min_slack}};
  }
  o.code = f.verdict == BallVerdict::Feasible     ? kExitOk
           : f.verdict == BallVerdict::Infeasible ? kExitNegative
                                                  : kExitUndecided;
  return o;
}

Vector checked_point(const Options& opt, const ValidatedProblem& p) {
  const Vector x = parse_point(opt.point);
  if (x.size() != p->n) {
    throw Error(ErrorCode::DimensionMismatch,
                "point has " + std::to_string(x.size()) + " entries, expected " +
                    std::to_string(p->n));
  }
  return x;
}

Outcome cmd_certify(const Options& opt) {
  const LoadedProblem lp = load(opt.problem_file);
  const Vector x_bar = checked_point(opt, lp.problem);
  if (opt.oracle_k == 1) throw Failure{kExitInput, "--oracle needs k >= 2", "ParseError"};

  Outcome o;
  o.report["input_digest"] = lp.digest;
  o.report["point"] = vector_to_json(x_bar);
  const EfficiencyVerdict verdict = certify_weak_efficiency(lp.problem, x_bar);

  std::string name;
  if (const auto* c = std::get_if<Certified>(&verdict)) {
    name = "Certified";
    o.report["certificate"] = certificate_to_json(c->certificate);
    o.report["residuals"] = {{"nominal", c->certificate.nominal.residual},
                             {"perturbed", c->certificate.perturbed.residual}};
  } else if (const auto* r = std::get_if<Refuted>(&verdict)) {
    name = "Refuted";
    json ref = {{"endpoint", r->endpoint}, {"reason", r->reason}};
    if (r->witness) ref["witness"] = witness_to_json(*r->witness);
    o.report["refutation"] = std::move(ref);
  } else {
    const auto& u = std::get<Unknown>(verdict);
    name = "Unknown";
    o.report["residuals"] = {{"nominal", u.nominal_residual}, {"perturbed", u.perturbed_residual}};
  }

  if (opt.oracle_k >= 2) {
    const OracleVerdict ov = refute_robust_weak_efficiency(lp.problem, x_bar, opt.oracle_k);
    json oj = {{"k", opt.oracle_k},
               {"outcome", std::string(to_string(ov.outcome))},
               {"scenarios", ov.checks.scenarios}};
    if (ov.witness) oj["witness"] = witness_to_json(*ov.witness);
    o.report["oracle"] = std::move(oj);
    const bool oracle_refutes = ov.outcome == OracleOutcome::Refuted;
    if ((name == "Certified" && oracle_refutes) ||
        (name == "Refuted" && ov.outcome == OracleOutcome::Confirmed)) {
      name = "Disagreement";
    } else if (name == "Unknown" && oracle_refutes) {
      name = "Refuted";
      o.report["refutation"] = {{"endpoint", "scenario"},
                                {"reason", "the scenario oracle found a dominating point"},
                                {"witness", witness_to_json(*ov.witness)}};
    }
  }
  o.report["verdict"] = name;
  o.code = name == "Certified"      ? kExitOk
           : name == "Refuted"      ? kExitNegative
           : name == "Unknown"      ? kExitUndecided
                                    : kExitDisagreement;
  return o;
}

Outcome cmd_verify(const Options& opt) {
  const LoadedProblem lp = load(opt.problem_file);
  json doc;
  try {
    doc = json::parse(read_file(opt.cert_file));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("certificate file: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "certificate file must hold an object");

  Outcome o;
  o.report["input_digest"] = lp.digest;
  o.report["tol"] = opt.tol;

  const bool full_report = doc.contains("certificate");
  if (full_report && doc.contains("input_digest") && doc["input_digest"] != lp.digest) {
    o.report["verdict"] = "Invalid";
    o.report["verification"] = {{"valid", false}, {"first_failure", "input_digest"}};
    o.code = kExitNegative;
    return o;
  }
  if (!full_report && doc.contains("verdict")) {
    throw Error(ErrorCode::ParseError, "report carries no certificate (verdict " +
                                           doc["verdict"].dump() + ")");
  }
  const EfficiencyCertificate cert = certificate_from_json(full_report ? doc["certificate"] : doc);

  Vector x_bar;
  if (!opt.point.empty()) {
    x_bar = checked_point(opt, lp.problem);
  } else if (full_report && doc.contains("point")) {
    x_bar = vector_from_json(doc["point"], "point");
  } else {
    throw Failure{kExitInput, "--point is required for a bare certificate", "ParseError"};
  }

  const VerificationReport rep = verify_certificate(lp.problem, x_bar, cert, opt.tol);
  o.report["point"] = vector_to_json(x_bar);
  o.report["verdict"] = rep.valid ? "Valid" : "Invalid";
  o.report["verification"] = verification_to_json(rep);
  o.code = rep.valid ? kExitOk : kExitNegative;
  return o;
}

void print_text(const json& report, std::ostream& out) {
  for (auto it = report.begin(); it != report.end(); ++it) {
    out << it.key() << ": ";
    if (it.value().is_string()) {
      out << it.value().get<std::string>();
    } else {
      out << serialize_json(it.value());
    }
    out << '\n';
  }
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("problem", opt.problem_file, "problem file (JSON)")->required();
  auto* j = cmd->add_flag("--json", opt.json_mode, "machine-readable report");
  auto* t = cmd->add_flag("--text", opt.text_mode, "human-readable report (default)");
  j->excludes(t);
  cmd->add_flag("--timing", opt.timing, "include wall_time_ms in the report");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Robust feasibility radius and robust weak-efficiency certificates", "rmolp"};
  app.require_subcommand(1, 1);

  auto* radius = app.add_subcommand("radius", "radius of robust feasibility of the nominal system");
  add_common(radius, opt);

  auto* feasible = app.add_subcommand("feasible", "feasibility under ball perturbations of size alpha");
  add_common(feasible, opt);
  feasible->add_option("--alpha", opt.alpha, "perturbation radius")->required();

  auto* certify = app.add_subcommand("certify", "certify or refute robust weak efficiency of a point");
  add_common(certify, opt);
  certify->add_option("--point", opt.point, "comma-separated coordinates")->required();
  certify->add_option("--oracle", opt.oracle_k, "cross-check on a k-point scenario grid");

  auto* verify = app.add_subcommand("verify", "replay a certificate");
  add_common(verify, opt);
  verify->add_option("--point", opt.point, "comma-separated coordinates");
  verify->add_option("--cert", opt.cert_file, "certificate or certify report (JSON)")->required();
  verify->add_option("--tol", opt.tol, "residual tolerance");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "rmolp: " << e.what() << '\n';
    return kExitInput;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const std::string command = cmd->get_name();
  const auto start = std::chrono::steady_clock::now();

  Outcome o;
  std::string message;
  try {
    if (cmd == radius) o = cmd_radius(opt);
    else if (cmd == feasible) o = cmd_feasible(opt);
    else if (cmd == certify) o = cmd_certify(opt);
    else o = cmd_verify(opt);
  } catch (const Failure& f) {
    o.code = f.code;
    o.report["verdict"] = "Error";
    o.report["error"] = {{"code", f.error_name}, {"message", f.message}};
    message = f.message;
  } catch (const Error& e) {
    o.code = exit_code_for(e.code());
    o.report["verdict"] = "Error";
    o.report["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (e.constraint()) o.report["error"]["constraint"] = *e.constraint();
    message = std::string(to_string(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    o.code = kExitUndecided;
    o.report["verdict"] = "Error";
    o.report["error"] = {{"code", "NumericalBreakdown"}, {"message", e.what()}};
    message = std::string("NumericalBreakdown: ") + e.what();
  }
  o.report["command"] = command;
  if (opt.timing) {
    o.report["wall_time_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }

  if (!message.empty()) err << "rmolp " << command << ": " << message << '\n';
  if (opt.json_mode) {
    out << serialize_json(o.report) << '\n';
  } else if (message.empty()) {
    print_text(o.report, out);
  }
  return o.code;
}

}  // namespace rmolp
