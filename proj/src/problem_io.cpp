#include "rmolp/problem_io.hpp"

#include "rmolp/error.hpp"

#include <initializer_list>
#include <string>

namespace rmolp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorCode::ParseError, message);
}

void expect_keys(const json& obj, std::string_view where,
                 std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(std::string(where) + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (std::string_view key : allowed) known |= it.key() == key;
    if (!known) fail(std::string(where) + ": unknown key \"" + it.key() + "\"");
  }
  for (std::string_view key : allowed) {
    if (!obj.contains(std::string(key))) {
      fail(std::string(where) + ": missing key \"" + std::string(key) + "\"");
    }
  }
}

const json& at(const json& obj, std::string_view key) { return obj.at(std::string(key)); }

UncertaintySet constraint_from_json(const json& c, std::size_t j) {
  const std::string where = "constraints[" + std::to_string(j) + "]";
  if (!c.is_object() || !c.contains("kind") || !c["kind"].is_string()) {
    fail(where + " needs a string \"kind\"");
  }
  const std::string kind = c["kind"].get<std::string>();
  if (kind == "singleton") {
    expect_keys(c, where, {"kind", "a_bar", "b_bar"});
    return Singleton{vector_from_json(c["a_bar"], "a_bar"), number_from_json(c["b_bar"], "b_bar")};
  }
  if (kind == "polytope") {
    expect_keys(c, where, {"kind", "vertices"});
    const json& vs = c["vertices"];
    if (!vs.is_array()) fail(where + ": vertices must be an array");
    Polytope p;
    for (const json& v : vs) {
      const Vector full = vector_from_json(v, "vertex");
      if (full.size() < 1) fail(where + ": a vertex needs at least one entry");
      p.vertices.push_back({full.head(full.size() - 1), full(full.size() - 1)});
    }
    return p;
  }
  if (kind == "box") {
    expect_keys(c, where, {"kind", "a_lo", "a_hi", "b_lo", "b_hi"});
    return Box{vector_from_json(c["a_lo"], "a_lo"), vector_from_json(c["a_hi"], "a_hi"),
               number_from_json(c["b_lo"], "b_lo"), number_from_json(c["b_hi"], "b_hi")};
  }
  if (kind == "norm_ball") {
    expect_keys(c, where, {"kind", "a_bar", "Z", "delta", "s", "b_lo", "b_hi"});
    return NormBall{vector_from_json(c["a_bar"], "a_bar"), matrix_from_json(c["Z"], "Z"),
                    number_from_json(c["delta"], "delta"), norm_from_json(c["s"]),
                    number_from_json(c["b_lo"], "b_lo"), number_from_json(c["b_hi"], "b_hi")};
  }
  if (kind == "ellipsoid") {
    expect_keys(c, where, {"kind", "a0", "spans", "b_lo", "b_hi"});
    const json& spans = c["spans"];
    if (!spans.is_array()) fail(where + ": spans must be an array");
    Ellipsoid e{vector_from_json(c["a0"], "a0"), {}, number_from_json(c["b_lo"], "b_lo"),
                number_from_json(c["b_hi"], "b_hi")};
    for (const json& s : spans) e.spans.push_back(vector_from_json(s, "span"));
    return e;
  }
  if (kind == "ball") {
    expect_keys(c, where, {"kind", "a_bar", "b_bar", "alpha"});
    return Ball{vector_from_json(c["a_bar"], "a_bar"), number_from_json(c["b_bar"], "b_bar"),
                number_from_json(c["alpha"], "alpha")};
  }
  fail(where + ": unknown kind \"" + kind + "\"");
}

json constraint_to_json(const UncertaintySet& set) {
  json out;
  out["kind"] = std::string(kind_name(set));
  if (const auto* s = std::get_if<Singleton>(&set)) {
    out["a_bar"] = vector_to_json(s->a_bar);
    out["b_bar"] = s->b_bar;
  } else if (const auto* p = std::get_if<Polytope>(&set)) {
    json vs = json::array();
    for (const DataPoint& v : p->vertices) {
      json row = vector_to_json(v.a);
      row.push_back(v.b);
      vs.push_back(std::move(row));
    }
    out["vertices"] = std::move(vs);
  } else if (const auto* b = std::get_if<Box>(&set)) {
    out["a_lo"] = vector_to_json(b->a_lo);
    out["a_hi"] = vector_to_json(b->a_hi);
    out["b_lo"] = b->b_lo;
    out["b_hi"] = b->b_hi;
  } else if (const auto* nb = std::get_if<NormBall>(&set)) {
    out["a_bar"] = vector_to_json(nb->a_bar);
    out["Z"] = matrix_to_json(nb->z);
    out["delta"] = nb->delta;
    out["s"] = norm_to_json(nb->s);
    out["b_lo"] = nb->b_lo;
    out["b_hi"] = nb->b_hi;
  } else if (const auto* e = std::get_if<Ellipsoid>(&set)) {
    out["a0"] = vector_to_json(e->a0);
    json spans = json::array();
    for (const Vector& s : e->spans) spans.push_back(vector_to_json(s));
    out["spans"] = std::move(spans);
    out["b_lo"] = e->b_lo;
    out["b_hi"] = e->b_hi;
  } else if (const auto* ball = std::get_if<Ball>(&set)) {
    out["a_bar"] = vector_to_json(ball->a_bar);
    out["b_bar"] = ball->b_bar;
    out["alpha"] = ball->alpha;
  }
  return out;
}

}  // namespace

double number_from_json(const json& value, std::string_view field) {
  if (!value.is_number()) fail(std::string(field) + " must be a number");
  return value.get<double>();
}

Vector vector_from_json(const json& value, std::string_view field) {
  if (!value.is_array()) fail(std::string(field) + " must be an array of numbers");
  Vector out(static_cast<Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    out(static_cast<Index>(i)) = number_from_json(value[i], field);
  }
  return out;
}

Matrix matrix_from_json(const json& value, std::string_view field) {
  if (!value.is_array()) fail(std::string(field) + " must be an array of rows");
  const Index rows = static_cast<Index>(value.size());
  const Index cols = rows == 0 ? 0 : static_cast<Index>(value[0].is_array() ? value[0].size() : 0);
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Vector row = vector_from_json(value[static_cast<std::size_t>(i)], field);
    if (row.size() != cols) fail(std::string(field) + " rows have unequal lengths");
    out.row(i) = row.transpose();
  }
  return out;
}

json vector_to_json(const Vector& x) {
  json out = json::array();
  for (Index i = 0; i < x.size(); ++i) out.push_back(x(i));
  return out;
}

json matrix_to_json(const Matrix& a) {
  json out = json::array();
  for (Index i = 0; i < a.rows(); ++i) out.push_back(vector_to_json(a.row(i).transpose()));
  return out;
}

NormIndex norm_from_json(const json& value) {
  if (value.is_string() && value.get<std::string>() == "inf") return NormIndex::Inf;
  if (value.is_number()) {
    const double s = value.get<double>();
    if (s == 1.0) return NormIndex::One;
    if (s == 2.0) return NormIndex::Two;
  }
  fail("s must be 1, 2 or \"inf\"");
}

json norm_to_json(NormIndex s) {
  switch (s) {
    case NormIndex::One: return 1;
    case NormIndex::Two: return 2;
    case NormIndex::Inf: return "inf";
  }
  return "inf";
}

UncertainMOLP problem_from_json(const json& doc) {
  expect_keys(doc, "problem", {"m", "n", "C_bar", "u", "v", "constraints"});
  UncertainMOLP p;
  for (const char* key : {"m", "n"}) {
    if (!doc[key].is_number_integer()) fail(std::string(key) + " must be an integer");
  }
  p.m = doc["m"].get<Index>();
  p.n = doc["n"].get<Index>();
  p.c_bar = matrix_from_json(at(doc, "C_bar"), "C_bar");
  if (p.c_bar.rows() == 0) p.c_bar.resize(0, p.n);
  p.u = vector_from_json(at(doc, "u"), "u");
  p.v = vector_from_json(at(doc, "v"), "v");
  const json& cs = at(doc, "constraints");
  if (!cs.is_array()) fail("constraints must be an array");
  for (std::size_t j = 0; j < cs.size(); ++j) p.constraints.push_back(constraint_from_json(cs[j], j));
  return p;
}

UncertainMOLP parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(doc);
}

json problem_to_json(const UncertainMOLP& problem) {
  json out;
  out["m"] = problem.m;
  out["n"] = problem.n;
  out["C_bar"] = matrix_to_json(problem.c_bar);
  out["u"] = vector_to_json(problem.u);
  out["v"] = vector_to_json(problem.v);
  json cs = json::array();
  for (const UncertaintySet& c : problem.constraints) cs.push_back(constraint_to_json(c));
  out["constraints"] = std::move(cs);
  return out;
}

}  // namespace rmolp
