#include "rmolp/inner_model.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace rmolp {

Index LpBuilder::add_variables(Index count, double lower) {
  const Index first = size();
  for (Index i = 0; i < count; ++i) {
    lower_.push_back(lower);
    cost_.push_back(0.0);
  }
  return first;
}

void LpBuilder::add_row(Terms terms, double rhs, RowSense sense) {
  rows_.push_back({std::move(terms), rhs, sense});
}

void LpBuilder::set_cost(Index variable, double cost) {
  cost_[static_cast<std::size_t>(variable)] = cost;
}

LinearProgram LpBuilder::build() const {
  const Index d = size();
  LinearProgram lp;
  lp.objective = Eigen::Map<const Vector>(cost_.data(), d);
  lp.lower = Eigen::Map<const Vector>(lower_.data(), d);
  for (const Row& r : rows_) {
    LpRow row{Vector::Zero(d), r.rhs, r.sense};
    for (const auto& [index, value] : r.terms) row.coeffs(index) += value;
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

std::vector<Vector> inner_directions(Index d) {
  std::vector<Vector> out;
  for (Index i = 0; i < d; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector e = Vector::Zero(d);
      e(i) = sign;
      out.push_back(std::move(e));
    }
  }
  constexpr int kCount = 32;
  if (d == 2) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < kCount; ++k) {
      Vector v(2);
      v << std::cos(golden * k), std::sin(golden * k);
      out.push_back(std::move(v));
    }
  } else if (d == 3) {
    // Fibonacci lattice on the sphere.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < kCount; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / kCount;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vector v(3);
      v << r * std::cos(golden * k), r * std::sin(golden * k), z;
      out.push_back(std::move(v));
    }
  } else if (d > 3) {
    // Box-Muller on a fixed mt19937 stream; the raw 32-bit outputs are
    // specified by the standard, so the directions are portable.
    std::mt19937 gen(0x9e3779b9U);
    auto uniform = [&] { return (static_cast<double>(gen()) + 0.5) / 4294967296.0; };
    for (int k = 0; k < kCount; ++k) {
      Vector v(d);
      for (Index i = 0; i < d; i += 2) {
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        v(i) = radius * std::cos(angle);
        if (i + 1 < d) v(i + 1) = radius * std::sin(angle);
      }
      out.push_back(v / v.norm());
    }
  }
  return out;
}

bool is_effectively_linear(const ConcaveRow& row) {
  return row.m.isZero(0.0) && row.c.isZero(0.0);
}

bool append_inner_model(LpBuilder& builder, const RobustFeasibleSet& set,
                        InnerModelOptions options) {
  const Index n = set.n;
  bool exact = true;
  for (const ReducedRow& reduced : set.rows) {
    if (const auto* lr = std::get_if<LinearRow>(&reduced)) {
      LpBuilder::Terms terms;
      for (Index i = 0; i < n; ++i) {
        if (lr->a(i) != 0.0) terms.emplace_back(i, lr->a(i));
      }
      if (options.margin >= 0 && !options.margin_on_concave_only) {
        terms.emplace_back(options.margin, -1.0);
      }
      builder.add_row(std::move(terms), lr->b);
      continue;
    }
    const auto& row = std::get<ConcaveRow>(reduced);
    LpBuilder::Terms slack;
    for (Index i = 0; i < n; ++i) {
      if (row.a(i) != 0.0) slack.emplace_back(i, row.a(i));
    }
    if (options.margin >= 0 && !(options.margin_on_concave_only && is_effectively_linear(row))) {
      slack.emplace_back(options.margin, -1.0);
    }
    if (is_effectively_linear(row)) {
      builder.add_row(std::move(slack), row.b);
      continue;
    }

    const Index d = row.m.rows();
    // Terms of (M x + c)_k = inner_k, returned with c_k moved to the rhs.
    auto inner_terms = [&](Index k) {
      LpBuilder::Terms t;
      for (Index i = 0; i < n; ++i) {
        if (row.m(k, i) != 0.0) t.emplace_back(i, row.m(k, i));
      }
      return t;
    };

    NormIndex norm = row.norm;
    if (d == 1) norm = NormIndex::One;  // all norms agree on R^1
    switch (norm) {
      case NormIndex::One: {
        const Index e = builder.add_variables(d, 0.0);
        for (Index k = 0; k < d; ++k) {
          for (double sign : {1.0, -1.0}) {
            // e_k >= sign * (M x + c)_k
            LpBuilder::Terms t = inner_terms(k);
            for (auto& term : t) term.second *= -sign;
            t.emplace_back(e + k, 1.0);
            builder.add_row(std::move(t), sign * row.c(k));
          }
          slack.emplace_back(e + k, -1.0);
        }
        break;
      }
      case NormIndex::Inf: {
        const Index e = builder.add_variables(1, 0.0);
        for (Index k = 0; k < d; ++k) {
          for (double sign : {1.0, -1.0}) {
            LpBuilder::Terms t = inner_terms(k);
            for (auto& term : t) term.second *= -sign;
            t.emplace_back(e, 1.0);
            builder.add_row(std::move(t), sign * row.c(k));
          }
        }
        slack.emplace_back(e, -1.0);
        break;
      }
      case NormIndex::Two: {
        exact = false;
        const std::vector<Vector> dirs = inner_directions(d);
        const Index theta = builder.add_variables(static_cast<Index>(dirs.size()), 0.0);
        // M x + c = sum theta_l dir_l, and the gauge sum theta_l bounds the norm.
        for (Index k = 0; k < d; ++k) {
          LpBuilder::Terms t = inner_terms(k);
          for (std::size_t l = 0; l < dirs.size(); ++l) {
            if (dirs[l](k) != 0.0) t.emplace_back(theta + static_cast<Index>(l), -dirs[l](k));
          }
          builder.add_row(std::move(t), -row.c(k), RowSense::Equal);
        }
        for (std::size_t l = 0; l < dirs.size(); ++l) {
          slack.emplace_back(theta + static_cast<Index>(l), -1.0);
        }
        break;
      }
    }
    builder.add_row(std::move(slack), row.b);
  }
  return exact;
}

}  // namespace rmolp
