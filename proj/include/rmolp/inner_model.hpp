#pragma once

// Sparse-row LP assembly and a polyhedral inner model of the robust feasible
// set. Linear rows and concave rows in the 1- or inf-norm are represented
// exactly; Euclidean concave rows use the gauge of an inscribed polytope, so
// every point of the model lies in X.

#include "rmolp/model.hpp"
#include "rmolp/numerics.hpp"

#include <utility>
#include <vector>

namespace rmolp {

class LpBuilder {
 public:
  using Terms = std::vector<std::pair<Index, double>>;

  /// Appends `count` variables with the given lower bound; returns the first index.
  Index add_variables(Index count, double lower);
  void add_row(Terms terms, double rhs, RowSense sense = RowSense::GreaterEqual);
  void set_cost(Index variable, double cost);
  Index size() const noexcept { return static_cast<Index>(lower_.size()); }

  LinearProgram build() const;

 private:
  struct Row {
    Terms terms;
    double rhs;
    RowSense sense;
  };
  std::vector<double> lower_;
  std::vector<double> cost_;
  std::vector<Row> rows_;
};

/// Unit directions spanning the inscribed polytope used for Euclidean rows in
/// dimension d: +-e_i followed by 32 deterministic quasi-uniform directions.
std::vector<Vector> inner_directions(Index d);

struct InnerModelOptions {
  /// Variable index of a margin t subtracted from every selected row's slack,
  /// or -1 for none.
  Index margin = -1;
  /// Apply the margin to rows with a nonzero norm term only.
  bool margin_on_concave_only = false;
};

/// Adds rows so that x (variables [0, n)) satisfies the inner model of X.
/// Returns true when the model equals X exactly (no Euclidean row with a
/// nontrivial norm term).
bool append_inner_model(LpBuilder& builder, const RobustFeasibleSet& set,
                        InnerModelOptions options = {});

/// True when the row's norm term vanishes identically (M = 0 and c = 0).
bool is_effectively_linear(const ConcaveRow& row);

}  // namespace rmolp
