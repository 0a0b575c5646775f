#pragma once

#include <cstddef>

#include "iglab/forms.hpp"
#include "iglab/graph.hpp"

namespace iglab {

enum class LinearSolver { SparseLDLT, JacobiCG };

struct EquilibriumOptions {
  LinearSolver solver = LinearSolver::SparseLDLT;
  /// Relative residual target and iteration cap (0 means 50·n) for JacobiCG.
  double cg_tolerance = 1e-12;
  std::size_t cg_max_iterations = 0;
};

struct EquilibriumResult {
  VertexFunction potential;
  /// Cap(U) = ‖e‖_Q̃
  double capacity = 0.0;
  double capacity_sq = 0.0;
  /// max_x∉U μ(x)·|((Δ + 1)e)(x)|
  double residual = 0.0;
  VertexSet constraint;
  std::size_t iterations = 0;
};

/// Minimizes Q̃(u) + ‖u‖² subject to u = 1 on U with no condition at the
/// truncation frontier. Throws InputError for an empty or invalid U and
/// NumericalError when the linear solve fails.
EquilibriumResult equilibrium(const WeightedGraph& g, const VertexSet& u,
                              const EquilibriumOptions& options = {});

/// μ-weighted sup norm of (Δ + 1)e off U.
double first_order_residual(const VertexFunction& e, const VertexSet& u);

}  // namespace iglab
