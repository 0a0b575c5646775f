#pragma once

#include <span>
#include <vector>

#include "iglab/graph.hpp"
#include "iglab/metric.hpp"

namespace iglab {

/// Real function on the vertices of a graph (which must outlive it).
class VertexFunction {
 public:
  VertexFunction(const WeightedGraph& g, std::vector<double> values);

  static VertexFunction constant(const WeightedGraph& g, double c);
  static VertexFunction indicator(const WeightedGraph& g, const VertexSet& set);

  const WeightedGraph& graph() const { return *graph_; }
  std::size_t size() const { return values_.size(); }
  double operator[](Vertex x) const { return values_[x]; }
  std::span<const double> values() const { return values_; }

  /// {x : f(x) ≠ 0}
  const VertexSet& support() const { return support_; }
  bool touches_frontier() const;
  double sup_abs() const;

 private:
  const WeightedGraph* graph_;
  std::vector<double> values_;
  VertexSet support_;
};

struct FormReport {
  double energy = 0.0;
  double norm_sq = 0.0;
  double qnorm = 0.0;
  /// Upper bound on the energy carried by truncated edges, 4·s²·Σ leak over
  /// the frontier part of the support with s = sup|f|; 0 when the support
  /// avoids the frontier.
  double leak_bound = 0.0;
  bool touches_frontier = false;
};

/// Q̃(f) = ½ Σ_{x,y} w(x,y) (f(x) - f(y))²
double energy(const VertexFunction& f);
/// ‖f‖² = Σ_x f(x)² μ(x)
double norm_sq(const VertexFunction& f);
/// ‖f‖_Q̃ = (Q̃(f) + ‖f‖²)^½
double qnorm(const VertexFunction& f);
FormReport form_report(const VertexFunction& f);

/// |∇f|²(x) = Σ_y w(x,y) (f(x) - f(y))²
double gradient_sq(const VertexFunction& f, Vertex x);
/// (∇f·∇g)(x) = Σ_y w(x,y) (f(x) - f(y)) (g(x) - g(y))
double gradient_pairing(const VertexFunction& f, const VertexFunction& g, Vertex x);

/// (Δf)(x) = (1/μ(x)) Σ_y w(x,y) (f(x) - f(y)). On a truncation the value at
/// frontier vertices depends on the window.
double laplacian(const VertexFunction& f, Vertex x);
VertexFunction laplacian_all(const VertexFunction& f);

struct GreenResiduals {
  double laplacian_u_v = 0.0;   // Σ (Δu) v μ
  double u_laplacian_v = 0.0;   // Σ u (Δv) μ
  double half_pairing = 0.0;    // ½ Σ ∇u·∇v
  double residual_symmetric = 0.0;
  double residual_pairing = 0.0;
  double scale = 1.0;
  bool v_touches_frontier = false;

  bool pass(double rel_tol = 1e-9) const {
    return residual_symmetric <= rel_tol * scale && residual_pairing <= rel_tol * scale;
  }
};

GreenResiduals green_identity_check(const VertexFunction& u, const VertexFunction& v);

struct LeibnizResidual {
  double lhs = 0.0;  // Σ ∇(fg)·∇h
  double rhs = 0.0;  // Σ_x Σ_y w (f(x)(g(x)-g(y)) + g(y)(f(x)-f(y))) (h(x)-h(y))
  double residual = 0.0;
  double scale = 1.0;
  bool f_touches_frontier = false;

  bool pass(double rel_tol = 1e-9) const { return residual <= rel_tol * scale; }
};

/// Product rule fg(x) - fg(y) = f(x)(g(x) - g(y)) + g(y)(f(x) - f(y)),
/// summed against ∇h.
LeibnizResidual leibniz_check(const VertexFunction& f, const VertexFunction& g,
                              const VertexFunction& h);

struct CaccioppoliResult {
  double lhs = 0.0;  // -Σ (Δu) u v² μ
  double rhs = 0.0;  // ½ Σ u² |∇v|²
  double slack = 0.0;
  double scale = 1.0;
  bool v_touches_frontier = false;

  bool pass(double rel_tol = 1e-9) const { return slack >= -rel_tol * scale; }
};

CaccioppoliResult caccioppoli_check(const VertexFunction& u, const VertexFunction& v);

/// η(x) = ((R - d(x, x₀)) / (R - r))₊ ∧ 1. Throws InputError unless
/// 0 ≤ r < R.
VertexFunction cutoff_eta(const PathMetric& m, Vertex x0, double r, double R);

/// max_x (|∇η|²(x) - μ(x)/(R - r)²); non-positive when the cut-off gradient
/// estimate holds.
double cutoff_gradient_excess(const VertexFunction& eta, double r, double R);

/// (f ∨ 0) ∧ 1
VertexFunction normal_contraction(const VertexFunction& f);

}  // namespace iglab
