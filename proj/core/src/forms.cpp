#include "iglab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iglab/error.hpp"
#include "iglab/series.hpp"
#include "iglab/tolerance.hpp"

namespace iglab {

VertexFunction::VertexFunction(const WeightedGraph& g, std::vector<double> values)
    : graph_(&g), values_(std::move(values)) {
  if (values_.size() != g.size()) {
    throw InputError("function has " + std::to_string(values_.size()) + " values for a graph on " +
                     std::to_string(g.size()) + " vertices");
  }
  std::vector<Vertex> supp;
  for (Vertex x = 0; x < values_.size(); ++x) {
    if (!std::isfinite(values_[x])) throw InputError("function value is not finite");
    if (values_[x] != 0.0) supp.push_back(x);
  }
  support_ = VertexSet(std::move(supp));
}

VertexFunction VertexFunction::constant(const WeightedGraph& g, double c) {
  return VertexFunction(g, std::vector<double>(g.size(), c));
}

VertexFunction VertexFunction::indicator(const WeightedGraph& g, const VertexSet& set) {
  std::vector<double> v(g.size(), 0.0);
  for (Vertex x : set) {
    g.check_vertex(x);
    v[x] = 1.0;
  }
  return VertexFunction(g, std::move(v));
}

bool VertexFunction::touches_frontier() const {
  return std::any_of(support_.begin(), support_.end(),
                     [&](Vertex x) { return graph_->is_frontier(x); });
}

double VertexFunction::sup_abs() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::fabs(v));
  return s;
}

double energy(const VertexFunction& f) {
  const WeightedGraph& g = f.graph();
  CompensatedSum acc;
  for (Vertex x = 0; x < g.size(); ++x) {
    for (const auto& nb : g.neighbors(x)) {
      if (nb.to < x) continue;
      const double d = f[x] - f[nb.to];
      acc.add(nb.weight * d * d);
    }
  }
  return acc.value();
}

double norm_sq(const VertexFunction& f) {
  const WeightedGraph& g = f.graph();
  CompensatedSum acc;
  for (Vertex x = 0; x < g.size(); ++x) acc.add(f[x] * f[x] * g.measure(x));
  return acc.value();
}

double qnorm(const VertexFunction& f) { return std::sqrt(energy(f) + norm_sq(f)); }

FormReport form_report(const VertexFunction& f) {
  FormReport r;
  r.energy = energy(f);
  r.norm_sq = norm_sq(f);
  r.qnorm = std::sqrt(r.energy + r.norm_sq);
  r.touches_frontier = f.touches_frontier();
  if (r.touches_frontier) {
    const double s = f.sup_abs();
    double leak = 0.0;
    for (Vertex x : f.support()) leak += f.graph().leak(x);
    r.leak_bound = 4.0 * s * s * leak;
  }
  return r;
}

double gradient_sq(const VertexFunction& f, Vertex x) {
  f.graph().check_vertex(x);
  double s = 0.0;
  for (const auto& nb : f.graph().neighbors(x)) {
    const double d = f[x] - f[nb.to];
    s += nb.weight * d * d;
  }
  return s;
}

double gradient_pairing(const VertexFunction& f, const VertexFunction& g, Vertex x) {
  f.graph().check_vertex(x);
  double s = 0.0;
  for (const auto& nb : f.graph().neighbors(x)) {
    s += nb.weight * (f[x] - f[nb.to]) * (g[x] - g[nb.to]);
  }
  return s;
}

double laplacian(const VertexFunction& f, Vertex x) {
  const WeightedGraph& g = f.graph();
  g.check_vertex(x);
  double s = 0.0;
  for (const auto& nb : g.neighbors(x)) s += nb.weight * (f[x] - f[nb.to]);
  return s / g.measure(x);
}

VertexFunction laplacian_all(const VertexFunction& f) {
  std::vector<double> out(f.size());
  for (Vertex x = 0; x < f.size(); ++x) out[x] = laplacian(f, x);
  return VertexFunction(f.graph(), std::move(out));
}

namespace {

void check_same_graph(const VertexFunction& a, const VertexFunction& b) {
  if (&a.graph() != &b.graph()) throw InputError("functions live on different graphs");
}

}  // namespace

GreenResiduals green_identity_check(const VertexFunction& u, const VertexFunction& v) {
  check_same_graph(u, v);
  const WeightedGraph& g = u.graph();
  CompensatedSum a, b, c;
  for (Vertex x = 0; x < g.size(); ++x) {
    a.add(laplacian(u, x) * v[x] * g.measure(x));
    b.add(u[x] * laplacian(v, x) * g.measure(x));
    c.add(0.5 * gradient_pairing(u, v, x));
  }
  GreenResiduals r;
  r.laplacian_u_v = a.value();
  r.u_laplacian_v = b.value();
  r.half_pairing = c.value();
  r.residual_symmetric = std::fabs(r.laplacian_u_v - r.u_laplacian_v);
  r.residual_pairing = std::fabs(r.laplacian_u_v - r.half_pairing);
  r.scale = residual_scale({r.laplacian_u_v, r.u_laplacian_v, r.half_pairing});
  r.v_touches_frontier = v.touches_frontier();
  return r;
}

LeibnizResidual leibniz_check(const VertexFunction& f, const VertexFunction& g,
                              const VertexFunction& h) {
  check_same_graph(f, g);
  check_same_graph(f, h);
  const WeightedGraph& gr = f.graph();
  CompensatedSum lhs, rhs;
  for (Vertex x = 0; x < gr.size(); ++x) {
    for (const auto& nb : gr.neighbors(x)) {
      const Vertex y = nb.to;
      const double dh = h[x] - h[y];
      lhs.add(nb.weight * (f[x] * g[x] - f[y] * g[y]) * dh);
      rhs.add(nb.weight * f[x] * (g[x] - g[y]) * dh);
      rhs.add(nb.weight * g[y] * (f[x] - f[y]) * dh);
    }
  }
  LeibnizResidual r;
  r.lhs = lhs.value();
  r.rhs = rhs.value();
  r.residual = std::fabs(r.lhs - r.rhs);
  r.scale = residual_scale({r.lhs, r.rhs});
  r.f_touches_frontier = f.touches_frontier();
  return r;
}

CaccioppoliResult caccioppoli_check(const VertexFunction& u, const VertexFunction& v) {
  check_same_graph(u, v);
  const WeightedGraph& g = u.graph();
  CompensatedSum lhs, rhs;
  for (Vertex x = 0; x < g.size(); ++x) {
    lhs.add(-laplacian(u, x) * u[x] * v[x] * v[x] * g.measure(x));
    rhs.add(0.5 * u[x] * u[x] * gradient_sq(v, x));
  }
  CaccioppoliResult r;
  r.lhs = lhs.value();
  r.rhs = rhs.value();
  r.slack = r.rhs - r.lhs;
  r.scale = residual_scale({r.lhs, r.rhs});
  r.v_touches_frontier = v.touches_frontier();
  return r;
}

VertexFunction cutoff_eta(const PathMetric& m, Vertex x0, double r, double R) {
  if (!(r >= 0.0) || !(r < R)) throw InputError("cut-off needs 0 <= r < R");
  std::vector<double> eta(m.graph().size(), 0.0);
  for (const auto& [x, d] : m.distances_within(x0, R)) {
    eta[x] = std::clamp((R - d) / (R - r), 0.0, 1.0);
  }
  return VertexFunction(m.graph(), std::move(eta));
}

double cutoff_gradient_excess(const VertexFunction& eta, double r, double R) {
  const double lip = 1.0 / ((R - r) * (R - r));
  double worst = -std::numeric_limits<double>::infinity();
  for (Vertex x = 0; x < eta.size(); ++x) {
    worst = std::max(worst, gradient_sq(eta, x) - eta.graph().measure(x) * lip);
  }
  return worst;
}

VertexFunction normal_contraction(const VertexFunction& f) {
  std::vector<double> out(f.values().begin(), f.values().end());
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return VertexFunction(f.graph(), std::move(out));
}

}  // namespace iglab
