#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "iglab/graph.hpp"
#include "iglab/metric.hpp"

namespace iglab::testing {

// Random finite graph: n in [1, max_n], each pair an edge with probability
// p, w in (0, 4], mu in (0, 2].
inline WeightedGraph random_graph(std::mt19937_64& rng, std::size_t max_n, double p = 0.4) {
  std::uniform_int_distribution<std::size_t> size(1, max_n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = size(rng);
  GraphBuilder b(n);
  for (Vertex x = 0; x < n; ++x) b.set_measure(x, 2.0 * (1.0 - unit(rng)));
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y = x + 1; y < n; ++y) {
      if (unit(rng) < p) b.add_edge(x, y, 4.0 * (1.0 - unit(rng)));
    }
  }
  return b.build();
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline WeightedGraph path_graph(std::size_t n, double w = 1.0, double mu = 1.0) {
  GraphBuilder b(n);
  for (Vertex x = 0; x < n; ++x) b.set_measure(x, mu);
  for (Vertex x = 0; x + 1 < n; ++x) b.add_edge(x, x + 1, w);
  return b.build();
}

// Minimum of σ over all simple paths from x to y, by exhaustive search.
inline double brute_force_distance(const EdgeLengths& sigma, Vertex x, Vertex y) {
  const WeightedGraph& g = sigma.graph();
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> on_path(g.size(), 0);
  auto dfs = [&](auto& self, Vertex v, double len) -> void {
    if (v == y) {
      best = std::min(best, len);
      return;
    }
    on_path[v] = 1;
    const auto nb = g.neighbors(v);
    const auto lens = sigma.from(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (!on_path[nb[i].to]) self(self, nb[i].to, len + lens[i]);
    }
    on_path[v] = 0;
  };
  dfs(dfs, x, 0.0);
  return best;
}

// Solves A x = b by Gaussian elimination with partial pivoting (dense).
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

// Dense oracle for min Q̃(u) + ‖u‖² with u = 1 on `fixed`: stationarity on the
// free vertices, then the objective evaluated directly. Returns Cap².
inline double dense_capacity_sq(const WeightedGraph& g, const std::vector<char>& fixed) {
  const std::size_t n = g.size();
  std::vector<std::size_t> idx(n, n);
  std::vector<Vertex> free;
  for (Vertex x = 0; x < n; ++x) {
    if (!fixed[x]) {
      idx[x] = free.size();
      free.push_back(x);
    }
  }
  std::vector<double> u(n, 1.0);
  if (!free.empty()) {
    std::vector<std::vector<double>> a(free.size(), std::vector<double>(free.size(), 0.0));
    std::vector<double> b(free.size(), 0.0);
    for (std::size_t i = 0; i < free.size(); ++i) {
      const Vertex x = free[i];
      a[i][i] += g.measure(x);
      for (Vertex y = 0; y < n; ++y) {
        const double w = y == x ? 0.0 : g.weight(x, y);
        if (w == 0.0) continue;
        a[i][i] += w;
        if (fixed[y]) {
          b[i] += w;
        } else {
          a[i][idx[y]] -= w;
        }
      }
    }
    const auto sol = gauss_solve(std::move(a), std::move(b));
    for (std::size_t i = 0; i < free.size(); ++i) u[free[i]] = sol[i];
  }
  double value = 0.0;
  for (Vertex x = 0; x < n; ++x) {
    value += u[x] * u[x] * g.measure(x);
    for (Vertex y = x + 1; y < n; ++y) {
      const double w = g.weight(x, y);
      value += w * (u[x] - u[y]) * (u[x] - u[y]);
    }
  }
  return value;
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

}  // namespace iglab::testing
