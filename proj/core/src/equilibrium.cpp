#include "iglab/equilibrium.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <vector>

#include "iglab/error.hpp"

namespace iglab {

namespace {

// Free-block system A·e_F = b with A = diag(Σw + μ) - W_FF and b(x) = Σ_{y∈U} w(x, y).
struct FreeSystem {
  std::vector<Vertex> free;
  std::vector<std::ptrdiff_t> slot;  // vertex → index in `free`, or -1
  Eigen::SparseMatrix<double> a;
  Eigen::VectorXd b;
};

FreeSystem assemble(const WeightedGraph& g, const VertexSet& u) {
  FreeSystem s;
  s.slot.assign(g.size(), -1);
  for (Vertex x = 0; x < g.size(); ++x) {
    if (!u.contains(x)) {
      s.slot[x] = static_cast<std::ptrdiff_t>(s.free.size());
      s.free.push_back(x);
    }
  }
  const auto n = static_cast<Eigen::Index>(s.free.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(s.free.size() + 2 * g.edge_count());
  s.b = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vertex x = s.free[static_cast<std::size_t>(i)];
    trips.emplace_back(i, i, g.row_sum(x) + g.measure(x));
    for (const auto& nb : g.neighbors(x)) {
      const auto j = s.slot[nb.to];
      if (j < 0) {
        s.b[i] += nb.weight;
      } else {
        trips.emplace_back(i, j, -nb.weight);
      }
    }
  }
  s.a.resize(n, n);
  s.a.setFromTriplets(trips.begin(), trips.end());
  return s;
}

Eigen::VectorXd solve_cg(const FreeSystem& s, const EquilibriumOptions& opt, std::size_t& iters) {
  const auto n = s.a.rows();
  const std::size_t cap =
      opt.cg_max_iterations ? opt.cg_max_iterations : 50 * static_cast<std::size_t>(n);
  Eigen::VectorXd inv_diag = s.a.diagonal().cwiseInverse();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = s.b;
  const double bnorm = s.b.norm();
  if (bnorm == 0.0) return x;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (iters = 0; iters < cap; ++iters) {
    if (r.norm() <= opt.cg_tolerance * bnorm) return x;
    const Eigen::VectorXd ap = s.a * p;
    const double alpha = rz / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  if (r.norm() <= opt.cg_tolerance * bnorm) return x;
  throw NumericalError("conjugate gradient did not converge in " + std::to_string(cap) +
                           " iterations",
                       r.norm() / bnorm);
}

}  // namespace

double first_order_residual(const VertexFunction& e, const VertexSet& u) {
  const WeightedGraph& g = e.graph();
  double worst = 0.0;
  for (Vertex x = 0; x < g.size(); ++x) {
    if (u.contains(x)) continue;
    double s = g.measure(x) * e[x];
    for (const auto& nb : g.neighbors(x)) s += nb.weight * (e[x] - e[nb.to]);
    worst = std::max(worst, std::fabs(s));
  }
  return worst;
}

EquilibriumResult equilibrium(const WeightedGraph& g, const VertexSet& u,
                              const EquilibriumOptions& options) {
  if (u.empty()) throw InputError("equilibrium needs a nonempty constraint set");
  for (Vertex x : u) g.check_vertex(x);

  const FreeSystem sys = assemble(g, u);
  Eigen::VectorXd sol;
  std::size_t iterations = 0;
  if (sys.free.empty()) {
    sol.resize(0);
  } else if (options.solver == LinearSolver::SparseLDLT) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sys.a);
    if (ldlt.info() != Eigen::Success) {
      throw NumericalError("sparse LDLT factorization failed");
    }
    sol = ldlt.solve(sys.b);
    if (ldlt.info() != Eigen::Success || !sol.allFinite()) {
      throw NumericalError("sparse LDLT solve failed");
    }
    iterations = 1;
  } else {
    sol = solve_cg(sys, options, iterations);
  }

  std::vector<double> values(g.size(), 1.0);
  for (std::size_t i = 0; i < sys.free.size(); ++i) {
    values[sys.free[i]] = sol[static_cast<Eigen::Index>(i)];
  }
  EquilibriumResult res{VertexFunction(g, std::move(values)), 0.0, 0.0, 0.0, u, iterations};
  res.capacity_sq = energy(res.potential) + norm_sq(res.potential);
  res.capacity = std::sqrt(res.capacity_sq);
  res.residual = first_order_residual(res.potential, u);
  return res;
}

}  // namespace iglab
