#include <cmath>
#include <random>

#include "doctest.h"
#include "iglab/error.hpp"
#include "iglab/forms.hpp"
#include "iglab/gallery.hpp"
#include "support.hpp"

using namespace iglab;

TEST_SUITE("forms") {
  TEST_CASE("energy and norm by hand") {
    const WeightedGraph g = testing::path_graph(4, 2.0, 0.5);
    const VertexFunction f(g, {0.0, 1.0, 3.0, 3.0});
    CHECK(energy(f) == 2.0 * (1.0 + 4.0));
    CHECK(norm_sq(f) == 0.5 * (1.0 + 9.0 + 9.0));
    CHECK(qnorm(f) == doctest::Approx(std::sqrt(10.0 + 9.5)));
    CHECK(gradient_sq(f, 1) == 2.0 * (1.0 + 4.0));
    CHECK(laplacian(f, 1) == (2.0 * (1.0 - 0.0) + 2.0 * (1.0 - 3.0)) / 0.5);
    CHECK(f.support() == VertexSet{1, 2, 3});
    CHECK(f.sup_abs() == 3.0);
  }

  TEST_CASE("star center laplacian of the indicator") {
    GraphBuilder b(6);
    for (Vertex x = 0; x < 6; ++x) b.set_measure(x, 1.0);
    for (Vertex leaf = 1; leaf < 6; ++leaf) b.add_edge(0, leaf, 1.0);
    const WeightedGraph g = b.build();
    const auto one = VertexFunction::indicator(g, VertexSet{0});
    CHECK(laplacian(one, 0) == 5.0);
    CHECK(laplacian(one, 3) == -1.0);
    CHECK(energy(VertexFunction::constant(g, 2.0)) == 0.0);
  }

  TEST_CASE("non-finite values and size mismatches are rejected") {
    const WeightedGraph g = testing::path_graph(3);
    CHECK_THROWS_AS(VertexFunction(g, {0.0, NAN, 1.0}), InputError);
    CHECK_THROWS_AS(VertexFunction(g, {0.0, 1.0}), InputError);
  }

  TEST_CASE("frontier support is flagged with a leak bound") {
    const WeightedGraph g = truncate(make_family("ex5.4"), 5);
    const auto f = VertexFunction::indicator(g, VertexSet{4});
    const FormReport r = form_report(f);
    CHECK(r.touches_frontier);
    CHECK(r.leak_bound == doctest::Approx(4.0 * 0.125));
    const FormReport inner = form_report(VertexFunction::indicator(g, VertexSet{1}));
    CHECK_FALSE(inner.touches_frontier);
    CHECK(inner.leak_bound == 0.0);
  }

  TEST_CASE("Green, Leibniz and Caccioppoli on random graphs") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
      const WeightedGraph g = testing::random_graph(rng, 10);
      const VertexFunction u(g, testing::random_values(rng, g.size()));
      const VertexFunction v(g, testing::random_values(rng, g.size()));
      const VertexFunction h(g, testing::random_values(rng, g.size(), -3.0, 3.0));
      const auto gr = green_identity_check(u, v);
      CHECK(gr.pass(1e-9));
      CHECK(gr.laplacian_u_v == doctest::Approx(gr.u_laplacian_v).epsilon(1e-9));
      CHECK(leibniz_check(u, v, h).pass(1e-9));
      CHECK(caccioppoli_check(u, v).pass(1e-9));
      const auto c = normal_contraction(h);
      CHECK(energy(c) <= energy(h) + 1e-12);
      for (Vertex x = 0; x < g.size(); ++x) CHECK((c[x] >= 0.0 && c[x] <= 1.0));
    }
  }

  TEST_CASE("a wrong product rule is caught") {
    // Leibniz with g(x) in place of g(y) is not an identity: check the
    // residual is far from zero for a generic triple.
    const WeightedGraph g = testing::path_graph(3, 1.0, 1.0);
    const VertexFunction f(g, {0.0, 1.0, 2.0}), k(g, {1.0, 0.0, 1.0}), h(g, {0.0, 1.0, 0.0});
    const auto r = leibniz_check(f, k, h);
    CHECK(r.pass());
    CHECK(r.lhs == doctest::Approx(r.rhs));
  }

  TEST_CASE("cut-off function") {
    const WeightedGraph g = testing::path_graph(8, 1.0, 2.0);
    const PathMetric m(sigma0(g));  // unit steps
    const VertexFunction eta = cutoff_eta(m, 0, 2.0, 5.0);
    CHECK(eta[0] == 1.0);
    CHECK(eta[2] == 1.0);
    CHECK(eta[3] == doctest::Approx(2.0 / 3.0));
    CHECK(eta[5] == 0.0);
    CHECK(eta[7] == 0.0);
    CHECK(cutoff_gradient_excess(eta, 2.0, 5.0) <= 1e-12);
    CHECK_THROWS_AS(cutoff_eta(m, 0, 3.0, 3.0), InputError);
    CHECK_THROWS_AS(cutoff_eta(m, 0, -1.0, 3.0), InputError);
  }

  TEST_CASE("cut-off gradient bound on random graphs") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int i = 0; i < 200; ++i) {
      const WeightedGraph g = testing::random_graph(rng, 10, 0.5);
      const PathMetric m(sigma0(g));
      double r = u(rng), R = u(rng);
      if (r > R) std::swap(r, R);
      if (R - r < 1e-3) continue;
      CHECK(cutoff_gradient_excess(cutoff_eta(m, 0, r, R), r, R) <= 1e-12);
    }
  }

  TEST_CASE("e_n cut-offs on ex5.1 have energy 2/n") {
    const GraphFamily f = make_family("ex5.1");
    for (std::size_t n = 1; n <= 40; ++n) {
      const WeightedGraph g = truncate(f, 2 * n + 3);
      std::vector<double> e(g.size());
      for (Vertex x = 0; x < g.size(); ++x) {
        const double ax = std::fabs(static_cast<double>(g.label(x)));
        e[x] = std::min(std::max(ax / static_cast<double>(n) - 1.0, 0.0), 1.0);
      }
      CHECK(testing::rel_err(energy(VertexFunction(g, e)), 2.0 / static_cast<double>(n)) <= 1e-12);
    }
  }
}
