#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "iglab/error.hpp"
#include "iglab/gallery.hpp"
#include "iglab/metric.hpp"
#include "support.hpp"

using namespace iglab;

TEST_SUITE("metric") {
  TEST_CASE("sigma0 on the w = 1/8, mu = 4^-x ray is 2^-x") {
    const GraphFamily f = make_family("ex5.4");
    const WeightedGraph g = truncate(f, 40);
    const EdgeLengths s = sigma0(g);
    for (Vertex x = 0; x + 1 < g.size(); ++x) {
      CHECK(s(x, x + 1) == std::exp2(-static_cast<double>(x)));
    }
    // chain_lengths reads the same values off the rule
    const auto c = chain_lengths(f, LengthChoice::parse("sigma0"));
    for (Label x = 0; x < 39; ++x) CHECK(c(x) == s(static_cast<Vertex>(x), static_cast<Vertex>(x + 1)));
  }

  TEST_CASE("sigma1 hand case") {
    // path 0-1-2, w(0,1) = 4, w(1,2) = 1, mu = (1, 2, 1)
    GraphBuilder b(3);
    b.set_measure(0, 1).set_measure(1, 2).set_measure(2, 1).add_edge(0, 1, 4).add_edge(1, 2, 1);
    const WeightedGraph g = b.build();
    const EdgeLengths s = sigma1(g);
    // min(mu/deg) over the endpoints: vertex 0 gives 1, vertex 1 gives 1
    CHECK(s(0, 1) == doctest::Approx(0.5));
    CHECK(s(1, 2) == doctest::Approx(1.0));
    CHECK(strongly_intrinsic_check(s).pass);
  }

  TEST_CASE("natural scaling needs a degree bound") {
    const WeightedGraph g = testing::path_graph(5, 1.0, 2.0);  // Deg <= 1
    const EdgeLengths s = natural_scaled(g, 1.0);
    CHECK(s(1, 2) == 1.0);
    CHECK(natural_scaled(g, 4.0)(1, 2) == 0.5);
    CHECK_THROWS_AS(natural_scaled(testing::path_graph(5, 1.0, 0.5), 1.0), PreconditionError);
  }

  TEST_CASE("length choices parse and print") {
    for (const char* t : {"sigma0", "sigma1", "natural:4", "family"}) {
      CHECK(LengthChoice::parse(t).to_string() == t);
    }
    CHECK_THROWS_AS(LengthChoice::parse("sigma2"), InputError);
    CHECK_THROWS_AS(LengthChoice::parse("natural:-1"), InputError);
  }

  TEST_CASE("Dijkstra matches exhaustive path search") {
    std::mt19937_64 rng(2024);
    int compared = 0;
    for (int i = 0; i < 300; ++i) {
      const WeightedGraph g = testing::random_graph(rng, 8, 0.5);
      const PathMetric m(sigma0(g));
      for (Vertex x = 0; x < g.size(); ++x) {
        for (Vertex y = 0; y < g.size(); ++y) {
          const double want = testing::brute_force_distance(m.lengths(), x, y);
          const double got = m.distance(x, y);
          if (std::isinf(want)) {
            CHECK(std::isinf(got));
          } else {
            CHECK(std::fabs(got - want) <= 1e-12);
            ++compared;
          }
        }
      }
    }
    CHECK(compared > 1000);
  }

  TEST_CASE("metric axioms on random graphs") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
      const WeightedGraph g = testing::random_graph(rng, 9, 0.5);
      const PathMetric m(sigma1(g));
      for (Vertex x = 0; x < g.size(); ++x) {
        CHECK(m.distance(x, x) == 0.0);
        for (Vertex y = 0; y < g.size(); ++y) {
          // sums along a path in opposite orders may differ in the last ulp
          const double dxy = m.distance(x, y), dyx = m.distance(y, x);
          if (std::isinf(dxy)) CHECK(std::isinf(dyx));
          else CHECK(testing::rel_err(dxy, dyx) <= 1e-14);
          for (Vertex z = 0; z < g.size(); ++z) {
            const double dxz = m.distance(x, z);
            if (std::isfinite(dxz)) CHECK(dxz <= m.distance(x, y) + m.distance(y, z) + 1e-14);
          }
        }
      }
    }
  }

  TEST_CASE("balls grow with the radius and bounded search agrees") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
      const WeightedGraph g = testing::random_graph(rng, 10, 0.4);
      const PathMetric m(sigma0(g));
      const auto& d = *m.distances_from(0);
      VertexSet prev;
      for (double r : {0.0, 0.25, 0.5, 1.0, 2.0, 8.0}) {
        const VertexSet b = m.ball(0, r);
        CHECK(b.includes(prev));
        CHECK(b.contains(0));
        for (const auto& [v, dv] : m.distances_within(0, r)) {
          CHECK(dv == d[v]);
          CHECK(b.contains(v));
        }
        prev = b;
      }
    }
  }

  TEST_CASE("sigma0 and sigma1 are strongly intrinsic, d is intrinsic") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
      const WeightedGraph g = testing::random_graph(rng, 10);
      const PathMetric m0(sigma0(g)), m1(sigma1(g));
      const auto s0 = strongly_intrinsic_check(m0.lengths());
      const auto s1 = strongly_intrinsic_check(m1.lengths());
      CHECK(s0.pass);
      CHECK(s1.pass);
      CHECK(s0.min_slack >= -1e-15);
      const auto i0 = intrinsic_check(m0);
      CHECK(i0.pass);
      CHECK(i0.min_slack >= s0.min_slack - 1e-15);
    }
  }

  TEST_CASE("a too long edge fails the certificate") {
    const WeightedGraph g = testing::path_graph(3, 1.0, 1.0);
    const EdgeLengths s = EdgeLengths::build(g, LengthKind::Custom, [](Vertex, Vertex) { return 1.0; });
    const auto cert = strongly_intrinsic_check(s);
    CHECK_FALSE(cert.pass);
    CHECK(cert.worst_vertex == 1);
    CHECK(cert.min_slack == doctest::Approx(-1.0));
  }

  TEST_CASE("jump size") {
    const WeightedGraph g = truncate(make_family("ex5.4"), 20);
    const PathMetric m(sigma0(g));
    CHECK(minimal_jump_size(m) == 1.0);
    CHECK(has_jump_size(m, 1.0));
    CHECK_FALSE(has_jump_size(m, 0.5));
  }

  TEST_CASE("memoized distances are safe to query from several threads") {
    std::mt19937_64 rng(1);
    const WeightedGraph g = testing::random_graph(rng, 10, 0.6);
    const PathMetric m(sigma0(g));
    std::vector<std::vector<double>> seen(4);
    std::vector<std::thread> ts;
    for (int t = 0; t < 4; ++t) {
      ts.emplace_back([&, t] {
        for (Vertex x = 0; x < g.size(); ++x) {
          for (Vertex y = 0; y < g.size(); ++y) seen[t].push_back(m.distance(x, y));
        }
      });
    }
    for (auto& t : ts) t.join();
    for (int t = 1; t < 4; ++t) CHECK(seen[t] == seen[0]);
  }
}
