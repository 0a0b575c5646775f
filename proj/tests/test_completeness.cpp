#include <cmath>

#include "doctest.h"
#include "iglab/completeness.hpp"
#include "iglab/error.hpp"
#include "iglab/gallery.hpp"
#include "support.hpp"

using namespace iglab;

namespace {
LengthChoice choice(const char* s) { return LengthChoice::parse(s); }
}  // namespace

TEST_SUITE("completeness") {
  TEST_CASE("geodesic along a path") {
    const WeightedGraph g = testing::path_graph(6, 1.0, 2.0);
    const PathMetric m(sigma0(g));
    const Geodesic geo = find_geodesic(m, 0, 4);
    CHECK(geo.path == std::vector<Vertex>{0, 1, 2, 3, 4});
    CHECK(geo.verified);
    CHECK(geo.length == doctest::Approx(m.distance(0, 4)));
    CHECK(path_length(m.lengths(), geo.path) == geo.length);
    CHECK_THROWS_AS(find_geodesic(m, 0, 6), PreconditionError);
    CHECK_THROWS_AS(path_length(m.lengths(), {0, 2}), InputError);
  }

  TEST_CASE("ties go to the lexicographically smallest path") {
    // square 0-1-3 and 0-2-3 with equal lengths
    GraphBuilder b(4);
    for (Vertex x = 0; x < 4; ++x) b.set_measure(x, 1.0);
    b.add_edge(0, 1, 1).add_edge(0, 2, 1).add_edge(1, 3, 1).add_edge(2, 3, 1);
    const WeightedGraph g = b.build();
    const PathMetric m(EdgeLengths::build(g, LengthKind::Custom, [](Vertex, Vertex) { return 0.5; }));
    CHECK(find_geodesic(m, 0, 2).path == std::vector<Vertex>{0, 1, 3});
    CHECK(find_geodesic(m, 3, 2).path == std::vector<Vertex>{3, 1, 0});
  }

  TEST_CASE("a shorter detour beats the direct hop count") {
    // 0-1 long, 0-2-1 short; sphere of radius 2 around 0 is {3} behind 1
    GraphBuilder b(4);
    for (Vertex x = 0; x < 4; ++x) b.set_measure(x, 1.0);
    b.add_edge(0, 1, 1).add_edge(0, 2, 1).add_edge(2, 1, 1).add_edge(1, 3, 1);
    const WeightedGraph g = b.build();
    const PathMetric m(EdgeLengths::build(g, LengthKind::Custom, [](Vertex x, Vertex y) {
      return (x == 0 && y == 1) || (x == 1 && y == 0) ? 1.0 : 0.25;
    }));
    const Geodesic geo = find_geodesic(m, 0, 2);
    CHECK(geo.path == std::vector<Vertex>{0, 2, 1, 3});
    CHECK(geo.length == doctest::Approx(0.75));
    CHECK(geo.verified);
  }

  TEST_CASE("ex5.4 boundary: one point at distance r(x) = 2^-(x-1)") {
    const GraphFamily f = make_family("ex5.4");
    const BoundaryModel bm = boundary_model(f, choice("sigma0"));
    CHECK(bm.boundary_points() == 1);
    const End* right = bm.end(EndSide::Right);
    REQUIRE(right != nullptr);
    CHECK(right->finite);
    CHECK(right->geometric);
    CHECK(bm.total_length() == doctest::Approx(2.0).epsilon(1e-14));
    const BoundaryDistance bd = boundary_distances(bm, 40);
    for (std::size_t i = 1; i < bd.labels.size(); ++i) {
      const double want = std::exp2(-static_cast<double>(bd.labels[i] - 1));
      CHECK(testing::rel_err(bd.r[i], want) <= 1e-12);
    }
  }

  TEST_CASE("ex5.1 has two boundary points and is incomplete") {
    const GraphFamily f = make_family("ex5.1");
    const BoundaryModel bm = boundary_model(f, choice("sigma0"));
    CHECK(bm.boundary_points() == 2);
    const HopfRinowReport r = hopf_rinow_report(f, choice("sigma0"), {8, 16, 32, 64});
    CHECK(r.verdict == "incomplete");
    CHECK(r.boundary_points == 2);
    REQUIRE(r.total_length.has_value());
    for (const auto& row : r.rows) {
      if (row.radius >= *r.total_length) CHECK(row.fills_window);
    }
  }

  TEST_CASE("the unit-length ray is complete") {
    const GraphFamily f = make_family("ray");
    const HopfRinowReport r = hopf_rinow_report(f, choice("natural:1"), {8, 16, 32, 64, 128});
    CHECK(r.verdict == "complete");
    CHECK(r.boundary_points == 0);
    CHECK_FALSE(r.total_length.has_value());
    const BoundaryModel bm = boundary_model(f, choice("natural:1"));
    CHECK_THROWS_AS(boundary_distances(bm, 10), PreconditionError);
  }

  TEST_CASE("ex5.3: both ends are boundary points") {
    const GraphFamily f = make_family("ex5.3");
    const BoundaryModel bm = boundary_model(f, choice("sigma0"));
    CHECK(bm.boundary_points() == 2);
    CHECK(bm.left_tail(0) == doctest::Approx(bm.end(EndSide::Left)->length));
    CHECK(bm.right_tail(0) == doctest::Approx(bm.end(EndSide::Right)->length));
  }

  TEST_CASE("star families are outside the locally finite theory") {
    const HopfRinowReport r = hopf_rinow_report(make_family("a5.1"), choice("sigma0"), {4, 8, 16});
    CHECK(r.verdict == "not applicable");
    CHECK_FALSE(r.locally_finite);
    CHECK_THROWS_AS(boundary_model(make_family("a5.1"), choice("sigma0")), PreconditionError);
  }

  TEST_CASE("hop-limited geodesics on random graphs are verified") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
      const WeightedGraph g = testing::random_graph(rng, 9, 0.5);
      const PathMetric m(sigma0(g));
      const auto hops = hop_distances(g, 0);
      std::size_t far = 0;
      for (auto h : hops) {
        if (h != static_cast<std::size_t>(-1)) far = std::max(far, h);
      }
      for (std::size_t n = 1; n <= far; ++n) {
        const Geodesic geo = find_geodesic(m, 0, n);
        CHECK(geo.verified);
        CHECK(geo.length == doctest::Approx(m.distance(0, geo.path.back())).epsilon(1e-12));
      }
    }
  }
}
