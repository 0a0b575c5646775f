#include <random>
#include <sstream>

#include "doctest.h"
#include "iglab/error.hpp"
#include "iglab/family.hpp"
#include "iglab/gallery.hpp"
#include "iglab/graph.hpp"
#include "iglab/graph_io.hpp"
#include "support.hpp"

using namespace iglab;

TEST_SUITE("graph_core") {
  TEST_CASE("builder rejects malformed input") {
    GraphBuilder b(3);
    CHECK_THROWS_AS(b.set_measure(0, 0.0), InputError);
    CHECK_THROWS_AS(b.set_measure(0, -1.0), InputError);
    CHECK_THROWS_AS(b.set_measure(5, 1.0), InputError);
    CHECK_THROWS_AS(b.add_edge(1, 1, 1.0), InputError);
    CHECK_THROWS_AS(b.add_edge(0, 1, -0.5), InputError);
    b.add_edge(0, 1, 1.0);
    CHECK_THROWS_AS(b.add_edge(1, 0, 2.0), InputError);
    b.set_measure(0, 1.0).set_measure(1, 1.0);
    CHECK_THROWS_AS(b.build(), InputError);  // vertex 2 has no measure
  }

  TEST_CASE("weights are symmetric and degrees add up") {
    GraphBuilder b(5);
    for (Vertex x = 0; x < 5; ++x) b.set_measure(x, 1.0);
    for (Vertex leaf = 1; leaf < 5; ++leaf) b.add_edge(0, leaf, 1.0);
    const WeightedGraph g = b.build();
    CHECK(weighted_degree(g, 0) == 4.0);
    CHECK(combinatorial_degree(g, 0) == 4);
    CHECK(g.weight(0, 3) == g.weight(3, 0));
    CHECK(g.weight(1, 2) == 0.0);
    CHECK(g.edge_count() == 4);
    CHECK(combinatorial_neighborhood(g, VertexSet{3}) == VertexSet{0, 3});
    CHECK(combinatorial_neighborhood(g, VertexSet{0}) == VertexSet::range(0, 5));
    CHECK_THROWS_AS(g.measure(9), InputError);
  }

  TEST_CASE("truncation records the cut weight as leak") {
    const GraphFamily f = make_family("ex5.4");
    const WeightedGraph g = truncate(f, 4);
    REQUIRE(g.size() == 4);
    CHECK(g.frontier() == VertexSet{3});
    CHECK(g.leak(3) == 0.125);
    CHECK(full_weighted_degree(g, 3) == 16.0);  // (1/8 + 1/8) / 4^-3
    CHECK(weighted_degree(g, 3) == 8.0);
    CHECK(g.label(2) == 2);
  }

  TEST_CASE("integer windows enumerate 0, 1, -1, 2, -2, ...") {
    const WeightedGraph g = truncate(make_family("ex5.1"), 3);
    REQUIRE(g.size() == 7);
    const std::vector<Label> want{0, 1, -1, 2, -2, 3, -3};
    for (Vertex x = 0; x < g.size(); ++x) CHECK(g.label(x) == want[x]);
    CHECK(g.frontier() == VertexSet{5, 6});
    CHECK(integer_label_index(-2) == 4);
    CHECK(integer_label_index(3) == 5);
  }

  TEST_CASE("windows beyond the family's numeric range are refused") {
    const GraphFamily f = make_family("ex5.2");
    CHECK_THROWS_AS(truncate(f, f.max_window() + 1), PreconditionError);
    CHECK_THROWS_AS(truncate(f, 0), InputError);
    CHECK_NOTHROW(truncate(f, f.max_window()));
  }

  TEST_CASE("bad family rules raise family errors") {
    auto neg = make_chain_family("neg", {}, VertexModel::Naturals,
                                 [](Label x) { return x == 2 ? -1.0 : 1.0; },
                                 [](Label) { return 1.0; });
    CHECK_THROWS_AS(truncate(neg, 5), FamilyError);
    auto zero = make_chain_family("zero", {}, VertexModel::Naturals, [](Label) { return 1.0; },
                                  [](Label x) { return x == 3 ? 0.0 : 1.0; });
    CHECK_THROWS_AS(truncate(zero, 5), FamilyError);
    CHECK_NOTHROW(truncate(zero, 3));
  }

  TEST_CASE("star truncations") {
    const WeightedGraph g = truncate(make_family("a5.3"), 3);
    CHECK(g.size() == 8);  // center, apex, 3 rays of two vertices
    CHECK(is_connected(g));
    const auto hops = hop_distances(g, 0);
    CHECK(hops[1] == 2);  // center to apex through a ray tip
  }

  TEST_CASE("random graphs satisfy the structural invariants") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
      const WeightedGraph g = testing::random_graph(rng, 10);
      CHECK_NOTHROW(g.check_invariants());
      for (Vertex x = 0; x < g.size(); ++x) {
        double s = 0.0;
        for (const auto& nb : g.neighbors(x)) {
          s += nb.weight;
          CHECK(g.weight(nb.to, x) == nb.weight);
        }
        CHECK(s == doctest::Approx(g.row_sum(x)).epsilon(1e-15));
      }
    }
  }

  TEST_CASE("graph files round-trip bit for bit") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      const WeightedGraph g = testing::random_graph(rng, 10);
      std::stringstream ss;
      write_graph(ss, g);
      const WeightedGraph h = read_graph(ss);
      REQUIRE(h.size() == g.size());
      for (Vertex x = 0; x < g.size(); ++x) {
        CHECK(h.measure(x) == g.measure(x));
        for (Vertex y = 0; y < g.size(); ++y) {
          if (x != y) CHECK(h.weight(x, y) == g.weight(x, y));
        }
      }
    }
    const WeightedGraph t = truncate(make_family("ex5.4"), 6);
    std::stringstream ss;
    write_graph(ss, t);
    CHECK(read_graph(ss).leak(5) == t.leak(5));
  }

  TEST_CASE("malformed graph files") {
    std::stringstream a("graph 2\nmu 0 1\nmu 1 1\nedge 0 3 1\n");
    CHECK_THROWS_AS(read_graph(a), InputError);
    std::stringstream b("graph 2\nmu 0 1\n");
    CHECK_THROWS_AS(read_graph(b), InputError);
    std::stringstream c("nodes 2\n");
    CHECK_THROWS_AS(read_graph(c), InputError);
  }

  TEST_CASE("family configs") {
    std::stringstream in("# sweep\nfamily = ex5.6\nalpha = 2\ncase = 2\nsigma = family\n");
    const FamilyConfig cfg = parse_family_config(in);
    CHECK(cfg.family == "ex5.6");
    CHECK(cfg.params.at("alpha") == 2.0);
    CHECK(cfg.sigma.value() == "family");
    const FamilyConfig inl = resolve_family_config("ex5.6:alpha=0.75,case=1");
    CHECK(inl.params.at("alpha") == 0.75);
    std::stringstream bad("family = ex5.6\nalpha = two\n");
    CHECK_THROWS_AS(parse_family_config(bad), InputError);
  }
}
