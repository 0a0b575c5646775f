#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace iglab {

/// Dense vertex index into a WeightedGraph.
using Vertex = std::uint32_t;

/// Position of a vertex in its family's vertex model (ℕ₀, ℤ, or an explicit
/// enumeration). Truncations keep the label so results can be reported in
/// model coordinates.
using Label = std::int64_t;

struct Neighbor {
  Vertex to;
  double weight;
};

/// Sorted, duplicate-free set of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Vertex> ids);
  VertexSet(std::initializer_list<Vertex> ids);

  /// {first, ..., last - 1}
  static VertexSet range(Vertex first, Vertex last);

  bool contains(Vertex x) const;
  bool includes(const VertexSet& other) const;
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  const std::vector<Vertex>& ids() const { return ids_; }

  VertexSet unite(const VertexSet& other) const;
  VertexSet complement(std::size_t n) const;

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> ids_;
};

class GraphBuilder;

/// Finite weighted graph (X, w, μ) with symmetric weights, zero diagonal and
/// strictly positive measure. Graphs produced by truncating an infinite
/// family also record, per vertex, the weight mass of edges that were cut off
/// by the truncation (`leak`); such vertices form the frontier.
///
/// Immutable after construction and safe for concurrent reads.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  std::size_t size() const { return measure_.size(); }
  std::size_t edge_count() const { return adjacency_.size() / 2; }

  std::span<const Neighbor> neighbors(Vertex x) const;
  /// Offset of x's first neighbor in the flat adjacency array; per-half-edge
  /// data (edge lengths) is stored in the same order.
  std::size_t neighbor_offset(Vertex x) const;

  /// w(x, y), 0 when not adjacent. Symmetric bit-for-bit.
  double weight(Vertex x, Vertex y) const;
  double measure(Vertex x) const;
  double row_sum(Vertex x) const;
  double leak(Vertex x) const;
  Label label(Vertex x) const;

  bool is_frontier(Vertex x) const;
  const VertexSet& frontier() const { return frontier_; }
  double total_measure() const;

  /// Throws InputError for ids outside 0..size()-1.
  void check_vertex(Vertex x) const;
  /// Recomputes row sums and symmetry; throws InternalError on drift.
  void check_invariants() const;

 private:
  friend class GraphBuilder;

  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<double> measure_;
  std::vector<double> row_sum_;
  std::vector<double> leak_;
  std::vector<Label> labels_;
  std::vector<bool> frontier_flag_;
  VertexSet frontier_;
};

class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n);

  GraphBuilder& set_measure(Vertex x, double mu);
  /// Adds the undirected edge {x, y}. Self loops, duplicate edges,
  /// negative or non-finite weights are rejected; zero weights are ignored.
  GraphBuilder& add_edge(Vertex x, Vertex y, double w);
  /// Records weight mass of edges from x that leave the truncation window.
  GraphBuilder& add_leak(Vertex x, double mass);
  GraphBuilder& mark_frontier(Vertex x);
  GraphBuilder& set_label(Vertex x, Label label);

  WeightedGraph build() const;

 private:
  void check(Vertex x) const;

  std::size_t n_;
  std::vector<double> measure_;
  std::vector<double> leak_;
  std::vector<Label> labels_;
  std::vector<bool> frontier_;
  std::vector<std::vector<Neighbor>> rows_;
};

/// Deg(x) = (1/μ(x)) Σ_y w(x, y) over stored neighbors.
double weighted_degree(const WeightedGraph& g, Vertex x);

/// Weighted degree including the mass of truncated edges. On a truncation
/// this equals the degree of x in the infinite family.
double full_weighted_degree(const WeightedGraph& g, Vertex x);

/// Number of stored neighbors.
std::size_t combinatorial_degree(const WeightedGraph& g, Vertex x);

/// n(K) = K ∪ {x : x ~ y for some y ∈ K}.
VertexSet combinatorial_neighborhood(const WeightedGraph& g, const VertexSet& k);

bool is_connected(const WeightedGraph& g);

/// Vertices at combinatorial (hop) distance from `origin`; unreachable
/// vertices get SIZE_MAX.
std::vector<std::size_t> hop_distances(const WeightedGraph& g, Vertex origin);

}  // namespace iglab
