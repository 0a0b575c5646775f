#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "iglab/family.hpp"
#include "iglab/graph.hpp"

namespace iglab {

enum class LengthKind { Sigma0, Sigma1, NaturalScaled, Custom };

const char* to_string(LengthKind k);

/// Edge lengths σ on a graph, stored per half edge in adjacency order.
/// Holds a reference to the graph, which must outlive it.
class EdgeLengths {
 public:
  /// `length(x, y)` is evaluated once per undirected edge and mirrored, so
  /// the result is symmetric bit-for-bit. Throws InputError for σ ≤ 0.
  static EdgeLengths build(const WeightedGraph& g, LengthKind kind,
                           const std::function<double(Vertex, Vertex)>& length);

  const WeightedGraph& graph() const { return *graph_; }
  LengthKind kind() const { return kind_; }

  /// σ(x, y); throws InputError if x and y are not adjacent.
  double operator()(Vertex x, Vertex y) const;
  /// Lengths of x's edges, aligned with graph().neighbors(x).
  std::span<const double> from(Vertex x) const;

 private:
  EdgeLengths(const WeightedGraph& g, LengthKind kind) : graph_(&g), kind_(kind) {}

  const WeightedGraph* graph_;
  LengthKind kind_;
  std::vector<double> half_edges_;
};

/// σ₀(x, y) = min(Deg(x)^-½, Deg(y)^-½, 1). The degree includes truncated
/// edge mass so that truncations agree with the infinite family.
EdgeLengths sigma0(const WeightedGraph& g);

/// σ₁(x, y) = w(x, y)^-½ · min(μ(x)/deg(x), μ(y)/deg(y))^½ with deg the
/// combinatorial degree.
EdgeLengths sigma1(const WeightedGraph& g);

/// σ ≡ 1/√K; requires Deg ≤ K everywhere (PreconditionError otherwise).
EdgeLengths natural_scaled(const WeightedGraph& g, double k);

/// User-facing choice of edge lengths: "sigma0", "sigma1", "natural:K" or
/// "family" (lengths declared by the family rule).
struct LengthChoice {
  enum class Kind { Sigma0, Sigma1, Natural, Family };
  Kind kind = Kind::Sigma0;
  double k = 1.0;

  static LengthChoice parse(const std::string& text);
  std::string to_string() const;
};

/// Lengths for a truncation of `family` (graph labels are family labels).
EdgeLengths make_lengths(const GraphFamily& family, const WeightedGraph& truncation,
                         const LengthChoice& choice);

/// σ(x, x+1) on a chain family as a function of the label x, evaluated from
/// the rule without truncating. Throws PreconditionError for non-chain
/// families.
std::function<double(Label)> chain_lengths(const GraphFamily& family, const LengthChoice& choice);

/// Intrinsic-inequality certificate: slack(x) = 1 - (1/μ(x)) Σ_y w(x,y) ℓ(x,y)².
struct IntrinsicCertificate {
  std::vector<double> slack;
  Vertex worst_vertex = 0;
  double min_slack = 1.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// Path metric d_σ with memoized single-source distances. Concurrent
/// queries are safe and return identical values.
class PathMetric {
 public:
  explicit PathMetric(EdgeLengths lengths, std::optional<double> jump_size = std::nullopt);

  const WeightedGraph& graph() const { return lengths_.graph(); }
  const EdgeLengths& lengths() const { return lengths_; }
  std::optional<double> declared_jump_size() const { return jump_size_; }

  /// d(x, y); +inf when y is unreachable from x.
  double distance(Vertex x, Vertex y) const;
  /// Distances from x to every vertex.
  std::shared_ptr<const std::vector<double>> distances_from(Vertex x) const;
  /// Dijkstra stopped at `radius`: (vertex, distance) for every vertex with
  /// distance ≤ radius, in settling order.
  std::vector<std::pair<Vertex, double>> distances_within(Vertex x, double radius) const;

  /// Closed ball {x : d(x, x0) ≤ r}, with the metric comparison tolerance.
  VertexSet ball(Vertex x0, double r) const;

 private:
  EdgeLengths lengths_;
  std::optional<double> jump_size_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Vertex, std::shared_ptr<const std::vector<double>>> memo_;
};

/// Certificate for d_σ itself: uses d(x, y) for adjacent pairs.
IntrinsicCertificate intrinsic_check(const PathMetric& m, double tolerance = 1e-15);
/// Certificate for the edge lengths: uses σ(x, y) directly.
IntrinsicCertificate strongly_intrinsic_check(const EdgeLengths& sigma, double tolerance = 1e-15);

/// max over edges of d(x, y): the smallest admissible jump size.
double minimal_jump_size(const PathMetric& m);
/// True when every edge has d(x, y) ≤ s (so w = 0 whenever d > s).
bool has_jump_size(const PathMetric& m, double s);

}  // namespace iglab
