#include "iglab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "iglab/error.hpp"

namespace iglab {

VertexSet::VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

VertexSet::VertexSet(std::initializer_list<Vertex> ids)
    : VertexSet(std::vector<Vertex>(ids)) {}

VertexSet VertexSet::range(Vertex first, Vertex last) {
  VertexSet s;
  for (Vertex x = first; x < last; ++x) s.ids_.push_back(x);
  return s;
}

bool VertexSet::contains(Vertex x) const {
  return std::binary_search(ids_.begin(), ids_.end(), x);
}

bool VertexSet::includes(const VertexSet& other) const {
  return std::includes(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end());
}

VertexSet VertexSet::unite(const VertexSet& other) const {
  VertexSet out;
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(out.ids_));
  return out;
}

VertexSet VertexSet::complement(std::size_t n) const {
  VertexSet out;
  std::size_t k = 0;
  for (Vertex x = 0; x < n; ++x) {
    if (k < ids_.size() && ids_[k] == x) {
      ++k;
      continue;
    }
    out.ids_.push_back(x);
  }
  return out;
}

// --- WeightedGraph ---------------------------------------------------------

void WeightedGraph::check_vertex(Vertex x) const {
  if (x >= size()) {
    throw InputError("unknown vertex id " + std::to_string(x) + " (graph has " +
                     std::to_string(size()) + " vertices)");
  }
}

std::span<const Neighbor> WeightedGraph::neighbors(Vertex x) const {
  check_vertex(x);
  return {adjacency_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
}

std::size_t WeightedGraph::neighbor_offset(Vertex x) const {
  check_vertex(x);
  return offsets_[x];
}

double WeightedGraph::weight(Vertex x, Vertex y) const {
  check_vertex(y);
  auto row = neighbors(x);
  auto it = std::lower_bound(row.begin(), row.end(), y,
                             [](const Neighbor& n, Vertex v) { return n.to < v; });
  return (it != row.end() && it->to == y) ? it->weight : 0.0;
}

double WeightedGraph::measure(Vertex x) const {
  check_vertex(x);
  return measure_[x];
}

double WeightedGraph::row_sum(Vertex x) const {
  check_vertex(x);
  return row_sum_[x];
}

double WeightedGraph::leak(Vertex x) const {
  check_vertex(x);
  return leak_[x];
}

Label WeightedGraph::label(Vertex x) const {
  check_vertex(x);
  return labels_[x];
}

bool WeightedGraph::is_frontier(Vertex x) const {
  check_vertex(x);
  return frontier_flag_[x];
}

double WeightedGraph::total_measure() const {
  double s = 0.0;
  for (double m : measure_) s += m;
  return s;
}

void WeightedGraph::check_invariants() const {
  for (Vertex x = 0; x < size(); ++x) {
    if (!(measure_[x] > 0.0) || !std::isfinite(measure_[x])) {
      throw InternalError("non-positive measure at vertex " + std::to_string(x));
    }
    double s = 0.0;
    for (const auto& nb : neighbors(x)) {
      if (nb.to == x) throw InternalError("self loop at vertex " + std::to_string(x));
      if (weight(nb.to, x) != nb.weight) {
        throw InternalError("asymmetric weight on edge " + std::to_string(x) + "-" +
                            std::to_string(nb.to));
      }
      s += nb.weight;
    }
    const double cached = row_sum_[x];
    if (std::abs(s - cached) > 1e-12 * std::max(std::abs(cached), 1e-300)) {
      throw InternalError("row sum drift at vertex " + std::to_string(x));
    }
  }
}

// --- GraphBuilder ----------------------------------------------------------

GraphBuilder::GraphBuilder(std::size_t n)
    : n_(n),
      measure_(n, std::numeric_limits<double>::quiet_NaN()),
      leak_(n, 0.0),
      labels_(n),
      frontier_(n, false),
      rows_(n) {
  if (n > std::numeric_limits<Vertex>::max()) throw InputError("graph too large");
  for (std::size_t i = 0; i < n; ++i) labels_[i] = static_cast<Label>(i);
}

void GraphBuilder::check(Vertex x) const {
  if (x >= n_) {
    throw InputError("unknown vertex id " + std::to_string(x) + " (graph has " +
                     std::to_string(n_) + " vertices)");
  }
}

GraphBuilder& GraphBuilder::set_measure(Vertex x, double mu) {
  check(x);
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InputError("measure must be positive and finite at vertex " + std::to_string(x));
  }
  measure_[x] = mu;
  return *this;
}

GraphBuilder& GraphBuilder::add_edge(Vertex x, Vertex y, double w) {
  check(x);
  check(y);
  if (x == y) throw InputError("self loop at vertex " + std::to_string(x));
  if (!(w >= 0.0) || !std::isfinite(w)) {
    throw InputError("edge weight must be non-negative and finite on " + std::to_string(x) +
                     "-" + std::to_string(y));
  }
  if (w == 0.0) return *this;
  for (const auto& nb : rows_[x]) {
    if (nb.to == y) {
      throw InputError("duplicate edge " + std::to_string(x) + "-" + std::to_string(y));
    }
  }
  rows_[x].push_back({y, w});
  rows_[y].push_back({x, w});
  return *this;
}

GraphBuilder& GraphBuilder::add_leak(Vertex x, double mass) {
  check(x);
  if (!(mass >= 0.0) || !std::isfinite(mass)) {
    throw InputError("leak mass must be non-negative at vertex " + std::to_string(x));
  }
  leak_[x] += mass;
  if (mass > 0.0) frontier_[x] = true;
  return *this;
}

GraphBuilder& GraphBuilder::mark_frontier(Vertex x) {
  check(x);
  frontier_[x] = true;
  return *this;
}

GraphBuilder& GraphBuilder::set_label(Vertex x, Label label) {
  check(x);
  labels_[x] = label;
  return *this;
}

WeightedGraph GraphBuilder::build() const {
  WeightedGraph g;
  g.offsets_.assign(n_ + 1, 0);
  for (std::size_t x = 0; x < n_; ++x) {
    if (std::isnan(measure_[x])) {
      throw InputError("missing measure for vertex " + std::to_string(x));
    }
    g.offsets_[x + 1] = g.offsets_[x] + rows_[x].size();
  }
  g.adjacency_.reserve(g.offsets_[n_]);
  g.row_sum_.assign(n_, 0.0);
  for (std::size_t x = 0; x < n_; ++x) {
    auto row = rows_[x];
    std::sort(row.begin(), row.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    double s = 0.0;
    for (const auto& nb : row) s += nb.weight;
    g.row_sum_[x] = s;
    g.adjacency_.insert(g.adjacency_.end(), row.begin(), row.end());
  }
  g.measure_ = measure_;
  g.leak_ = leak_;
  g.labels_ = labels_;
  g.frontier_flag_ = frontier_;
  std::vector<Vertex> fr;
  for (std::size_t x = 0; x < n_; ++x)
    if (frontier_[x]) fr.push_back(static_cast<Vertex>(x));
  g.frontier_ = VertexSet(std::move(fr));
  return g;
}

// --- free functions --------------------------------------------------------

double weighted_degree(const WeightedGraph& g, Vertex x) {
  return g.row_sum(x) / g.measure(x);
}

double full_weighted_degree(const WeightedGraph& g, Vertex x) {
  return (g.row_sum(x) + g.leak(x)) / g.measure(x);
}

std::size_t combinatorial_degree(const WeightedGraph& g, Vertex x) {
  return g.neighbors(x).size();
}

VertexSet combinatorial_neighborhood(const WeightedGraph& g, const VertexSet& k) {
  std::vector<Vertex> out(k.begin(), k.end());
  for (Vertex y : k) {
    for (const auto& nb : g.neighbors(y)) out.push_back(nb.to);
  }
  return VertexSet(std::move(out));
}

std::vector<std::size_t> hop_distances(const WeightedGraph& g, Vertex origin) {
  g.check_vertex(origin);
  std::vector<std::size_t> dist(g.size(), std::numeric_limits<std::size_t>::max());
  std::deque<Vertex> queue{origin};
  dist[origin] = 0;
  while (!queue.empty()) {
    Vertex x = queue.front();
    queue.pop_front();
    for (const auto& nb : g.neighbors(x)) {
      if (dist[nb.to] == std::numeric_limits<std::size_t>::max()) {
        dist[nb.to] = dist[x] + 1;
        queue.push_back(nb.to);
      }
    }
  }
  return dist;
}

bool is_connected(const WeightedGraph& g) {
  if (g.size() == 0) return true;
  auto d = hop_distances(g, 0);
  return std::none_of(d.begin(), d.end(), [](std::size_t v) {
    return v == std::numeric_limits<std::size_t>::max();
  });
}

}  // namespace iglab
