#include "iglab/metric.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <queue>

#include "iglab/error.hpp"
#include "iglab/tolerance.hpp"

namespace iglab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using HeapEntry = std::pair<double, Vertex>;
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

// Binary-heap Dijkstra from `source`, settling vertices up to `radius`.
// Calls visit(vertex, distance) once per settled vertex.
template <class Visit>
void dijkstra(const EdgeLengths& sigma, Vertex source, double radius, std::vector<double>& dist,
              Visit&& visit) {
  const WeightedGraph& g = sigma.graph();
  dist.assign(g.size(), kInf);
  std::vector<bool> done(g.size(), false);
  MinHeap heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (done[x]) continue;
    if (d > radius && !nearly_le(d, radius)) break;
    done[x] = true;
    visit(x, d);
    const auto nbs = g.neighbors(x);
    const auto len = sigma.from(x);
    for (std::size_t i = 0; i < nbs.size(); ++i) {
      const Vertex y = nbs[i].to;
      const double nd = d + len[i];
      if (nd < dist[y]) {
        dist[y] = nd;
        heap.emplace(nd, y);
      }
    }
  }
}

}  // namespace

PathMetric::PathMetric(EdgeLengths lengths, std::optional<double> jump_size)
    : lengths_(std::move(lengths)), jump_size_(jump_size) {
  if (jump_size_ && !(*jump_size_ > 0.0)) throw InputError("jump size must be positive");
}

std::shared_ptr<const std::vector<double>> PathMetric::distances_from(Vertex x) const {
  graph().check_vertex(x);
  {
    std::shared_lock lock(mutex_);
    auto it = memo_.find(x);
    if (it != memo_.end()) return it->second;
  }
  auto dist = std::make_shared<std::vector<double>>();
  dijkstra(lengths_, x, kInf, *dist, [](Vertex, double) {});
  std::unique_lock lock(mutex_);
  auto [it, inserted] = memo_.emplace(x, std::move(dist));
  return it->second;
}

double PathMetric::distance(Vertex x, Vertex y) const {
  graph().check_vertex(y);
  if (x == y) {
    graph().check_vertex(x);
    return 0.0;
  }
  return (*distances_from(x))[y];
}

std::vector<std::pair<Vertex, double>> PathMetric::distances_within(Vertex x, double radius) const {
  graph().check_vertex(x);
  if (radius < 0.0) throw InputError("radius must be non-negative");
  std::vector<std::pair<Vertex, double>> out;
  std::vector<double> scratch;
  dijkstra(lengths_, x, radius, scratch, [&](Vertex v, double d) { out.emplace_back(v, d); });
  return out;
}

VertexSet PathMetric::ball(Vertex x0, double r) const {
  std::vector<Vertex> ids;
  for (const auto& [v, d] : distances_within(x0, r)) ids.push_back(v);
  return VertexSet(std::move(ids));
}

namespace {

IntrinsicCertificate certify(const WeightedGraph& g, double tolerance,
                             const std::function<double(Vertex, std::size_t)>& length) {
  IntrinsicCertificate cert;
  cert.tolerance = tolerance;
  cert.slack.resize(g.size());
  for (Vertex x = 0; x < g.size(); ++x) {
    double sum = 0.0;
    const auto nbs = g.neighbors(x);
    for (std::size_t i = 0; i < nbs.size(); ++i) {
      const double l = length(x, i);
      sum += nbs[i].weight * l * l;
    }
    cert.slack[x] = 1.0 - sum / g.measure(x);
    if (x == 0 || cert.slack[x] < cert.min_slack) {
      cert.min_slack = cert.slack[x];
      cert.worst_vertex = x;
    }
  }
  if (g.size() == 0) cert.min_slack = 1.0;
  cert.pass = cert.min_slack >= -tolerance;
  return cert;
}

// d(x, y) for every neighbor y of x, aligned with the adjacency row.
std::vector<double> neighbor_distances(const PathMetric& m, Vertex x) {
  const auto nbs = m.graph().neighbors(x);
  const auto len = m.lengths().from(x);
  double reach = 0.0;
  for (double l : len) reach = std::max(reach, l);
  std::vector<double> out(len.begin(), len.end());
  for (const auto& [v, d] : m.distances_within(x, reach)) {
    auto it = std::lower_bound(nbs.begin(), nbs.end(), v,
                               [](const Neighbor& nb, Vertex u) { return nb.to < u; });
    if (it != nbs.end() && it->to == v) {
      auto i = static_cast<std::size_t>(it - nbs.begin());
      out[i] = std::min(out[i], d);
    }
  }
  return out;
}

}  // namespace

IntrinsicCertificate intrinsic_check(const PathMetric& m, double tolerance) {
  const WeightedGraph& g = m.graph();
  std::vector<std::vector<double>> rows(g.size());
  for (Vertex x = 0; x < g.size(); ++x) rows[x] = neighbor_distances(m, x);
  return certify(g, tolerance, [&](Vertex x, std::size_t i) { return rows[x][i]; });
}

IntrinsicCertificate strongly_intrinsic_check(const EdgeLengths& sigma, double tolerance) {
  return certify(sigma.graph(), tolerance,
                 [&](Vertex x, std::size_t i) { return sigma.from(x)[i]; });
}

double minimal_jump_size(const PathMetric& m) {
  double s = 0.0;
  for (Vertex x = 0; x < m.graph().size(); ++x) {
    for (double d : neighbor_distances(m, x)) s = std::max(s, d);
  }
  return s;
}

bool has_jump_size(const PathMetric& m, double s) { return nearly_le(minimal_jump_size(m), s); }

}  // namespace iglab
