#include "iglab/completeness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "iglab/error.hpp"
#include "iglab/tolerance.hpp"

namespace iglab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using HeapEntry = std::pair<double, Vertex>;
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

// Dijkstra from the sources over vertices with hop ≤ n, never expanding out of
// the sphere hop == n (paths in P_n end on first contact with the sphere).
std::vector<double> restricted_dijkstra(const EdgeLengths& sigma, const std::vector<std::size_t>& hop,
                                        std::size_t n, const std::vector<Vertex>& sources,
                                        bool expand_sphere_sources) {
  const WeightedGraph& g = sigma.graph();
  std::vector<double> dist(g.size(), kInf);
  std::vector<bool> done(g.size(), false);
  MinHeap heap;
  for (Vertex s : sources) {
    dist[s] = 0.0;
    heap.emplace(0.0, s);
  }
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (done[x]) continue;
    done[x] = true;
    const bool is_source = d == 0.0 && std::find(sources.begin(), sources.end(), x) != sources.end();
    if (hop[x] == n && !(is_source && expand_sphere_sources)) continue;
    const auto nbs = g.neighbors(x);
    const auto len = sigma.from(x);
    for (std::size_t i = 0; i < nbs.size(); ++i) {
      const Vertex y = nbs[i].to;
      if (hop[y] > n) continue;
      const double nd = d + len[i];
      if (nd < dist[y]) {
        dist[y] = nd;
        heap.emplace(nd, y);
      }
    }
  }
  return dist;
}

}  // namespace

double path_length(const EdgeLengths& sigma, const std::vector<Vertex>& path) {
  double l = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) l += sigma(path[i - 1], path[i]);
  return l;
}

Geodesic find_geodesic(const PathMetric& m, Vertex o, std::size_t n) {
  const WeightedGraph& g = m.graph();
  g.check_vertex(o);
  const auto hop = hop_distances(g, o);
  std::vector<Vertex> sphere;
  for (Vertex x = 0; x < g.size(); ++x) {
    if (hop[x] == n) sphere.push_back(x);
  }
  if (sphere.empty()) {
    throw PreconditionError("combinatorial sphere of radius " + std::to_string(n) +
                            " around vertex " + std::to_string(o) + " is empty (out of range)");
  }
  Geodesic geo;
  if (n == 0) {
    geo.path = {o};
    geo.verified = true;
    return geo;
  }
  const EdgeLengths& sigma = m.lengths();
  const auto forward = restricted_dijkstra(sigma, hop, n, {o}, false);
  double best = kInf;
  for (Vertex t : sphere) best = std::min(best, forward[t]);
  std::vector<Vertex> targets;
  for (Vertex t : sphere) {
    if (nearly_equal(forward[t], best)) targets.push_back(t);
  }
  // Distances back from the optimal targets; sphere vertices other than the
  // targets themselves are terminal.
  const auto backward = restricted_dijkstra(sigma, hop, n, targets, true);

  // Walk forward taking the smallest admissible next vertex, which yields the
  // lexicographically smallest optimal path.
  geo.path.push_back(o);
  Vertex x = o;
  double walked = 0.0;
  while (hop[x] != n) {
    const auto nbs = g.neighbors(x);
    const auto len = sigma.from(x);
    bool moved = false;
    for (std::size_t i = 0; i < nbs.size(); ++i) {
      const Vertex y = nbs[i].to;
      if (hop[y] > n) continue;
      if (hop[y] == n && !std::binary_search(targets.begin(), targets.end(), y)) continue;
      if (std::find(geo.path.begin(), geo.path.end(), y) != geo.path.end()) continue;
      const double through = walked + len[i];
      if (nearly_equal(through, forward[y]) && nearly_equal(through + backward[y], best)) {
        geo.path.push_back(y);
        walked = through;
        x = y;
        moved = true;
        break;
      }
    }
    if (!moved) throw InternalError("geodesic reconstruction lost the optimal path");
  }
  geo.length = path_length(sigma, geo.path);

  geo.verified = true;
  double prefix = 0.0;
  for (std::size_t k = 1; k < geo.path.size(); ++k) {
    prefix += sigma(geo.path[k - 1], geo.path[k]);
    if (!nearly_equal(m.distance(o, geo.path[k]), prefix)) {
      geo.verified = false;
      break;
    }
  }
  return geo;
}

const char* to_string(EndSide s) { return s == EndSide::Left ? "left" : "right"; }

// --- BoundaryModel ----------------------------------------------------------

namespace {

// Σ_{k ≥ 0} σ(start + k·step). Exact closed form when σ is geometric over a
// run of terms; partial sums otherwise.
struct Tail {
  double value = 0.0;
  bool geometric = false;
  double ratio = 0.0;
  SeriesVerdict verdict = SeriesVerdict::Inconclusive;
};

Tail tail_of(const std::function<double(Label)>& sigma, Label start, Label step,
             std::size_t max_terms) {
  constexpr int kProbe = 12;
  Tail t;
  double terms[kProbe + 1];
  for (int k = 0; k <= kProbe; ++k) terms[k] = sigma(start + k * step);
  const double q = terms[1] / terms[0];
  bool geometric = terms[0] > 0.0 && std::isfinite(q);
  for (int k = 1; k < kProbe && geometric; ++k) {
    geometric = terms[k] > 0.0 && nearly_equal(terms[k + 1] / terms[k], q, 1e-13, 0.0);
  }
  if (geometric) {
    t.geometric = true;
    t.ratio = q;
    if (q < 1.0) {
      t.value = terms[0] / (1.0 - q);
      t.verdict = SeriesVerdict::Converges;
    } else {
      t.value = kInf;
      t.verdict = SeriesVerdict::Diverges;
    }
    return t;
  }
  const auto ev = series_evidence([&](std::int64_t x) { return sigma(x); }, start, step, max_terms);
  t.verdict = ev.verdict;
  t.value = ev.verdict == SeriesVerdict::Converges ? ev.partial_sum : kInf;
  return t;
}

}  // namespace

std::size_t BoundaryModel::boundary_points() const {
  return static_cast<std::size_t>(
      std::count_if(ends.begin(), ends.end(), [](const End& e) { return e.finite; }));
}

double BoundaryModel::total_length() const {
  double l = 0.0;
  for (const auto& e : ends) l += e.finite ? e.length : kInf;
  return l;
}

const End* BoundaryModel::end(EndSide side) const {
  for (const auto& e : ends) {
    if (e.side == side) return &e;
  }
  return nullptr;
}

double BoundaryModel::right_tail(Label x) const {
  const End* e = end(EndSide::Right);
  if (!e || !e->finite) return kInf;
  return tail_of(sigma, x, 1, 1u << 22).value;
}

double BoundaryModel::left_tail(Label x) const {
  const End* e = end(EndSide::Left);
  if (!e || !e->finite) return kInf;
  return tail_of(sigma, x - 1, -1, 1u << 22).value;
}

BoundaryModel boundary_model(const GraphFamily& family, const LengthChoice& choice,
                             std::size_t max_terms) {
  const ChainRule* chain = family.chain();
  if (!chain) {
    throw PreconditionError("boundary model needs a chain family (ℕ₀ or ℤ); '" + family.name() +
                            "' would need an end-space model");
  }
  BoundaryModel bm;
  bm.family = &family;
  bm.choice = choice;
  bm.sigma = chain_lengths(family, choice);
  auto make_end = [&](EndSide side) {
    End e;
    e.side = side;
    const Tail t = side == EndSide::Right ? tail_of(bm.sigma, 0, 1, max_terms)
                                          : tail_of(bm.sigma, -1, -1, max_terms);
    e.length = t.value;
    e.finite = t.verdict == SeriesVerdict::Converges;
    e.geometric = t.geometric;
    e.ratio = t.ratio;
    e.evidence = t.verdict;
    return e;
  };
  if (chain->model() == VertexModel::Integers) bm.ends.push_back(make_end(EndSide::Left));
  bm.ends.push_back(make_end(EndSide::Right));
  return bm;
}

BoundaryDistance boundary_distances(const BoundaryModel& bm, std::size_t window) {
  if (bm.boundary_points() == 0) {
    throw PreconditionError("end is not a boundary point: every end has infinite length");
  }
  const ChainRule* chain = bm.family->chain();
  const bool integers = chain->model() == VertexModel::Integers;
  const auto n = static_cast<Label>(window);
  const Label lo = integers ? -n : 0;
  const Label hi = integers ? n : n - 1;

  BoundaryDistance out;
  const std::size_t count = static_cast<std::size_t>(hi - lo + 1);
  out.labels.resize(count);
  std::vector<double> right(count, kInf), left(count, kInf);
  const End* re = bm.end(EndSide::Right);
  if (re && re->finite) {
    // r_R(x) = σ(x) + r_R(x+1), started from the exact tail beyond the window.
    double acc = bm.right_tail(hi);
    right[count - 1] = acc;
    for (Label x = hi - 1; x >= lo; --x) {
      acc = bm.sigma(x) + acc;
      right[static_cast<std::size_t>(x - lo)] = acc;
    }
  }
  const End* le = bm.end(EndSide::Left);
  if (le && le->finite) {
    double acc = bm.left_tail(lo);
    left[0] = acc;
    for (Label x = lo + 1; x <= hi; ++x) {
      acc = bm.sigma(x - 1) + acc;
      left[static_cast<std::size_t>(x - lo)] = acc;
    }
  }
  out.r.resize(count);
  out.nearest.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.labels[i] = lo + static_cast<Label>(i);
    if (left[i] < right[i]) {
      out.r[i] = left[i];
      out.nearest[i] = EndSide::Left;
    } else {
      out.r[i] = right[i];
      out.nearest[i] = EndSide::Right;
    }
  }
  return out;
}

// --- Hopf–Rinow report ------------------------------------------------------

HopfRinowReport hopf_rinow_report(const GraphFamily& family, const LengthChoice& choice,
                                  std::vector<std::size_t> windows, std::vector<double> radii) {
  if (windows.empty()) throw InputError("hopf_rinow_report needs at least one window");
  std::sort(windows.begin(), windows.end());
  windows.erase(std::unique(windows.begin(), windows.end()), windows.end());

  HopfRinowReport rep;
  rep.family = family.name();
  rep.sigma = choice.to_string();
  rep.windows = windows;
  rep.locally_finite = family.rule().locally_finite();

  std::optional<BoundaryModel> bm;
  if (family.chain()) {
    bm = boundary_model(family, choice);
    rep.boundary_points = bm->boundary_points();
    const double l = bm->total_length();
    if (std::isfinite(l)) rep.total_length = l;
  }
  if (radii.empty()) {
    if (rep.total_length) {
      const double l = *rep.total_length;
      radii = {l / 8, l / 4, l / 2, l};
    } else {
      radii = {1.0, 2.0, 4.0, 8.0, 16.0};
    }
  }
  std::sort(radii.begin(), radii.end());
  for (double r : radii) rep.rows.push_back(BallRow{r, {}, false, false});

  for (std::size_t n : windows) {
    const WeightedGraph g = truncate(family, n);
    rep.window_sizes.push_back(g.size());
    const PathMetric m(make_lengths(family, g, choice));
    for (auto& row : rep.rows) row.sizes.push_back(m.ball(0, row.radius).size());
    if (bm) {
      const auto& sigma = m.lengths();
      double total = 0.0;
      for (Vertex x = 0; x < g.size(); ++x) {
        const auto len = sigma.from(x);
        const auto nbs = g.neighbors(x);
        for (std::size_t i = 0; i < nbs.size(); ++i) {
          if (nbs[i].to > x) total += len[i];
        }
      }
      rep.length_partial_sums.push_back(total);
    }
  }

  const std::size_t k = windows.size();
  for (auto& row : rep.rows) {
    row.stable = k >= 3 && row.sizes[k - 1] == row.sizes[k - 2] && row.sizes[k - 2] == row.sizes[k - 3];
    row.fills_window = true;
    for (std::size_t i = 0; i < k; ++i) row.fills_window &= row.sizes[i] == rep.window_sizes[i];
  }

  if (!rep.locally_finite) {
    rep.verdict = "not applicable";
    rep.reason = "family is not locally finite; ball table reported for reference";
    return rep;
  }
  if (rep.total_length) {
    const auto& top = rep.rows.back();
    if (nearly_equal(top.radius, *rep.total_length) && top.fills_window && k >= 2 &&
        rep.window_sizes.back() > rep.window_sizes.front()) {
      rep.verdict = "incomplete";
      rep.reason = "l(X) finite and the ball of radius l(X) fills every window";
      return rep;
    }
  }
  const bool all_stable =
      std::all_of(rep.rows.begin(), rep.rows.end(), [](const BallRow& r) { return r.stable; });
  if (all_stable && !rep.total_length) {
    rep.verdict = "complete";
    rep.reason = "every ball size is constant over the last three windows";
    return rep;
  }
  rep.verdict = "inconclusive";
  rep.reason = k < 3 ? "fewer than three windows" : "ball sizes have not stabilized";
  return rep;
}

}  // namespace iglab
