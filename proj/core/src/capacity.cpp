#include "iglab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iglab/error.hpp"

namespace iglab {

const char* to_string(EndSelection e) {
  switch (e) {
    case EndSelection::Left: return "left";
    case EndSelection::Right: return "right";
    case EndSelection::All: return "all";
  }
  return "?";
}

EndSelection parse_end_selection(const std::string& text) {
  if (text == "left") return EndSelection::Left;
  if (text == "right") return EndSelection::Right;
  if (text == "all") return EndSelection::All;
  throw InputError("unknown end selection '" + text + "' (expected left, right or all)");
}

const char* to_string(CapacityRegime r) {
  switch (r) {
    case CapacityRegime::Zero: return "zero";
    case CapacityRegime::PositiveFinite: return "positive-finite";
    case CapacityRegime::Infinite: return "infinite";
    case CapacityRegime::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Conductance of w in series with g.
double series(double w, double g) {
  if (g == 0.0 || w == 0.0) return 0.0;
  if (std::isinf(w)) return g;
  if (std::isinf(g)) return w;
  return g / (1.0 + g / w);
}

// Σ μ(start + k·step) for k < count. Once μ has underflowed to zero for a
// long run it is taken to stay zero.
double mass(const ChainRule& c, Label start, Label step, std::size_t count) {
  constexpr std::size_t kZeroRun = 64;
  CompensatedSum acc;
  std::size_t zeros = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double m = c.measure(start + static_cast<Label>(k) * step);
    acc.add(m);
    zeros = m == 0.0 ? zeros + 1 : 0;
    if (zeros >= kZeroRun) break;
  }
  return acc.value();
}

// Free end at `from`, eliminating toward `to` (exclusive), then across the
// edge into the tail. Returns the conductance seen from the tail.
double ladder(const ChainRule& c, Label from, Label to) {
  const Label step = to > from ? 1 : -1;
  double g = c.measure(from);
  for (Label x = from; x + step != to; x += step) {
    const double w = step > 0 ? c.edge(x) : c.edge(x - 1);
    g = c.measure(x + step) + series(w, g);
  }
  const Label last = to - step;
  return series(step > 0 ? c.edge(last) : c.edge(last - 1), g);
}

// Both terminals −N and N held at 1, free path in between: returns the
// combined shunt conductance g_A + g_B of the reduced two-port.
double two_terminal(const ChainRule& c, Label n) {
  double cab = c.edge(-n);  // A = −N to current node b
  double ga = 0.0;
  double gb = 0.0;
  for (Label b = -n + 1; b <= n - 1; ++b) {
    const double shunt = gb + c.measure(b);
    const double w = c.edge(b);
    if (std::isinf(w) && std::isinf(cab)) throw NumericalError("two infinite conductances in series");
    if (std::isinf(w)) {
      gb = shunt;
      continue;
    }
    if (std::isinf(cab)) {
      cab = w;
      ga += shunt;
      gb = 0.0;
      continue;
    }
    const double d = cab + shunt + w;
    const double next_c = cab * (w / d);
    ga += cab * (shunt / d);
    gb = w * (shunt / d);
    cab = next_c;
  }
  return ga + gb;
}

const ChainRule& require_chain(const GraphFamily& family) {
  const ChainRule* c = family.chain();
  if (!c) throw PreconditionError("tail capacities need a chain family; '" + family.name() + "' is not one");
  return *c;
}

}  // namespace

ChainCapacity chain_tail_capacity(const GraphFamily& family, EndSelection ends, std::size_t n,
                                  std::size_t outer) {
  const ChainRule& c = require_chain(family);
  const bool integers = c.model() == VertexModel::Integers;
  if (!integers && ends == EndSelection::Left) throw PreconditionError("ℕ₀ chains have no left end");
  if (!integers) ends = EndSelection::Right;
  if (n < 1 || outer <= n) throw InputError("tail capacity needs 1 <= N < outer window");
  const auto sn = static_cast<Label>(n);
  const auto so = static_cast<Label>(outer);

  ChainCapacity out;
  if (!integers) {
    out.free_part = ladder(c, 0, sn);
    out.tail_mass = mass(c, sn, 1, outer - n);
  } else if (ends == EndSelection::Right) {
    out.free_part = ladder(c, -so, sn);
    out.tail_mass = mass(c, sn, 1, outer - n + 1);
  } else if (ends == EndSelection::Left) {
    out.free_part = ladder(c, so, -sn);
    out.tail_mass = mass(c, -sn, -1, outer - n + 1);
  } else {
    out.free_part = two_terminal(c, sn);
    out.tail_mass = mass(c, sn, 1, outer - n + 1) + mass(c, -sn, -1, outer - n + 1);
  }
  out.capacity_sq = out.free_part + out.tail_mass;
  out.capacity = std::sqrt(out.capacity_sq);
  if (!std::isfinite(out.capacity)) {
    throw NumericalError("tail capacity is not finite at N = " + std::to_string(n));
  }
  return out;
}

VertexSet chain_tail_set(const GraphFamily& family, const WeightedGraph& g, EndSelection ends,
                         std::size_t n) {
  const ChainRule& c = require_chain(family);
  const bool integers = c.model() == VertexModel::Integers;
  const auto sn = static_cast<Label>(n);
  std::vector<Vertex> ids;
  for (Vertex x = 0; x < g.size(); ++x) {
    const Label l = g.label(x);
    const bool right = l >= sn && ends != EndSelection::Left;
    const bool left = integers && l <= -sn && ends != EndSelection::Right;
    if (right || left) ids.push_back(x);
  }
  return VertexSet(std::move(ids));
}

std::vector<std::size_t> default_tails(std::size_t max_outer) {
  std::vector<std::size_t> out;
  for (std::size_t n = 4; n <= max_outer / 8; n *= 2) out.push_back(n);
  return out;
}

CapacitySequence boundary_capacity(const GraphFamily& family, const LengthChoice& choice,
                                   std::vector<std::size_t> tails, const CapacityOptions& opt) {
  const ChainRule& c = require_chain(family);
  const bool integers = c.model() == VertexModel::Integers;
  CapacitySequence seq;
  seq.family = family.name();
  seq.sigma = choice.to_string();
  seq.ends = integers ? opt.ends : EndSelection::Right;

  const BoundaryModel bm = boundary_model(family, choice);
  auto check_end = [&](EndSide side) {
    const End* e = bm.end(side);
    if (!e || !e->finite) {
      throw PreconditionError(std::string("the ") + to_string(side) + " end of '" + family.name() +
                              "' is not a boundary point (infinite length)");
    }
  };
  if (seq.ends != EndSelection::Left) check_end(EndSide::Right);
  if (seq.ends != EndSelection::Right) check_end(EndSide::Left);

  // μ near the selected ends.
  const bool whole_graph = !integers || seq.ends == EndSelection::All;
  if (whole_graph && family.measure_total()) {
    seq.tail_measure =
        std::isfinite(*family.measure_total()) ? SeriesVerdict::Converges : SeriesVerdict::Diverges;
  } else {
    seq.tail_measure = SeriesVerdict::Converges;
    auto side = [&](Label start, Label step) {
      return series_evidence([&](std::int64_t x) { return c.measure(x); }, start, step, opt.max_outer)
          .verdict;
    };
    for (auto v : {seq.ends != EndSelection::Left ? side(0, 1) : SeriesVerdict::Converges,
                   seq.ends != EndSelection::Right ? side(-1, -1) : SeriesVerdict::Converges}) {
      if (v == SeriesVerdict::Diverges) {
        seq.tail_measure = v;
      } else if (v == SeriesVerdict::Inconclusive && seq.tail_measure != SeriesVerdict::Diverges) {
        seq.tail_measure = v;
      }
    }
  }
  if (seq.tail_measure == SeriesVerdict::Diverges) {
    seq.regime = CapacityRegime::Infinite;
    seq.last_value = kInf;
    seq.reason = "boundary neighborhoods have infinite measure, so every tail capacity is infinite";
    return seq;
  }

  std::sort(tails.begin(), tails.end());
  tails.erase(std::unique(tails.begin(), tails.end()), tails.end());
  if (tails.empty()) throw InputError("no tail starts given");
  for (std::size_t n : tails) {
    if (n < 1) throw InputError("tail starts must be positive");
    CapacitySample s;
    s.tail_start = n;
    s.outer_window = 4 * n;
    if (s.outer_window > opt.max_outer) {
      throw PreconditionError("tail start " + std::to_string(n) + " needs an outer window beyond " +
                              std::to_string(opt.max_outer));
    }
    s.capacity = chain_tail_capacity(family, seq.ends, n, s.outer_window).capacity;
    while (2 * s.outer_window <= opt.max_outer) {
      const double next = chain_tail_capacity(family, seq.ends, n, 2 * s.outer_window).capacity;
      s.outer_window *= 2;
      const bool settled = std::fabs(next - s.capacity) <= opt.outer_rel_change * std::fabs(next);
      s.capacity = next;
      if (settled) {
        s.outer_converged = true;
        break;
      }
    }
    seq.samples.push_back(s);
    if (s.capacity == 0.0) break;  // underflow; deeper tails add nothing
  }

  const auto& sm = seq.samples;
  for (std::size_t i = 1; i < sm.size(); ++i) {
    if (sm[i].capacity > sm[i - 1].capacity * (1.0 + 1e-12)) seq.monotone_nonincreasing = false;
  }
  seq.last_value = sm.back().capacity;
  const std::size_t q = sm.size() - sm.size() / 4 - 1;
  seq.last_quartile_change =
      seq.last_value > 0.0 ? std::fabs(seq.last_value - sm[q].capacity) / seq.last_value : 0.0;
  std::vector<const CapacitySample*> positive;
  for (const auto& s : sm) {
    if (s.capacity > 0.0) positive.push_back(&s);
  }
  if (positive.size() >= 2) {
    const std::size_t k = std::min(opt.polar_fit_points, positive.size());
    std::vector<double> lx, ly;
    for (std::size_t i = positive.size() - k; i < positive.size(); ++i) {
      lx.push_back(std::log(static_cast<double>(positive[i]->tail_start)));
      ly.push_back(std::log(positive[i]->capacity));
    }
    seq.loglog_slope = fit_line(lx, ly).slope;
  }

  if (seq.last_value < opt.polar_threshold && seq.loglog_slope < opt.polar_slope &&
      positive.size() >= opt.polar_fit_points) {
    seq.regime = CapacityRegime::Zero;
    seq.reason = "tail capacities fall below the polar threshold with decaying log-log trend";
  } else if (sm.size() >= 4 && seq.last_quartile_change < opt.finite_rel_change &&
             seq.last_value > opt.finite_floor) {
    seq.regime = CapacityRegime::PositiveFinite;
    seq.reason = "tail capacities settle at a positive value";
  } else {
    seq.regime = CapacityRegime::Inconclusive;
    seq.reason = "neither the polar nor the positive-limit criterion is met";
  }
  if (seq.tail_measure == SeriesVerdict::Inconclusive) {
    seq.reason += " (finiteness of the boundary measure is inconclusive)";
  }
  return seq;
}

AlternativeEvidence boundary_alternative_evidence(const CapacitySequence& caps,
                                                  std::optional<bool> lambda_refutes) {
  AlternativeEvidence ev;
  ev.regime = caps.regime;
  switch (caps.regime) {
    case CapacityRegime::PositiveFinite: ev.verdict = "D(Q) != D(Q^max) implied"; break;
    case CapacityRegime::Zero:
    case CapacityRegime::Infinite: ev.verdict = "no conclusion"; break;
    case CapacityRegime::Inconclusive: ev.verdict = "inconclusive"; break;
  }
  if (lambda_refutes) {
    // Only a positive finite capacity can contradict the λ route.
    ev.agrees_with_lambda = caps.regime != CapacityRegime::PositiveFinite || *lambda_refutes;
  }
  return ev;
}

}  // namespace iglab
