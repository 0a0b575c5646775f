#include <algorithm>
#include <cmath>
#include <string>

#include "iglab/error.hpp"
#include "iglab/graph_io.hpp"
#include "iglab/metric.hpp"

namespace iglab {

const char* to_string(LengthKind k) {
  switch (k) {
    case LengthKind::Sigma0: return "sigma0";
    case LengthKind::Sigma1: return "sigma1";
    case LengthKind::NaturalScaled: return "natural_scaled";
    case LengthKind::Custom: return "custom";
  }
  return "?";
}

EdgeLengths EdgeLengths::build(const WeightedGraph& g, LengthKind kind,
                               const std::function<double(Vertex, Vertex)>& length) {
  EdgeLengths out(g, kind);
  out.half_edges_.assign(2 * g.edge_count(), 0.0);
  for (Vertex x = 0; x < g.size(); ++x) {
    const auto nbs = g.neighbors(x);
    const std::size_t base = g.neighbor_offset(x);
    for (std::size_t i = 0; i < nbs.size(); ++i) {
      const Vertex y = nbs[i].to;
      if (y < x) continue;
      const double s = length(x, y);
      if (!(s > 0.0) || !std::isfinite(s)) {
        throw InputError("edge length must be positive and finite on edge " + std::to_string(x) +
                         "-" + std::to_string(y));
      }
      out.half_edges_[base + i] = s;
      const auto back = g.neighbors(y);
      auto it = std::lower_bound(back.begin(), back.end(), x,
                                 [](const Neighbor& nb, Vertex v) { return nb.to < v; });
      out.half_edges_[g.neighbor_offset(y) + static_cast<std::size_t>(it - back.begin())] = s;
    }
  }
  return out;
}

double EdgeLengths::operator()(Vertex x, Vertex y) const {
  graph_->check_vertex(x);
  graph_->check_vertex(y);
  const auto nbs = graph_->neighbors(x);
  auto it = std::lower_bound(nbs.begin(), nbs.end(), y,
                             [](const Neighbor& nb, Vertex v) { return nb.to < v; });
  if (it == nbs.end() || it->to != y) {
    throw InputError("no edge " + std::to_string(x) + "-" + std::to_string(y));
  }
  return half_edges_[graph_->neighbor_offset(x) + static_cast<std::size_t>(it - nbs.begin())];
}

std::span<const double> EdgeLengths::from(Vertex x) const {
  graph_->check_vertex(x);
  return {half_edges_.data() + graph_->neighbor_offset(x), graph_->neighbors(x).size()};
}

EdgeLengths sigma0(const WeightedGraph& g) {
  std::vector<double> inv_sqrt_deg(g.size());
  for (Vertex x = 0; x < g.size(); ++x) {
    const double deg = full_weighted_degree(g, x);
    inv_sqrt_deg[x] = deg > 0.0 ? 1.0 / std::sqrt(deg) : 1.0;
  }
  return EdgeLengths::build(g, LengthKind::Sigma0, [&](Vertex x, Vertex y) {
    return std::min({inv_sqrt_deg[x], inv_sqrt_deg[y], 1.0});
  });
}

EdgeLengths sigma1(const WeightedGraph& g) {
  return EdgeLengths::build(g, LengthKind::Sigma1, [&](Vertex x, Vertex y) {
    const double ax = g.measure(x) / static_cast<double>(combinatorial_degree(g, x));
    const double ay = g.measure(y) / static_cast<double>(combinatorial_degree(g, y));
    return std::sqrt(std::min(ax, ay) / g.weight(x, y));
  });
}

EdgeLengths natural_scaled(const WeightedGraph& g, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InputError("natural metric scale K must be positive");
  Vertex worst = 0;
  double worst_deg = -1.0;
  for (Vertex x = 0; x < g.size(); ++x) {
    const double deg = full_weighted_degree(g, x);
    if (deg > worst_deg) {
      worst_deg = deg;
      worst = x;
    }
  }
  if (worst_deg > k) {
    throw PreconditionError("natural metric needs Deg <= " + format_double(k) + "; vertex " +
                            std::to_string(worst) + " has Deg = " + format_double(worst_deg));
  }
  const double s = 1.0 / std::sqrt(k);
  return EdgeLengths::build(g, LengthKind::NaturalScaled, [s](Vertex, Vertex) { return s; });
}

LengthChoice LengthChoice::parse(const std::string& text) {
  LengthChoice c;
  if (text == "sigma0") {
    c.kind = Kind::Sigma0;
  } else if (text == "sigma1") {
    c.kind = Kind::Sigma1;
  } else if (text == "family") {
    c.kind = Kind::Family;
  } else if (text == "natural") {
    c.kind = Kind::Natural;
  } else if (text.rfind("natural:", 0) == 0) {
    c.kind = Kind::Natural;
    try {
      std::size_t used = 0;
      c.k = std::stod(text.substr(8), &used);
      if (used != text.size() - 8) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw InputError("bad natural metric scale in '" + text + "'");
    }
    if (!(c.k > 0.0)) throw InputError("natural metric scale must be positive");
  } else {
    throw InputError("unknown edge-length choice '" + text +
                     "' (expected sigma0, sigma1, natural:K or family)");
  }
  return c;
}

std::string LengthChoice::to_string() const {
  switch (kind) {
    case Kind::Sigma0: return "sigma0";
    case Kind::Sigma1: return "sigma1";
    case Kind::Natural: return "natural:" + format_double(k);
    case Kind::Family: return "family";
  }
  return "?";
}

EdgeLengths make_lengths(const GraphFamily& family, const WeightedGraph& g,
                         const LengthChoice& choice) {
  switch (choice.kind) {
    case LengthChoice::Kind::Sigma0: return sigma0(g);
    case LengthChoice::Kind::Sigma1: return sigma1(g);
    case LengthChoice::Kind::Natural: return natural_scaled(g, choice.k);
    case LengthChoice::Kind::Family: break;
  }
  const FamilyRule& rule = family.rule();
  return EdgeLengths::build(g, LengthKind::Custom, [&](Vertex x, Vertex y) {
    auto s = rule.declared_length(g.label(x), g.label(y));
    if (!s) {
      throw PreconditionError("family '" + family.name() + "' declares no edge lengths");
    }
    return *s;
  });
}

std::function<double(Label)> chain_lengths(const GraphFamily& family, const LengthChoice& choice) {
  const ChainRule* chain = family.chain();
  if (!chain) throw PreconditionError("family '" + family.name() + "' is not a chain");
  const bool naturals = chain->model() == VertexModel::Naturals;
  auto has_left = [naturals](Label x) { return !naturals || x >= 1; };

  switch (choice.kind) {
    case LengthChoice::Kind::Sigma0:
      return [chain, has_left](Label x) {
        auto inv_sqrt_deg = [&](Label v) {
          double mass = chain->edge(v);
          if (has_left(v)) mass += chain->edge(v - 1);
          const double deg = mass / chain->measure(v);
          return deg > 0.0 ? 1.0 / std::sqrt(deg) : 1.0;
        };
        return std::min({inv_sqrt_deg(x), inv_sqrt_deg(x + 1), 1.0});
      };
    case LengthChoice::Kind::Sigma1:
      return [chain, has_left](Label x) {
        auto ratio = [&](Label v) { return chain->measure(v) / (has_left(v) ? 2.0 : 1.0); };
        return std::sqrt(std::min(ratio(x), ratio(x + 1)) / chain->edge(x));
      };
    case LengthChoice::Kind::Natural: {
      const double s = 1.0 / std::sqrt(choice.k);
      return [s](Label) { return s; };
    }
    case LengthChoice::Kind::Family:
      if (!chain->has_declared_sigma()) {
        throw PreconditionError("family '" + family.name() + "' declares no edge lengths");
      }
      return [chain](Label x) { return chain->declared_sigma(x); };
  }
  throw InternalError("unhandled length choice");
}

}  // namespace iglab
