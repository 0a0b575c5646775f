#include "iglab/family.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "iglab/error.hpp"
#include "iglab/series.hpp"

namespace iglab {

const char* to_string(VertexModel m) {
  switch (m) {
    case VertexModel::Naturals: return "naturals";
    case VertexModel::Integers: return "integers";
    case VertexModel::Star: return "star";
    case VertexModel::Finite: return "finite";
  }
  return "?";
}

std::size_t integer_label_index(Label x) {
  if (x == 0) return 0;
  return x > 0 ? static_cast<std::size_t>(2 * x - 1) : static_cast<std::size_t>(-2 * x);
}

// --- ChainRule --------------------------------------------------------------

ChainRule::ChainRule(VertexModel model, Fn edge_weight, Fn measure, Fn declared_sigma)
    : model_(model),
      edge_(std::move(edge_weight)),
      measure_(std::move(measure)),
      sigma_(std::move(declared_sigma)) {
  if (model_ != VertexModel::Naturals && model_ != VertexModel::Integers) {
    throw InputError("chain families live on ℕ₀ or ℤ");
  }
  if (!edge_ || !measure_) throw InputError("chain family needs weight and measure rules");
}

bool ChainRule::in_window(Label x, std::size_t n) const {
  const auto sn = static_cast<Label>(n);
  if (model_ == VertexModel::Naturals) return x >= 0 && x < sn;
  return x >= -sn && x <= sn;
}

std::vector<Label> ChainRule::window(std::size_t n) const {
  std::vector<Label> out;
  if (model_ == VertexModel::Naturals) {
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<Label>(i));
  } else {
    out.reserve(2 * n + 1);
    out.push_back(0);
    for (std::size_t i = 1; i <= n; ++i) {
      out.push_back(static_cast<Label>(i));
      out.push_back(-static_cast<Label>(i));
    }
  }
  return out;
}

std::vector<Label> ChainRule::neighbors_within(Label x, std::size_t n) const {
  std::vector<Label> out;
  if (in_window(x - 1, n)) out.push_back(x - 1);
  if (in_window(x + 1, n)) out.push_back(x + 1);
  return out;
}

double ChainRule::weight(Label x, Label y) const {
  if (y == x + 1) return edge_(x);
  if (y == x - 1) return edge_(y);
  return 0.0;
}

double ChainRule::outside_mass(Label x, std::size_t n) const {
  double m = 0.0;
  const bool left_exists = model_ == VertexModel::Integers || x - 1 >= 0;
  if (left_exists && !in_window(x - 1, n)) m += edge_(x - 1);
  if (!in_window(x + 1, n)) m += edge_(x);
  return m;
}

std::optional<double> ChainRule::declared_length(Label x, Label y) const {
  if (!sigma_) return std::nullopt;
  if (y == x + 1) return sigma_(x);
  if (y == x - 1) return sigma_(y);
  return std::nullopt;
}

// --- StarRule ---------------------------------------------------------------

StarRule::StarRule(Fn center, Fn spoke, Fn apex, double measure)
    : center_(std::move(center)), spoke_(std::move(spoke)), apex_(std::move(apex)),
      measure_(measure) {
  if (!center_ || !spoke_) throw InputError("star family needs center and spoke rules");
}

std::vector<Label> StarRule::window(std::size_t n) const {
  std::vector<Label> out{0};
  if (apex_) out.push_back(kApexLabel);
  for (std::size_t v = 1; v <= 2 * n; ++v) out.push_back(static_cast<Label>(v));
  return out;
}

std::vector<Label> StarRule::neighbors_within(Label x, std::size_t n) const {
  const auto rays = static_cast<Label>(n);
  std::vector<Label> out;
  if (x == 0 || x == kApexLabel) {
    if (x == kApexLabel && !apex_) return out;
    for (Label k = 1; k <= rays; ++k) out.push_back(2 * k);
    return out;
  }
  if (x < 0 || x > 2 * rays) return out;
  if (x % 2 == 0) {
    out.push_back(0);
    out.push_back(x - 1);
    if (apex_) out.push_back(kApexLabel);
  } else {
    out.push_back(x + 1);
  }
  return out;
}

double StarRule::weight(Label x, Label y) const {
  if (x > y) std::swap(x, y);
  // now x < y; the apex label is the largest
  if (y == kApexLabel) {
    if (!apex_ || x <= 0 || x % 2 != 0) return 0.0;
    return apex_(x / 2);
  }
  if (x == 0) return (y > 0 && y % 2 == 0) ? center_(y / 2) : 0.0;
  if (x > 0 && x % 2 == 1 && y == x + 1) return spoke_(y / 2);
  return 0.0;
}

double StarRule::outside_mass(Label x, std::size_t n) const {
  if (x == 0 || (x == kApexLabel && apex_)) {
    const Fn& f = x == 0 ? center_ : apex_;
    auto t = tail_sum([&](std::int64_t k) { return f(k); }, static_cast<std::int64_t>(n) + 1, 1,
                      4096);
    return t.value;
  }
  return 0.0;
}

// --- FiniteRule -------------------------------------------------------------

FiniteRule::FiniteRule(WeightedGraph graph) : graph_(std::move(graph)) {}

std::vector<Label> FiniteRule::window(std::size_t n) const {
  std::vector<Label> out;
  for (std::size_t i = 0; i < std::min(n, graph_.size()); ++i) out.push_back(static_cast<Label>(i));
  return out;
}

std::vector<Label> FiniteRule::neighbors_within(Label x, std::size_t n) const {
  std::vector<Label> out;
  for (const auto& nb : graph_.neighbors(static_cast<Vertex>(x))) {
    if (nb.to < n) out.push_back(nb.to);
  }
  return out;
}

double FiniteRule::weight(Label x, Label y) const {
  return graph_.weight(static_cast<Vertex>(x), static_cast<Vertex>(y));
}

double FiniteRule::measure(Label x) const { return graph_.measure(static_cast<Vertex>(x)); }

double FiniteRule::outside_mass(Label x, std::size_t n) const {
  double m = graph_.leak(static_cast<Vertex>(x));
  for (const auto& nb : graph_.neighbors(static_cast<Vertex>(x))) {
    if (nb.to >= n) m += nb.weight;
  }
  return m;
}

// --- GraphFamily ------------------------------------------------------------

GraphFamily::GraphFamily(std::string name, Parameters params,
                         std::shared_ptr<const FamilyRule> rule, std::size_t max_window)
    : name_(std::move(name)), params_(std::move(params)), rule_(std::move(rule)),
      max_window_(max_window) {
  if (!rule_) throw InputError("family '" + name_ + "' has no rule");
}

GraphFamily& GraphFamily::with_measure_total(double total) {
  measure_total_ = total;
  return *this;
}

const ChainRule* GraphFamily::chain() const {
  return dynamic_cast<const ChainRule*>(rule_.get());
}

double GraphFamily::param(const std::string& key, double fallback) const {
  auto it = params_.find(key);
  return it == params_.end() ? fallback : it->second;
}

WeightedGraph truncate(const GraphFamily& family, std::size_t n) {
  if (n < 1) throw InputError("window size must be at least 1");
  if (n > family.max_window()) {
    throw PreconditionError("window " + std::to_string(n) + " exceeds the numeric range of family '" +
                            family.name() + "' (max " + std::to_string(family.max_window()) + ")");
  }
  const FamilyRule& rule = family.rule();
  const auto labels = rule.window(n);
  std::unordered_map<Label, Vertex> index;
  index.reserve(labels.size() * 2);
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], static_cast<Vertex>(i));

  auto where = [&](Label x) { return family.name() + " at label " + std::to_string(x); };

  GraphBuilder b(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Label x = labels[i];
    const auto v = static_cast<Vertex>(i);
    b.set_label(v, x);
    const double mu = rule.measure(x);
    if (!(mu > 0.0) || !std::isfinite(mu)) {
      throw FamilyError("measure rule is not strictly positive and finite: " + where(x));
    }
    b.set_measure(v, mu);
    for (Label y : rule.neighbors_within(x, n)) {
      auto it = index.find(y);
      if (it == index.end() || it->second <= v) continue;
      const double w = rule.weight(x, y);
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw FamilyError("weight rule is negative or non-finite: " + where(x) + "-" +
                          std::to_string(y));
      }
      if (rule.weight(y, x) != w) {
        throw FamilyError("weight rule is not symmetric: " + where(x));
      }
      b.add_edge(v, it->second, w);
    }
    const double leak = rule.outside_mass(x, n);
    if (!(leak >= 0.0) || !std::isfinite(leak)) {
      throw FamilyError("weight rule is negative or non-finite beyond the window: " + where(x));
    }
    if (leak > 0.0) b.add_leak(v, leak);
  }
  return b.build();
}

GraphFamily make_chain_family(std::string name, Parameters params, VertexModel model,
                              ChainRule::Fn edge_weight, ChainRule::Fn measure,
                              ChainRule::Fn declared_sigma, std::size_t max_window) {
  auto rule = std::make_shared<ChainRule>(model, std::move(edge_weight), std::move(measure),
                                          std::move(declared_sigma));
  return GraphFamily(std::move(name), std::move(params), std::move(rule), max_window);
}

}  // namespace iglab
