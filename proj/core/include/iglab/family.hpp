#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iglab/graph.hpp"

namespace iglab {

enum class VertexModel { Naturals, Integers, Star, Finite };

const char* to_string(VertexModel m);

/// Label of the extra apex vertex "∞" used by star families.
inline constexpr Label kApexLabel = std::numeric_limits<Label>::max();

using Parameters = std::map<std::string, double>;

/// Rule-based description of a countable weighted graph.
///
/// Windows enumerate vertices in id order and are nested: window(n - 1) is a
/// prefix of window(n). Enumerations:
///   ℕ₀ chains: window n = (0, 1, ..., n-1)
///   ℤ chains:  window n = (0, 1, -1, 2, -2, ..., n, -n)
///   stars:     window n = (0, [apex], 1, 2, ..., 2n), i.e. n rays
class FamilyRule {
 public:
  virtual ~FamilyRule() = default;

  virtual VertexModel model() const = 0;
  virtual std::vector<Label> window(std::size_t n) const = 0;
  /// Neighbors of x that lie inside window n.
  virtual std::vector<Label> neighbors_within(Label x, std::size_t n) const = 0;
  virtual double weight(Label x, Label y) const = 0;
  virtual double measure(Label x) const = 0;
  /// Total weight from x to vertices outside window n.
  virtual double outside_mass(Label x, std::size_t n) const = 0;
  virtual bool locally_finite() const { return true; }
  /// Edge length prescribed by the family (the "family" metric choice).
  virtual std::optional<double> declared_length(Label, Label) const { return std::nullopt; }
};

/// Nearest-neighbor graph on ℕ₀ or ℤ with w(x, x+1) = edge(x).
class ChainRule final : public FamilyRule {
 public:
  using Fn = std::function<double(Label)>;

  ChainRule(VertexModel model, Fn edge_weight, Fn measure, Fn declared_sigma = {});

  VertexModel model() const override { return model_; }
  std::vector<Label> window(std::size_t n) const override;
  std::vector<Label> neighbors_within(Label x, std::size_t n) const override;
  double weight(Label x, Label y) const override;
  double measure(Label x) const override { return measure_(x); }
  double outside_mass(Label x, std::size_t n) const override;
  std::optional<double> declared_length(Label x, Label y) const override;

  /// w(x, x+1)
  double edge(Label x) const { return edge_(x); }
  bool has_declared_sigma() const { return static_cast<bool>(sigma_); }
  /// Declared σ(x, x+1); requires has_declared_sigma().
  double declared_sigma(Label x) const { return sigma_(x); }
  bool in_window(Label x, std::size_t n) const;

 private:
  VertexModel model_;
  Fn edge_;
  Fn measure_;
  Fn sigma_;
};

/// Star of two-edge rays: center 0, ray k is the path 0 ~ 2k ~ 2k-1 with
/// w(0, 2k) = center(k), w(2k-1, 2k) = spoke(k). With an apex rule, an extra
/// vertex ∞ is joined by w(∞, 2k) = apex(k). Constant measure.
class StarRule final : public FamilyRule {
 public:
  using Fn = std::function<double(std::int64_t)>;

  StarRule(Fn center, Fn spoke, Fn apex, double measure);

  VertexModel model() const override { return VertexModel::Star; }
  std::vector<Label> window(std::size_t n) const override;
  std::vector<Label> neighbors_within(Label x, std::size_t n) const override;
  double weight(Label x, Label y) const override;
  double measure(Label) const override { return measure_; }
  double outside_mass(Label x, std::size_t n) const override;
  bool locally_finite() const override { return false; }

  bool has_apex() const { return static_cast<bool>(apex_); }

 private:
  Fn center_;
  Fn spoke_;
  Fn apex_;
  double measure_;
};

/// An explicit finite graph; window n is the induced subgraph on the first
/// n ids.
class FiniteRule final : public FamilyRule {
 public:
  explicit FiniteRule(WeightedGraph graph);

  VertexModel model() const override { return VertexModel::Finite; }
  std::vector<Label> window(std::size_t n) const override;
  std::vector<Label> neighbors_within(Label x, std::size_t n) const override;
  double weight(Label x, Label y) const override;
  double measure(Label x) const override;
  double outside_mass(Label x, std::size_t n) const override;

  const WeightedGraph& graph() const { return graph_; }

 private:
  WeightedGraph graph_;
};

class GraphFamily {
 public:
  GraphFamily(std::string name, Parameters params, std::shared_ptr<const FamilyRule> rule,
              std::size_t max_window = 1u << 20);

  const std::string& name() const { return name_; }
  const Parameters& params() const { return params_; }
  const FamilyRule& rule() const { return *rule_; }
  VertexModel model() const { return rule_->model(); }
  /// Largest window whose weights and measures stay inside the double range.
  std::size_t max_window() const { return max_window_; }

  /// Closed-form μ(X) when known (may be +inf).
  std::optional<double> measure_total() const { return measure_total_; }
  GraphFamily& with_measure_total(double total);

  /// The chain rule, or nullptr for non-chain families.
  const ChainRule* chain() const;

  double param(const std::string& key, double fallback) const;

 private:
  std::string name_;
  Parameters params_;
  std::shared_ptr<const FamilyRule> rule_;
  std::size_t max_window_;
  std::optional<double> measure_total_;
};

/// Graph on window n. Edges with one endpoint outside the window are dropped
/// and their weight recorded as leak on the inside endpoint; vertices with
/// positive leak form the frontier. Throws FamilyError when the rule gives a
/// negative/non-finite weight or a non-positive measure.
WeightedGraph truncate(const GraphFamily& family, std::size_t n);

/// ℤ ↔ dense id enumeration used by chain windows on ℤ.
std::size_t integer_label_index(Label x);

GraphFamily make_chain_family(std::string name, Parameters params, VertexModel model,
                              ChainRule::Fn edge_weight, ChainRule::Fn measure,
                              ChainRule::Fn declared_sigma = {},
                              std::size_t max_window = 1u << 20);

}  // namespace iglab
