#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iglab/capacity.hpp"
#include "iglab/codim.hpp"
#include "iglab/completeness.hpp"
#include "iglab/family.hpp"
#include "iglab/metric.hpp"
#include "iglab/series.hpp"

namespace iglab {

/// Positive solution of (Δ + λ)u = 0 on a chain window, built from u(0) = 1
/// by u(x+1) - u(x) = (λ / w(x, x+1)) Σ_{0≤y≤x} u(y) μ(y). On ℤ each half
/// is built the same way with μ(0) split evenly between the halves, which
/// makes the glued function satisfy the equation at 0 as well.
struct LambdaSolution {
  double lambda = 0.0;
  std::vector<Label> labels;
  std::vector<double> u;
  /// The recursion overflowed before the end of the window.
  bool overflow = false;
  /// Σ_x (Σ_{y≤x} μ(y)) / w(x, x+1): converges iff u is bounded.
  SeriesEvidence bounded;
  /// Direct plateau check on sup u over the window.
  SeriesEvidence plateau;
  SeriesEvidence l2;
  SeriesEvidence energy;
  /// max over interior vertices of |(Δ + λ)u| μ, relative to the local scale.
  double residual = 0.0;
  bool increasing = true;

  bool in_l2() const { return l2.verdict == SeriesVerdict::Converges; }
  bool finite_energy() const { return energy.verdict == SeriesVerdict::Converges; }
};

/// Throws InputError for λ ≤ 0 and PreconditionError for non-chain families.
LambdaSolution lambda_solve(const GraphFamily& family, double lambda, std::size_t window);

struct HarmonicWitness {
  std::size_t window = 0;
  /// max |Δh| over window interiors, h(x) = x
  double laplacian_residual = 0.0;
  SeriesEvidence norm;
  /// Q̃(h) on the window; equals 2N.
  double window_energy = 0.0;
  SeriesEvidence summability;  // Σ x² √μ(x)
  bool accepted = false;
  std::string verdict;
};

/// h(x) = x on a ℤ chain with w ≡ 1: harmonic, in L² when μ decays fast
/// enough, of infinite energy. Throws PreconditionError when the family is
/// not of this shape or Σ x² √μ(x) fails to converge.
HarmonicWitness harmonic_witness_check(const GraphFamily& family, std::size_t window);

struct DegBallRow {
  double radius = 0.0;
  /// max Deg over n(B_r(x₀)) per window
  std::vector<double> max_deg;
  std::vector<std::size_t> ball_size;
  bool stable = false;
};

struct DegBallTable {
  std::vector<std::size_t> windows;
  std::vector<DegBallRow> rows;
  bool intrinsic = false;
  bool bounded = false;
};

/// max Deg on the combinatorial neighborhood of B_r(x₀), x₀ = label 0, across
/// growing windows; bounded when every row is constant over the last three
/// windows.
DegBallTable deg_ball_boundedness(const GraphFamily& family, const LengthChoice& choice,
                                  std::vector<double> radii, std::vector<std::size_t> windows);

enum class Budget { Quick, Standard, Deep };

const char* to_string(Budget b);
Budget parse_budget(const std::string& text);

struct BudgetLimits {
  /// Largest truncation window for graph-based computations.
  std::size_t max_window;
  /// Largest outer window for chain tail capacities.
  std::size_t max_tail;
  std::size_t lambda_window;
  std::size_t codim_depth;
};

BudgetLimits limits(Budget b);

/// A verdict with the operation that produced it.
struct Verdict {
  /// "yes", "no", "inconclusive" or "not applicable"
  std::string value = "inconclusive";
  std::string source;
  std::string detail;
};

struct ClassificationReport {
  std::string family;
  Parameters params;
  std::string sigma;
  std::string budget;

  Verdict completeness;
  std::size_t boundary_points = 0;
  Verdict deg_bounded_on_balls;
  std::string capacity_regime = "not applicable";
  double capacity_last = 0.0;
  Verdict polar;
  Verdict markov_unique;
  Verdict essentially_self_adjoint;
  std::optional<double> codim;
  std::string domain_note;

  std::optional<HopfRinowReport> hopf_rinow;
  std::optional<CapacitySequence> capacity;
  std::optional<LambdaSolution> lambda;
  std::optional<HarmonicWitness> witness;
  std::optional<CodimEstimate> codim_estimate;
};

struct ClassifyOptions {
  Budget budget = Budget::Standard;
  double lambda = 1.0;
  EndSelection ends = EndSelection::All;
  std::size_t codim_depth = 0;  // 0: budget default
};

/// Runs the diagnostics that apply to the family and fills every field.
/// Throws InternalError if the verdicts violate a consistency rule.
ClassificationReport classify(const GraphFamily& family, const LengthChoice& choice,
                              const ClassifyOptions& options = {});

/// Consistency rules: ESA ⇒ Markov-unique; polar with finite capacity ⇒
/// Markov-unique; 0 < Cap < ∞ ⇒ not Markov-unique. Returns the violated
/// rule, if any.
std::optional<std::string> consistency_violation(const ClassificationReport& r);

}  // namespace iglab
