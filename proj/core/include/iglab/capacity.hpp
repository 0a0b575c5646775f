#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iglab/completeness.hpp"
#include "iglab/family.hpp"
#include "iglab/metric.hpp"
#include "iglab/series.hpp"

namespace iglab {

/// Which boundary points of a chain family a tail neighborhood surrounds.
enum class EndSelection { Left, Right, All };

const char* to_string(EndSelection e);
EndSelection parse_end_selection(const std::string& text);

/// Capacity of the tail set T_N of a chain family inside the window
/// [lo, hi] (labels), e = 1 on T_N and free elsewhere.
///
/// The free part is a path, so the minimum of Q̃ + ‖·‖² is computed by
/// eliminating vertices one at a time from the free end (a ladder network of
/// series conductances w and shunts μ). O(window) time, O(1) memory.
struct ChainCapacity {
  double capacity = 0.0;
  double capacity_sq = 0.0;
  /// min Q̃(u) + ‖u‖² over the free vertices, edges into T_N included.
  double free_part = 0.0;
  /// μ(T_N ∩ window)
  double tail_mass = 0.0;
};

/// T_N = {x ≥ N} (Right), {x ≤ -N} (Left) or both (All, ℤ only), inside the
/// window of `outer` (the truncation window size).
ChainCapacity chain_tail_capacity(const GraphFamily& family, EndSelection ends, std::size_t n,
                                  std::size_t outer);

/// Vertex set of T_N inside truncate(family, outer), for cross-checks
/// against the general solver.
VertexSet chain_tail_set(const GraphFamily& family, const WeightedGraph& truncation,
                         EndSelection ends, std::size_t n);

enum class CapacityRegime { Zero, PositiveFinite, Infinite, Inconclusive };

const char* to_string(CapacityRegime r);

struct CapacitySample {
  std::size_t tail_start = 0;
  std::size_t outer_window = 0;
  double capacity = 0.0;
  bool outer_converged = false;
};

struct CapacityOptions {
  EndSelection ends = EndSelection::All;
  /// Largest outer window the doubling may reach.
  std::size_t max_outer = 1u << 24;
  double outer_rel_change = 1e-6;
  double polar_threshold = 1e-3;
  double polar_slope = -0.2;
  std::size_t polar_fit_points = 4;
  double finite_rel_change = 1e-4;
  double finite_floor = 0.01;
};

struct CapacitySequence {
  std::string family;
  std::string sigma;
  EndSelection ends = EndSelection::All;
  std::vector<CapacitySample> samples;
  bool monotone_nonincreasing = true;
  /// Σ μ near the selected ends: converges or diverges.
  SeriesVerdict tail_measure = SeriesVerdict::Inconclusive;
  double last_value = 0.0;
  /// ln Cap against ln N over the last `polar_fit_points` positive samples
  /// (a value that underflows to 0 ends the sequence).
  double loglog_slope = 0.0;
  /// |Cap_last - Cap_q| / Cap_last with q the start of the last quartile.
  double last_quartile_change = 0.0;
  CapacityRegime regime = CapacityRegime::Inconclusive;
  std::string reason;
};

/// Cap(T_N) for each tail start N, each on an outer window ≥ 4N doubled until
/// the value moves by less than `outer_rel_change`. A divergent μ near the
/// selected ends gives the Infinite regime without solving. Throws
/// PreconditionError when a selected end is not a boundary point.
CapacitySequence boundary_capacity(const GraphFamily& family, const LengthChoice& choice,
                                   std::vector<std::size_t> tails,
                                   const CapacityOptions& options = {});

/// Powers of two 4, 8, ..., up to max_outer / 8.
std::vector<std::size_t> default_tails(std::size_t max_outer);

struct AlternativeEvidence {
  CapacityRegime regime = CapacityRegime::Inconclusive;
  /// "D(Q) != D(Q^max) implied", "no conclusion" or "inconclusive".
  std::string verdict;
  /// Set when a λ-solution verdict was supplied: whether both routes agree.
  std::optional<bool> agrees_with_lambda;
};

/// Under D(Q) = D(Q^max) a capacity is 0 or ∞, so a positive finite
/// capacity refutes it. `lambda_refutes` is the λ-solution route's answer to
/// "is there a nontrivial solution in D(Q^max)?", when available.
AlternativeEvidence boundary_alternative_evidence(const CapacitySequence& caps,
                                                  std::optional<bool> lambda_refutes = {});

}  // namespace iglab
