#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iglab/family.hpp"
#include "iglab/metric.hpp"
#include "iglab/series.hpp"

namespace iglab {

struct Geodesic {
  std::vector<Vertex> path;
  double length = 0.0;
  /// Every prefix was checked to satisfy d(x₀, x_k) = l_σ(prefix).
  bool verified = false;
};

/// Length-minimal simple path from `o` to the combinatorial sphere of radius
/// n; ties go to the lexicographically smallest vertex sequence. Throws
/// PreconditionError when the sphere is empty.
Geodesic find_geodesic(const PathMetric& m, Vertex o, std::size_t n);

/// Sum of σ along a path; throws InputError on a non-edge.
double path_length(const EdgeLengths& sigma, const std::vector<Vertex>& path);

enum class EndSide { Left, Right };

const char* to_string(EndSide s);

/// One linear end of a chain family.
struct End {
  EndSide side = EndSide::Right;
  /// Length of the half ray: Σ σ over edges on this side of 0.
  double length = 0.0;
  bool finite = false;
  /// True when σ is geometric along the tail and tail lengths are exact.
  bool geometric = false;
  double ratio = 0.0;
  SeriesVerdict evidence = SeriesVerdict::Inconclusive;
};

/// Completion model of a chain family: one end on ℕ₀, two on ℤ. An end with
/// finite length is a point of the Cauchy boundary.
struct BoundaryModel {
  const GraphFamily* family = nullptr;
  LengthChoice choice;
  std::function<double(Label)> sigma;
  std::vector<End> ends;

  std::size_t boundary_points() const;
  /// l(X) = Σ σ(x, x+1) over the whole chain (inf if any end is infinite).
  double total_length() const;
  const End* end(EndSide side) const;

  /// Σ_{y ≥ x} σ(y, y+1): distance from x to the right end.
  double right_tail(Label x) const;
  /// Σ_{y < x} σ(y, y+1): distance from x to the left end (ℤ only).
  double left_tail(Label x) const;
};

/// Builds the model; throws PreconditionError for non-chain families.
/// `max_terms` bounds the partial sums used to decide finiteness.
BoundaryModel boundary_model(const GraphFamily& family, const LengthChoice& choice,
                             std::size_t max_terms = 1u << 22);

struct BoundaryDistance {
  std::vector<Label> labels;
  /// r(x) = distance in the completion to the nearest boundary point.
  std::vector<double> r;
  /// Side of the nearest end per vertex.
  std::vector<EndSide> nearest;
};

/// r(x) for all labels of window N. Throws PreconditionError ("end is not a
/// boundary point") when no end has finite length.
BoundaryDistance boundary_distances(const BoundaryModel& bm, std::size_t window);

struct BallRow {
  double radius = 0.0;
  /// |B_r(x₀)| per window.
  std::vector<std::size_t> sizes;
  bool stable = false;
  bool fills_window = false;
};

struct HopfRinowReport {
  std::string family;
  std::string sigma;
  std::vector<std::size_t> windows;
  std::vector<std::size_t> window_sizes;
  std::vector<BallRow> rows;
  bool locally_finite = true;
  /// l(X) partial sums at each window (chain families).
  std::vector<double> length_partial_sums;
  std::optional<double> total_length;
  std::size_t boundary_points = 0;
  /// "complete", "incomplete", "inconclusive" or "not applicable".
  std::string verdict;
  std::string reason;
};

/// Ball-size table around label 0 across truncations. Completeness evidence
/// needs every row constant over the last three windows; incompleteness
/// evidence needs l(X) < ∞ and B_{l(X)} equal to the whole window each time.
HopfRinowReport hopf_rinow_report(const GraphFamily& family, const LengthChoice& choice,
                                  std::vector<std::size_t> windows,
                                  std::vector<double> radii = {});

}  // namespace iglab
