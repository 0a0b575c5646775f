#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "iglab/completeness.hpp"
#include "iglab/family.hpp"
#include "iglab/metric.hpp"

namespace iglab {

struct CodimSample {
  Label x = 0;
  /// r = r(x), the distance from x to the boundary
  double r = 0.0;
  /// μ(B_r(∂)) = μ{y : r(y) ≤ r}
  double mu_ball = 0.0;
  /// ln μ / ln r; NaN when r ≥ 1
  double ratio = 0.0;
};

struct CodimEstimate {
  std::vector<CodimSample> samples;
  /// Least-squares slope of ln μ against ln r over all samples with r < 1.
  double slope = 0.0;
  /// Same fit over the deepest quartile.
  double deep_slope = 0.0;
  /// max of the pointwise ratios over the deepest quartile.
  double limsup_proxy = 0.0;
  std::size_t quartile_size = 0;
  /// Reported codimension (the limsup proxy).
  double codim = 0.0;
};

/// Samples x = 1..depth on the side of a finite end (the right one when both
/// are finite). Throws PreconditionError when the family has no boundary
/// point or when μ near the boundary is not summable.
CodimEstimate minkowski_samples(const GraphFamily& family, const LengthChoice& choice,
                                std::size_t depth);

/// μ(B_r(∂)) for a chain family: μ of all vertices within distance r of a
/// boundary point.
double boundary_ball_measure(const BoundaryModel& bm, double r);

struct PolarityStep {
  std::size_t n = 0;
  double r = 0.0;         // r_n
  double qnorm = 0.0;     // ‖η_{r_n/2}‖_Q̃
  double energy = 0.0;
  double norm_sq = 0.0;
  double mu_ball = 0.0;   // μ(B_{r_n}(∂))
  double bound = 0.0;     // (μ(B_{r_n}) + 4μ(B_{r_n})/r_n²)^½
  bool within_bound = false;
};

struct PolarityTest {
  std::vector<PolarityStep> steps;
  bool monotone_decreasing = true;
  bool all_within_bound = true;
  /// Intrinsic certificate of the chosen lengths on a reference truncation.
  bool intrinsic = false;
  double min_slack = 0.0;
};

/// η_R(x) = ((2R - d̄(x, ∂)) / R)₊ ∧ 1 with R = r_n / 2 and r_n = r(n) for
/// n = 1..depth, evaluated exactly on the infinite chain (the part where
/// η = 1 contributes only its measure).
PolarityTest codim_polarity_test(const GraphFamily& family, const LengthChoice& choice,
                                 std::size_t depth);

}  // namespace iglab
