#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace iglab {

enum class SeriesVerdict { Converges, Diverges, Inconclusive };

const char* to_string(SeriesVerdict v);

/// Evidence for convergence of a series of non-negative terms, judged from
/// its partial sums over a finite window.
struct SeriesEvidence {
  SeriesVerdict verdict = SeriesVerdict::Inconclusive;
  double partial_sum = 0.0;
  /// (S_end - S_q) / S_end with q the start of the last quartile.
  double last_quartile_growth = 0.0;
  /// Least-squares slope of ln S_k against ln k over the last quartile.
  double loglog_slope = 0.0;
  /// Same for the terms S_k - S_{k-1} (0 unless all of them are positive).
  double term_slope = 0.0;
  std::size_t terms = 0;
};

/// Plateau below this relative growth over the last quartile counts as
/// convergence.
inline constexpr double kPlateauGrowth = 1e-6;
/// Log–log slope of the partial sums above this counts as divergence; the
/// band between plateau and this slope is reported as inconclusive.
inline constexpr double kDivergenceSlope = 0.1;
/// Terms decaying faster than k^-(1 + 0.1) over the last quartile count as
/// convergence even without a plateau.
inline constexpr double kConvergentTermSlope = -1.1;

SeriesEvidence classify_terms(std::span<const double> terms);
SeriesEvidence classify_partial_sums(std::span<const double> partial_sums);
/// Same judgement for partial sums S(counts[i]) sampled at increasing term
/// counts.
SeriesEvidence classify_sampled(std::span<const double> counts,
                                std::span<const double> partial_sums);

struct TailSum {
  double value = 0.0;
  bool converged = false;
  /// Geometric estimate of the neglected remainder (0 if terms vanished,
  /// +inf if the ratio test gave no bound).
  double remainder_bound = 0.0;
  std::size_t terms_used = 0;
};

/// Σ_{k ≥ 0} term(start + k·step), stopping once a block of terms no longer
/// changes the sum in double precision or after `max_terms` terms.
TailSum tail_sum(const std::function<double(std::int64_t)>& term, std::int64_t start,
                 std::int64_t step, std::size_t max_terms);

/// Convergence evidence for Σ_k term(start + k·step): a tail_sum that settles
/// counts as convergence; otherwise partial sums sampled evenly over
/// `max_terms` terms are classified.
SeriesEvidence series_evidence(const std::function<double(std::int64_t)>& term,
                               std::int64_t start, std::int64_t step, std::size_t max_terms);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y ≈ slope·x + intercept. Needs ≥ 2 points.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Compensated (Neumaier) summation.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

}  // namespace iglab
