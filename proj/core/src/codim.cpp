#include "iglab/codim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iglab/error.hpp"
#include "iglab/series.hpp"

namespace iglab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr Label kNoLabel = std::numeric_limits<Label>::min();
constexpr Label kSearchLimit = Label{1} << 40;
constexpr std::size_t kMassTerms = 1u << 22;

double distance_to_boundary(const BoundaryModel& bm, Label y) {
  return std::min(bm.right_tail(y), bm.left_tail(y));
}

// Σ μ(start + k·step) over k ≥ 0; throws when the sum does not settle.
double tail_mass(const ChainRule& c, Label start, Label step) {
  const auto t = tail_sum([&](std::int64_t x) { return c.measure(x); }, start, step, kMassTerms);
  if (!t.converged) {
    throw PreconditionError("boundary neighborhoods have infinite measure (partial sum " +
                            std::to_string(t.value) + " after " + std::to_string(t.terms_used) +
                            " terms)");
  }
  return t.value;
}

double total_mass(const BoundaryModel& bm) {
  const ChainRule& c = *bm.family->chain();
  double m = tail_mass(c, 0, 1);
  if (c.model() == VertexModel::Integers) m += tail_mass(c, -1, -1);
  return m;
}

// Smallest label a with right_tail(a) ≤ r, or kNoLabel when every label of
// the chain qualifies.
Label first_right(const BoundaryModel& bm, double r) {
  const bool integers = bm.family->chain()->model() == VertexModel::Integers;
  Label lo, hi;  // right_tail(lo) > r ≥ right_tail(hi)
  if (bm.right_tail(0) <= r) {
    if (!integers) return 0;
    hi = 0;
    Label step = 1;
    while (bm.right_tail(-step) <= r) {
      if (step > kSearchLimit) return kNoLabel;
      step *= 2;
    }
    lo = -step;
  } else {
    lo = 0;
    Label step = 1;
    while (bm.right_tail(step) > r) {
      if (step > kSearchLimit) throw NumericalError("boundary radius search did not terminate");
      step *= 2;
    }
    hi = step;
  }
  while (hi - lo > 1) {
    const Label mid = lo + (hi - lo) / 2;
    (bm.right_tail(mid) <= r ? hi : lo) = mid;
  }
  return hi;
}

// Largest label b with left_tail(b) ≤ r, or kNoLabel when every label
// qualifies. ℤ only.
Label last_left(const BoundaryModel& bm, double r) {
  Label lo, hi;  // left_tail(lo) ≤ r < left_tail(hi)
  if (bm.left_tail(0) <= r) {
    lo = 0;
    Label step = 1;
    while (bm.left_tail(step) <= r) {
      if (step > kSearchLimit) return kNoLabel;
      step *= 2;
    }
    hi = step;
  } else {
    hi = 0;
    Label step = 1;
    while (bm.left_tail(-step) > r) {
      if (step > kSearchLimit) throw NumericalError("boundary radius search did not terminate");
      step *= 2;
    }
    lo = -step;
  }
  while (hi - lo > 1) {
    const Label mid = lo + (hi - lo) / 2;
    (bm.left_tail(mid) <= r ? lo : hi) = mid;
  }
  return lo;
}

bool end_finite(const BoundaryModel& bm, EndSide side) {
  const End* e = bm.end(side);
  return e && e->finite;
}

}  // namespace

double boundary_ball_measure(const BoundaryModel& bm, double r) {
  const ChainRule& c = *bm.family->chain();
  const bool right = end_finite(bm, EndSide::Right);
  const bool left = end_finite(bm, EndSide::Left);
  Label a = kNoLabel, b = kNoLabel;
  bool everything = false;
  if (right) {
    a = first_right(bm, r);
    everything |= a == kNoLabel;
  }
  if (left) {
    b = last_left(bm, r);
    everything |= b == kNoLabel;
  }
  if (!everything && right && left && a <= b + 1) everything = true;
  if (everything) return total_mass(bm);
  double m = 0.0;
  if (right) m += tail_mass(c, a, 1);
  if (left) m += tail_mass(c, b, -1);
  return m;
}

CodimEstimate minkowski_samples(const GraphFamily& family, const LengthChoice& choice,
                                std::size_t depth) {
  if (depth < 2) throw InputError("codimension needs depth >= 2");
  const BoundaryModel bm = boundary_model(family, choice);
  if (bm.boundary_points() == 0) {
    throw PreconditionError("family '" + family.name() + "' has no boundary point");
  }
  const Label sign = end_finite(bm, EndSide::Right) ? 1 : -1;

  CodimEstimate est;
  std::vector<double> lr, lm;
  for (std::size_t k = 1; k <= depth; ++k) {
    CodimSample s;
    s.x = sign * static_cast<Label>(k);
    s.r = distance_to_boundary(bm, s.x);
    s.mu_ball = boundary_ball_measure(bm, s.r);
    s.ratio = (s.r < 1.0 && s.r > 0.0 && s.mu_ball > 0.0) ? std::log(s.mu_ball) / std::log(s.r)
                                                            : kNaN;
    if (std::isfinite(s.ratio)) {
      lr.push_back(std::log(s.r));
      lm.push_back(std::log(s.mu_ball));
    }
    est.samples.push_back(s);
  }
  if (lr.size() < 2) {
    throw PreconditionError("fewer than two samples with r < 1; increase the depth");
  }
  est.slope = fit_line(lr, lm).slope;
  est.quartile_size = std::max<std::size_t>(2, lr.size() / 4);
  const std::size_t from = lr.size() - est.quartile_size;
  est.deep_slope = fit_line(std::span<const double>(lr).subspan(from),
                            std::span<const double>(lm).subspan(from))
                       .slope;
  est.limsup_proxy = -std::numeric_limits<double>::infinity();
  for (std::size_t i = from; i < lr.size(); ++i) est.limsup_proxy = std::max(est.limsup_proxy, lm[i] / lr[i]);
  est.codim = est.limsup_proxy;
  return est;
}

PolarityTest codim_polarity_test(const GraphFamily& family, const LengthChoice& choice,
                                 std::size_t depth) {
  const BoundaryModel bm = boundary_model(family, choice);
  if (bm.boundary_points() == 0) {
    throw PreconditionError("family '" + family.name() + "' has no boundary point");
  }
  const ChainRule& c = *family.chain();
  const bool right = end_finite(bm, EndSide::Right);
  const bool left = end_finite(bm, EndSide::Left);
  const Label sign = right ? 1 : -1;

  PolarityTest test;
  {
    const std::size_t n = std::min<std::size_t>(64, family.max_window());
    const WeightedGraph g = truncate(family, n);
    const auto cert = strongly_intrinsic_check(make_lengths(family, g, choice));
    test.intrinsic = cert.pass;
    test.min_slack = cert.min_slack;
  }

  for (std::size_t n = 1; n <= depth; ++n) {
    PolarityStep st;
    st.n = n;
    st.r = distance_to_boundary(bm, sign * static_cast<Label>(n));
    const double big_r = st.r / 2.0;
    auto eta = [&](Label y) {
      return std::clamp((st.r - distance_to_boundary(bm, y)) / big_r, 0.0, 1.0);
    };
    CompensatedSum energy, norm;
    auto walk = [&](Label start, Label step) {
      // The edge entering the support from the η = 0 side.
      double prev = eta(start - step);
      for (Label y = start;; y += step) {
        const double e = eta(y);
        const double w = step > 0 ? c.edge(y - 1) : c.edge(y);
        energy.add(w * (e - prev) * (e - prev));
        if (e >= 1.0) {
          norm.add(tail_mass(c, y, step));
          return;
        }
        norm.add(e * e * c.measure(y));
        prev = e;
      }
    };
    Label a = kNoLabel, b = kNoLabel;
    if (right) a = first_right(bm, st.r);
    if (left) b = last_left(bm, st.r);
    if ((right && a == kNoLabel) || (left && b == kNoLabel) || (right && left && a <= b + 1)) {
      throw PreconditionError("radius r_" + std::to_string(n) + " reaches across the whole chain");
    }
    if (right) walk(a, 1);
    if (left) walk(b, -1);
    st.energy = energy.value();
    st.norm_sq = norm.value();
    st.qnorm = std::sqrt(st.energy + st.norm_sq);
    st.mu_ball = boundary_ball_measure(bm, st.r);
    st.bound = std::sqrt(st.mu_ball + 4.0 * st.mu_ball / (st.r * st.r));
    st.within_bound = st.qnorm <= st.bound + 1e-10;
    test.all_within_bound &= st.within_bound;
    if (!test.steps.empty() && !(st.qnorm < test.steps.back().qnorm)) test.monotone_decreasing = false;
    test.steps.push_back(st);
  }
  return test;
}

}  // namespace iglab
