#include "iglab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iglab/error.hpp"
#include "iglab/forms.hpp"
#include "iglab/report_json.hpp"
#include "iglab/tolerance.hpp"

namespace iglab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const ChainRule& require_chain(const GraphFamily& family) {
  const ChainRule* c = family.chain();
  if (!c) throw PreconditionError("family '" + family.name() + "' is not a chain (ℕ₀ or ℤ)");
  return *c;
}

// Partial sums of a term sequence, with an infinite last entry when the
// sequence was cut short by overflow.
SeriesEvidence evidence_of(const std::vector<double>& terms, bool overflow) {
  std::vector<double> s;
  s.reserve(terms.size() + 1);
  CompensatedSum acc;
  for (double t : terms) {
    acc.add(t);
    s.push_back(acc.value());
  }
  if (overflow) s.push_back(kInf);
  return classify_partial_sums(s);
}

SeriesEvidence combine(const SeriesEvidence& a, const SeriesEvidence& b) {
  SeriesEvidence c;
  c.partial_sum = a.partial_sum + b.partial_sum;
  c.terms = a.terms + b.terms;
  c.last_quartile_growth = std::max(a.last_quartile_growth, b.last_quartile_growth);
  c.loglog_slope = std::max(a.loglog_slope, b.loglog_slope);
  if (a.verdict == SeriesVerdict::Diverges || b.verdict == SeriesVerdict::Diverges) {
    c.verdict = SeriesVerdict::Diverges;
  } else if (a.verdict == SeriesVerdict::Converges && b.verdict == SeriesVerdict::Converges) {
    c.verdict = SeriesVerdict::Converges;
  }
  return c;
}

// One half of a λ-solution: labels 0, s, 2s, ... with the first vertex
// carrying `mu0` of measure.
struct Half {
  std::vector<double> u;
  /// λ s / w as computed, before rounding into u
  std::vector<double> steps;
  std::vector<double> bounded_terms, l2_terms, energy_terms;
  bool overflow = false;
};

Half solve_half(const ChainRule& c, double lambda, std::size_t len, Label step, double mu0) {
  Half h;
  auto edge_to_next = [&](Label x) { return step > 0 ? c.edge(x) : c.edge(x - 1); };
  h.u.push_back(1.0);
  double s = mu0;
  double mass = mu0;
  h.l2_terms.push_back(mu0);
  for (std::size_t k = 0; k + 1 < len; ++k) {
    const Label x = static_cast<Label>(k) * step;
    const double w = edge_to_next(x);
    const double inc = lambda * s / w;
    const double next = h.u.back() + inc;
    h.steps.push_back(inc);
    h.bounded_terms.push_back(mass / w);
    if (!std::isfinite(next)) {
      h.overflow = true;
      break;
    }
    h.energy_terms.push_back(w * (next - h.u.back()) * (next - h.u.back()));
    h.u.push_back(next);
    const double mu = c.measure(x + step);
    s += mu * next;
    mass += mu;
    h.l2_terms.push_back(next * next * mu);
    if (!std::isfinite(s) || !std::isfinite(h.l2_terms.back())) {
      h.overflow = true;
      break;
    }
  }
  return h;
}

}  // namespace

LambdaSolution lambda_solve(const GraphFamily& family, double lambda, std::size_t window) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("λ must be positive");
  if (window < 2) throw InputError("λ-solution needs a window of at least 2");
  const ChainRule& c = require_chain(family);
  LambdaSolution sol;
  sol.lambda = lambda;
  std::vector<std::vector<double>> increments;

  auto half_evidence = [](const Half& h, SeriesEvidence& b, SeriesEvidence& p, SeriesEvidence& l2,
                          SeriesEvidence& e) {
    b = evidence_of(h.bounded_terms, h.overflow);
    std::vector<double> sup(h.u.begin(), h.u.end());
    if (h.overflow) sup.push_back(kInf);
    p = classify_partial_sums(sup);
    l2 = evidence_of(h.l2_terms, h.overflow);
    e = evidence_of(h.energy_terms, h.overflow);
  };

  if (c.model() == VertexModel::Naturals) {
    const Half h = solve_half(c, lambda, window, 1, c.measure(0));
    for (std::size_t k = 0; k < h.u.size(); ++k) sol.labels.push_back(static_cast<Label>(k));
    sol.u = h.u;
    sol.overflow = h.overflow;
    increments.push_back(h.steps);
    half_evidence(h, sol.bounded, sol.plateau, sol.l2, sol.energy);
  } else {
    const double half_mu = c.measure(0) / 2.0;
    const Half r = solve_half(c, lambda, window + 1, 1, half_mu);
    const Half l = solve_half(c, lambda, window + 1, -1, half_mu);
    for (std::size_t k = l.u.size(); k-- > 1;) {
      sol.labels.push_back(-static_cast<Label>(k));
      sol.u.push_back(l.u[k]);
    }
    for (std::size_t k = 0; k < r.u.size(); ++k) {
      sol.labels.push_back(static_cast<Label>(k));
      sol.u.push_back(r.u[k]);
    }
    sol.overflow = r.overflow || l.overflow;
    increments.push_back(r.steps);
    increments.push_back(l.steps);
    SeriesEvidence rb, rp, rl, re, lb, lp, ll, le;
    half_evidence(r, rb, rp, rl, re);
    half_evidence(l, lb, lp, ll, le);
    sol.bounded = combine(rb, lb);
    sol.plateau = combine(rp, lp);
    sol.l2 = combine(rl, ll);
    sol.energy = combine(re, le);
  }

  // (Δ + λ)u at interior vertices, relative to (w_l + w_r + λμ)|u|: once an
  // increment drops below one ulp of u the flux differences are pure rounding.
  for (std::size_t i = 1; i + 1 < sol.u.size(); ++i) {
    const Label x = sol.labels[i];
    const double wl = c.edge(x - 1);
    const double wr = c.edge(x);
    const double a = wl * (sol.u[i] - sol.u[i - 1]);
    const double b = wr * (sol.u[i] - sol.u[i + 1]);
    const double m = lambda * c.measure(x) * sol.u[i];
    const double scale = std::max((wl + wr) * std::fabs(sol.u[i]) + m, 1e-300);
    sol.residual = std::max(sol.residual, std::fabs(a + b + m) / scale);
  }
  // Growth away from 0 is judged on the increments themselves; the rounded u
  // only has to be non-decreasing.
  for (std::size_t i = 0; i + 1 < sol.u.size(); ++i) {
    const bool outward = sol.labels[i + 1] > 0;
    const double inner = outward ? sol.u[i] : sol.u[i + 1];
    const double outer = outward ? sol.u[i + 1] : sol.u[i];
    if (!(outer >= inner) || !(inner > 0.0)) sol.increasing = false;
  }
  for (const auto& steps : increments) {
    for (double d : steps) {
      if (!(d > 0.0)) sol.increasing = false;
    }
  }
  return sol;
}

HarmonicWitness harmonic_witness_check(const GraphFamily& family, std::size_t window) {
  const ChainRule& c = require_chain(family);
  if (c.model() != VertexModel::Integers) {
    throw PreconditionError("harmonic witness needs a chain on ℤ");
  }
  if (window < 8) throw InputError("harmonic witness needs a window of at least 8");
  const auto n = static_cast<Label>(window);
  for (Label x = -n - 1; x <= n; ++x) {
    if (c.edge(x) != 1.0) {
      throw PreconditionError("harmonic witness needs w ≡ 1; w(" + std::to_string(x) + ", " +
                              std::to_string(x + 1) + ") = " + std::to_string(c.edge(x)));
    }
  }
  HarmonicWitness hw;
  hw.window = window;
  {
    std::vector<double> terms;
    for (Label k = 0; k <= n; ++k) {
      const double t = static_cast<double>(k * k) * std::sqrt(c.measure(k));
      terms.push_back(k == 0 ? t : t + static_cast<double>(k * k) * std::sqrt(c.measure(-k)));
    }
    hw.summability = evidence_of(terms, false);
    if (hw.summability.verdict != SeriesVerdict::Converges) {
      throw PreconditionError("Σ x² √μ(x) does not converge on the window (partial sum " +
                              std::to_string(hw.summability.partial_sum) + ")");
    }
  }
  const WeightedGraph g = truncate(family, window);
  std::vector<double> h(g.size());
  for (Vertex x = 0; x < g.size(); ++x) h[x] = static_cast<double>(g.label(x));
  const VertexFunction hf(g, std::move(h));
  for (Vertex x = 0; x < g.size(); ++x) {
    if (!g.is_frontier(x)) hw.laplacian_residual = std::max(hw.laplacian_residual, std::fabs(laplacian(hf, x)));
  }
  // ‖h‖² partial sums in id order, i.e. by increasing |x|.
  std::vector<double> terms;
  for (Label k = 0; k <= n; ++k) {
    const double kk = static_cast<double>(k * k);
    terms.push_back(k == 0 ? 0.0 : kk * (c.measure(k) + c.measure(-k)));
  }
  hw.norm = evidence_of(terms, false);
  hw.window_energy = energy(hf);
  hw.accepted = hw.laplacian_residual <= 1e-12 && hw.norm.verdict == SeriesVerdict::Converges &&
                hw.window_energy == 2.0 * static_cast<double>(window);
  hw.verdict = hw.accepted ? "not essentially self-adjoint" : "witness rejected";
  return hw;
}

DegBallTable deg_ball_boundedness(const GraphFamily& family, const LengthChoice& choice,
                                  std::vector<double> radii, std::vector<std::size_t> windows) {
  if (radii.empty() || windows.empty()) throw InputError("need radii and windows");
  std::sort(windows.begin(), windows.end());
  DegBallTable t;
  t.windows = windows;
  for (double r : radii) t.rows.push_back(DegBallRow{r, {}, {}, false});
  for (std::size_t n : windows) {
    const WeightedGraph g = truncate(family, n);
    const PathMetric m(make_lengths(family, g, choice));
    if (n == windows.back()) t.intrinsic = strongly_intrinsic_check(m.lengths()).pass;
    for (auto& row : t.rows) {
      const VertexSet ball = m.ball(0, row.radius);
      const VertexSet nb = combinatorial_neighborhood(g, ball);
      double worst = 0.0;
      for (Vertex x : nb) worst = std::max(worst, full_weighted_degree(g, x));
      row.max_deg.push_back(worst);
      row.ball_size.push_back(ball.size());
    }
  }
  const std::size_t k = windows.size();
  t.bounded = k >= 3;
  for (auto& row : t.rows) {
    row.stable = k >= 3 && row.ball_size[k - 1] == row.ball_size[k - 3] &&
                 nearly_equal(row.max_deg[k - 1], row.max_deg[k - 3]) &&
                 nearly_equal(row.max_deg[k - 2], row.max_deg[k - 3]);
    t.bounded &= row.stable;
  }
  return t;
}

const char* to_string(Budget b) {
  switch (b) {
    case Budget::Quick: return "quick";
    case Budget::Standard: return "standard";
    case Budget::Deep: return "deep";
  }
  return "?";
}

Budget parse_budget(const std::string& text) {
  if (text == "quick") return Budget::Quick;
  if (text == "standard") return Budget::Standard;
  if (text == "deep") return Budget::Deep;
  throw InputError("unknown budget '" + text + "' (expected quick, standard or deep)");
}

BudgetLimits limits(Budget b) {
  switch (b) {
    case Budget::Quick: return {64, std::size_t{1} << 14, 64, 40};
    case Budget::Standard: return {1024, std::size_t{1} << 25, 1024, 40};
    case Budget::Deep: return {std::size_t{1} << 16, std::size_t{1} << 27, 4096, 40};
  }
  throw InternalError("unhandled budget");
}

std::optional<std::string> consistency_violation(const ClassificationReport& r) {
  if (r.essentially_self_adjoint.value == "yes" && r.markov_unique.value == "no") {
    return "essential self-adjointness implies Markov uniqueness";
  }
  if (r.polar.value == "yes" && r.markov_unique.value == "no") {
    return "a polar boundary of finite capacity implies Markov uniqueness";
  }
  if (r.capacity_regime == to_string(CapacityRegime::PositiveFinite) &&
      r.markov_unique.value == "yes") {
    return "a boundary of positive finite capacity rules out Markov uniqueness";
  }
  return std::nullopt;
}

namespace {

std::vector<std::size_t> doubling_windows(std::size_t cap) {
  std::vector<std::size_t> out;
  for (std::size_t n = 8; n <= cap; n *= 2) out.push_back(n);
  if (out.empty()) out.push_back(std::max<std::size_t>(1, cap));
  return out;
}

Verdict verdict(std::string value, std::string source, std::string detail = {}) {
  return Verdict{std::move(value), std::move(source), std::move(detail)};
}

}  // namespace

ClassificationReport classify(const GraphFamily& family, const LengthChoice& choice,
                              const ClassifyOptions& opt) {
  const BudgetLimits lim = limits(opt.budget);
  ClassificationReport rep;
  rep.family = family.name();
  rep.params = family.params();
  rep.sigma = choice.to_string();
  rep.budget = to_string(opt.budget);
  rep.domain_note =
      "D(L) = {u in L2 cap F : Delta u in L2} holds under the ball-degree condition; not computed";

  const bool chain = family.chain() != nullptr;
  const bool integers = chain && family.model() == VertexModel::Integers;
  const auto windows = doubling_windows(std::min(lim.max_window, family.max_window()));

  // Completeness.
  rep.hopf_rinow = hopf_rinow_report(family, choice, windows);
  rep.boundary_points = rep.hopf_rinow->boundary_points;
  const std::string& hr = rep.hopf_rinow->verdict;
  if (hr == "complete") {
    rep.completeness = verdict("yes", "hopf_rinow_report", rep.hopf_rinow->reason);
  } else if (hr == "incomplete") {
    rep.completeness = verdict("no", "hopf_rinow_report", rep.hopf_rinow->reason);
  } else if (hr == "not applicable") {
    rep.completeness = verdict("not applicable", "hopf_rinow_report", rep.hopf_rinow->reason);
  } else {
    rep.completeness = verdict("inconclusive", "hopf_rinow_report", rep.hopf_rinow->reason);
  }

  // Degree on ball neighborhoods.
  std::vector<double> radii;
  if (rep.hopf_rinow->total_length) {
    const double l = *rep.hopf_rinow->total_length;
    radii = {l / 4, l / 2, l};
  } else if (chain) {
    radii = {1.0, 2.0, 4.0, 8.0};
  } else {
    radii = {0.5, 1.0, 2.0};
  }
  const DegBallTable deg = deg_ball_boundedness(family, choice, radii, windows);
  rep.deg_bounded_on_balls =
      verdict(deg.bounded ? "yes" : "no", "deg_ball_boundedness",
              deg.bounded ? "max Deg on every ball neighborhood is stable across windows"
                          : "max Deg on some ball neighborhood keeps changing with the window");

  // Capacity of the boundary.
  std::optional<CapacityRegime> regime;
  bool some_end_positive_finite = false;
  if (chain && rep.boundary_points > 0) {
    CapacityOptions co;
    co.max_outer = lim.max_tail;
    const BoundaryModel bm = boundary_model(family, choice);
    const bool all_finite = bm.boundary_points() == bm.ends.size();
    co.ends = all_finite ? EndSelection::All
                         : (bm.end(EndSide::Right)->finite ? EndSelection::Right : EndSelection::Left);
    rep.capacity = boundary_capacity(family, choice, default_tails(co.max_outer), co);
    regime = rep.capacity->regime;
    rep.capacity_regime = to_string(*regime);
    rep.capacity_last = rep.capacity->last_value;
    some_end_positive_finite = *regime == CapacityRegime::PositiveFinite;
    if (integers && all_finite && *regime == CapacityRegime::Infinite) {
      for (EndSelection side : {EndSelection::Left, EndSelection::Right}) {
        co.ends = side;
        const auto one = boundary_capacity(family, choice, default_tails(co.max_outer), co);
        if (one.regime == CapacityRegime::PositiveFinite) {
          some_end_positive_finite = true;
          rep.capacity->reason += std::string("; the ") + to_string(side) +
                                  " end alone has positive finite capacity";
        }
      }
    }
    if (*regime == CapacityRegime::Zero) {
      rep.polar = verdict("yes", "boundary_capacity", rep.capacity->reason);
    } else if (*regime == CapacityRegime::PositiveFinite || *regime == CapacityRegime::Infinite) {
      rep.polar = verdict("no", "boundary_capacity", rep.capacity->reason);
    } else {
      rep.polar = verdict("inconclusive", "boundary_capacity", rep.capacity->reason);
    }
    try {
      const std::size_t depth = opt.codim_depth ? opt.codim_depth : lim.codim_depth;
      rep.codim_estimate = minkowski_samples(family, choice, depth);
      rep.codim = rep.codim_estimate->codim;
    } catch (const PreconditionError&) {
      rep.codim.reset();
    }
  } else {
    rep.polar = verdict("not applicable", "boundary_model",
                        chain ? "no boundary point" : "no end-space model for this family");
  }

  // λ-solutions and the harmonic witness.
  if (chain) {
    rep.lambda = lambda_solve(family, opt.lambda,
                              std::min(lim.lambda_window, family.max_window()));
    if (integers) {
      try {
        rep.witness =
            harmonic_witness_check(family, std::min<std::size_t>(256, family.max_window()));
      } catch (const PreconditionError&) {
        rep.witness.reset();
      }
    }
  }

  // Essential self-adjointness.
  const bool lambda_l2 = rep.lambda && rep.lambda->in_l2();
  const bool lambda_dmax = lambda_l2 && rep.lambda->finite_energy();
  const bool ray = chain && !integers;
  if (rep.witness && rep.witness->accepted) {
    rep.essentially_self_adjoint = verdict("no", "harmonic_witness_check",
                                           "h(x) = x is harmonic, in L2 and of infinite energy");
  } else if (lambda_l2) {
    rep.essentially_self_adjoint =
        verdict("no", "lambda_solve", "a positive solution of (Delta + lambda)u = 0 lies in L2");
  } else if (rep.completeness.value == "yes" && family.rule().locally_finite()) {
    rep.essentially_self_adjoint =
        verdict("yes", "hopf_rinow_report", "theorem-backed evidence: complete and locally finite");
  } else if (deg.bounded && deg.intrinsic) {
    rep.essentially_self_adjoint = verdict(
        "yes", "deg_ball_boundedness", "theorem-backed evidence: Deg bounded on ball neighborhoods");
  } else if (ray && rep.lambda->l2.verdict == SeriesVerdict::Diverges) {
    rep.essentially_self_adjoint =
        verdict("yes", "lambda_solve",
                "evidence: the solution space on the ray is one-dimensional and its positive "
                "solution is not in L2");
  }

  // Markov uniqueness, D(Q) = D(Q^max).
  if (lambda_dmax) {
    rep.markov_unique = verdict("no", "lambda_solve",
                                "a positive solution lies in L2 with finite energy");
  } else if (some_end_positive_finite) {
    rep.markov_unique = verdict("no", "boundary_alternative_evidence",
                                "a boundary point has positive finite capacity");
  } else if (rep.essentially_self_adjoint.value == "yes") {
    rep.markov_unique = verdict("yes", "classify", "implied by essential self-adjointness");
  } else if (regime == CapacityRegime::Zero) {
    rep.markov_unique = verdict("yes", "boundary_capacity",
                                "theorem-backed evidence: polar boundary of finite capacity");
  } else if (ray && rep.lambda->l2.verdict == SeriesVerdict::Diverges) {
    rep.markov_unique = verdict("yes", "lambda_solve",
                                "evidence: the only positive solution is not in L2");
  }
  if (rep.markov_unique.value == "no" && rep.essentially_self_adjoint.value == "inconclusive") {
    rep.essentially_self_adjoint =
        verdict("no", "classify", "Markov uniqueness fails, so essential self-adjointness does too");
  }
  if (rep.capacity) {
    const auto alt = boundary_alternative_evidence(*rep.capacity,
                                                   rep.lambda ? std::optional<bool>(lambda_dmax)
                                                              : std::nullopt);
    if (alt.agrees_with_lambda && !*alt.agrees_with_lambda) {
      throw InternalError("capacity and λ-solution routes disagree on D(Q) = D(Q^max):\n" +
                          to_json(rep).dump(2));
    }
  }

  if (auto bad = consistency_violation(rep)) {
    throw InternalError("inconsistent classification (" + *bad + "):\n" + to_json(rep).dump(2));
  }
  return rep;
}

}  // namespace iglab
