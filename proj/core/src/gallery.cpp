#include "iglab/gallery.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "iglab/codim.hpp"
#include "iglab/error.hpp"
#include "iglab/forms.hpp"
#include "iglab/graph_io.hpp"
#include "iglab/tolerance.hpp"

namespace iglab {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kHuge = 1e300;
constexpr std::size_t kWindowCap = std::size_t{1} << 20;

bool representable(double v) { return std::isfinite(v) && v >= kTiny && v <= kHuge; }

// Largest window whose weights and measures stay clear of underflow and
// overflow, so truncations are exact in double precision.
std::size_t chain_window(VertexModel model, const ChainRule::Fn& w, const ChainRule::Fn& mu) {
  std::size_t n = 1;
  auto ok = [&](Label x) {
    if (!representable(mu(x)) || !representable(w(x))) return false;
    if (model == VertexModel::Integers) {
      return representable(mu(-x)) && representable(w(-x - 1));
    }
    return true;
  };
  if (!ok(0)) throw FamilyError("family rule is not representable at label 0");
  while (n < kWindowCap && ok(static_cast<Label>(n))) ++n;
  return n;
}

std::size_t star_window(const StarRule::Fn& center, const StarRule::Fn& spoke,
                        const StarRule::Fn& apex) {
  std::size_t n = 1;
  auto ok = [&](std::int64_t k) {
    return representable(center(k)) && representable(spoke(k)) && (!apex || representable(apex(k)));
  };
  while (n < kWindowCap && ok(static_cast<std::int64_t>(n + 1))) ++n;
  return n;
}

GraphFamily chain(const std::string& name, const Parameters& p, VertexModel model,
                  ChainRule::Fn w, ChainRule::Fn mu, ChainRule::Fn sigma = {}) {
  const std::size_t window = chain_window(model, w, mu);
  return make_chain_family(name, p, model, std::move(w), std::move(mu), std::move(sigma), window);
}

GraphFamily star(const std::string& name, const Parameters& p, StarRule::Fn center,
                 StarRule::Fn spoke, StarRule::Fn apex) {
  const std::size_t window = star_window(center, spoke, apex);
  auto rule = std::make_shared<StarRule>(std::move(center), std::move(spoke), std::move(apex), 1.0);
  return GraphFamily(name, p, std::move(rule), window);
}

double p2(double e) { return std::exp2(e); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check(RunRecord& rec, std::string claim, std::string expected, std::string actual, bool pass) {
  rec.golden.push_back(GoldenCheck{std::move(claim), std::move(expected), std::move(actual), pass});
}

void expect(RunRecord& rec, const std::string& claim, const Verdict& v, const std::string& want) {
  check(rec, claim, want, v.value + " (" + v.source + ")", v.value == want);
}

void expect_near(RunRecord& rec, const std::string& claim, double got, double want, double tol) {
  check(rec, claim, fmt(want) + " ± " + fmt(tol), fmt(got), std::fabs(got - want) <= tol);
}

const ClassificationReport& need_report(const GoldenContext& ctx) {
  if (!ctx.report) throw InternalError("golden check needs a classification report");
  return *ctx.report;
}

// ---- golden checks -----------------------------------------------------

// Q̃(e_n) for e_n(x) = (|x|/n - 1)₊ ∧ 1 on the ℤ chain.
std::vector<double> cutoff_energies(const GraphFamily& fam, std::size_t count) {
  std::vector<double> out;
  for (std::size_t n = 1; n <= count; ++n) {
    const WeightedGraph g = truncate(fam, 2 * n + 1);
    std::vector<double> e(g.size());
    const double dn = static_cast<double>(n);
    for (Vertex x = 0; x < g.size(); ++x) {
      const double ax = std::fabs(static_cast<double>(g.label(x)));
      e[x] = std::min(std::max(ax / dn - 1.0, 0.0), 1.0);
    }
    out.push_back(energy(VertexFunction(g, std::move(e))));
  }
  return out;
}

void golden_ex51(const GoldenContext& ctx, RunRecord& rec) {
  const auto& r = need_report(ctx);
  check(rec, "Cauchy boundary has two points", "2", std::to_string(r.boundary_points),
        r.boundary_points == 2);
  expect(rec, "boundary is polar", r.polar, "yes");
  expect(rec, "Markov unique", r.markov_unique, "yes");
  expect(rec, "not essentially self-adjoint", r.essentially_self_adjoint, "no");
  const bool witnessed = r.witness && r.witness->accepted;
  check(rec, "h(x) = x witness accepted", "accepted",
        r.witness ? r.witness->verdict : std::string("not run"), witnessed);
  const auto e = cutoff_energies(ctx.family, 100);
  double worst = 0.0;
  for (std::size_t n = 1; n <= e.size(); ++n) {
    const double want = 2.0 / static_cast<double>(n);
    worst = std::max(worst, std::fabs(e[n - 1] - want) / want);
  }
  check(rec, "cut-off energies Q(e_n) = 2/n, n = 1..100", "rel. error <= 1e-12", fmt(worst),
        worst <= 1e-12);
  rec.evidence["cutoff_energies"] = e;
}

void golden_ex52(const GoldenContext& ctx, RunRecord& rec) {
  const auto& r = need_report(ctx);
  check(rec, "Cauchy boundary has one point", "1", std::to_string(r.boundary_points),
        r.boundary_points == 1);
  check(rec, "capacity is infinite", "infinite", r.capacity_regime, r.capacity_regime == "infinite");
  expect(rec, "essentially self-adjoint", r.essentially_self_adjoint, "yes");
}

void golden_ex53a(const GoldenContext& ctx, RunRecord& rec) {
  const auto& r = need_report(ctx);
  check(rec, "Cauchy boundary has one point", "1", std::to_string(r.boundary_points),
        r.boundary_points == 1);
  check(rec, "0 < Cap < inf", "positive-finite", r.capacity_regime,
        r.capacity_regime == "positive-finite");
  expect(rec, "D(Q) != D(Qmax)", r.markov_unique, "no");
  if (r.lambda) {
    const auto& l = *r.lambda;
    check(rec, "lambda-solution bounded", "converges", to_string(l.bounded.verdict),
          l.bounded.verdict == SeriesVerdict::Converges);
    check(rec, "lambda-solution plateaus", "converges", to_string(l.plateau.verdict),
          l.plateau.verdict == SeriesVerdict::Converges);
    check(rec, "lambda-solution in L2 with finite energy", "yes",
          l.in_l2() && l.finite_energy() ? "yes" : "no", l.in_l2() && l.finite_energy());
  }
}

void golden_ex53(const GoldenContext& ctx, RunRecord& rec) {
  const auto& r = need_report(ctx);
  check(rec, "Cauchy boundary has two points", "2", std::to_string(r.boundary_points),
        r.boundary_points == 2);
  check(rec, "capacity is infinite", "infinite", r.capacity_regime, r.capacity_regime == "infinite");
  CapacityOptions co;
  co.ends = EndSelection::Right;
  co.max_outer = limits(ctx.budget).max_tail;
  const auto right = boundary_capacity(ctx.family, ctx.sigma, default_tails(co.max_outer), co);
  check(rec, "right end has 0 < Cap < inf", "positive-finite", to_string(right.regime),
        right.regime == CapacityRegime::PositiveFinite);
  rec.evidence["capacity_right"] = to_json(right);
  expect(rec, "D(Q) != D(Qmax)", r.markov_unique, "no");
  expect(rec, "not essentially self-adjoint", r.essentially_self_adjoint, "no");
}

void expect_codim(const GoldenContext& ctx, RunRecord& rec, double want, bool deep_slope) {
  const auto& r = need_report(ctx);
  if (!r.codim_estimate) {
    check(rec, "codimension", fmt(want), "not computed", false);
    return;
  }
  const auto& c = *r.codim_estimate;
  const double got = deep_slope ? c.deep_slope : c.codim;
  expect_near(rec,
              std::string("codimension (") + (deep_slope ? "deep slope" : "limsup proxy") +
                  ", depth " + std::to_string(c.samples.size()) + ")",
              got, want, 0.05);
}

void golden_ex54(const GoldenContext& ctx, RunRecord& rec) {
  const auto& r = need_report(ctx);
  expect(rec, "boundary is polar", r.polar, "yes");
  expect_codim(ctx, rec, 2.0, false);
}

void golden_ex55(const GoldenContext& ctx, RunRecord& rec) {
  const auto& r = need_report(ctx);
  expect(rec, "boundary is not polar", r.polar, "no");
  check(rec, "0 < Cap < inf", "positive-finite", r.capacity_regime,
        r.capacity_regime == "positive-finite");
  expect_codim(ctx, rec, 2.0, true);
}

void golden_ex56(const GoldenContext& ctx, RunRecord& rec) {
  const auto& r = need_report(ctx);
  const double alpha = ctx.family.param("alpha", 1.0);
  const int kase = static_cast<int>(ctx.family.param("case", 1.0));
  expect(rec, kase == 1 ? "w = 1: boundary is polar" : "w = 2^x: boundary is not polar", r.polar,
         kase == 1 ? "yes" : "no");
  expect_codim(ctx, rec, 2.0 - 1.0 / alpha, false);
}

void golden_codim3(const GoldenContext& ctx, RunRecord& rec) {
  const auto& r = need_report(ctx);
  expect(rec, "boundary is polar", r.polar, "yes");
  if (r.codim) check(rec, "codimension exceeds 2", "> 2", fmt(*r.codim), *r.codim > 2.0);
  const PolarityTest pt = codim_polarity_test(ctx.family, ctx.sigma, 30);
  rec.evidence["polarity_test"] = to_json(pt);
  check(rec, "cut-off norms decrease", "monotone", pt.monotone_decreasing ? "monotone" : "not monotone",
        pt.monotone_decreasing);
  check(rec, "cut-off norms respect the bound", "all within",
        pt.all_within_bound ? "all within" : "violated", pt.all_within_bound);
  const double last = pt.steps.empty() ? std::numeric_limits<double>::infinity() : pt.steps.back().qnorm;
  check(rec, "cut-off norm below 1e-3 by depth 30", "< 0.001", fmt(last), last < 1e-3);
}

void golden_ray(const GoldenContext& ctx, RunRecord& rec) {
  const auto& r = need_report(ctx);
  expect(rec, "metrically complete", r.completeness, "yes");
  expect(rec, "essentially self-adjoint", r.essentially_self_adjoint, "yes");
  expect(rec, "Markov unique", r.markov_unique, "yes");
}

std::size_t vertex_of(const WeightedGraph& g, Label label) {
  for (Vertex x = 0; x < g.size(); ++x) {
    if (g.label(x) == label) return x;
  }
  throw InternalError("label " + std::to_string(label) + " not in truncation");
}

std::vector<std::size_t> star_windows(const GraphFamily& fam, Budget b) {
  std::vector<std::size_t> out;
  const std::size_t cap = std::min(fam.max_window(), limits(b).max_window);
  for (std::size_t n = 1; n <= cap; n *= 2) out.push_back(n);
  return out;
}

void golden_a51(const GoldenContext& ctx, RunRecord& rec) {
  double worst = 0.0;
  nlohmann::json rows = nlohmann::json::array();
  std::vector<std::size_t> ball;
  for (std::size_t n : star_windows(ctx.family, ctx.budget)) {
    const WeightedGraph g = truncate(ctx.family, n);
    const PathMetric m(make_lengths(ctx.family, g, ctx.sigma));
    const auto& d = *m.distances_from(0);
    for (std::size_t k = 1; k <= n; ++k) {
      worst = std::max(worst, std::fabs(d[vertex_of(g, 2 * static_cast<Label>(k))] - 1.0));
    }
    ball.push_back(m.ball(0, 1.0).size());
    rows.push_back({{"rays", n}, {"ball_1_size", ball.back()}});
  }
  check(rec, "d(0, 2n) = 1 for every ray", "|d - 1| <= 1e-12", fmt(worst), worst <= 1e-12);
  bool grows = ball.size() >= 2;
  for (std::size_t i = 1; i < ball.size(); ++i) grows &= ball[i] > ball[i - 1];
  check(rec, "B_1(0) grows with the number of rays", "strictly increasing",
        grows ? "strictly increasing" : "stalls", grows);
  rec.evidence["star"] = rows;
}

void golden_a53(const GoldenContext& ctx, RunRecord& rec) {
  nlohmann::json rows = nlohmann::json::array();
  bool bounded = true, decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  const std::size_t cap = std::min<std::size_t>(64, ctx.family.max_window());
  for (std::size_t n = 1; n <= cap; ++n) {
    const WeightedGraph g = truncate(ctx.family, n);
    const PathMetric m(make_lengths(ctx.family, g, ctx.sigma));
    const double d = m.distance(0, vertex_of(g, kApexLabel));
    const double bound = 2.0 * p2(-static_cast<double>(n));
    bounded &= nearly_le(d, bound);
    decreasing &= d < prev;
    prev = d;
    rows.push_back({{"rays", n}, {"d_0_apex", number_to_json(d)}, {"bound", number_to_json(bound)}});
  }
  check(rec, "d(0, apex) <= 2 * 2^-n", "holds for n = 1.." + std::to_string(cap),
        bounded ? "holds" : "violated", bounded);
  check(rec, "d(0, apex) decreases toward 0", "strictly decreasing",
        decreasing ? "strictly decreasing" : "not monotone", decreasing);
  rec.evidence["star"] = rows;
}

void golden_a54(const GoldenContext& ctx, RunRecord& rec) {
  nlohmann::json rows = nlohmann::json::array();
  bool bounded = true;
  std::vector<std::size_t> ball;
  for (std::size_t n : star_windows(ctx.family, ctx.budget)) {
    const WeightedGraph g = truncate(ctx.family, n);
    const PathMetric m(make_lengths(ctx.family, g, ctx.sigma));
    const auto& d = *m.distances_from(0);
    for (std::size_t k = 1; k <= n; ++k) {
      const double dk = d[vertex_of(g, 2 * static_cast<Label>(k))];
      bounded &= nearly_le(dk, p2(-static_cast<double>(k) / 2.0));
    }
    ball.push_back(m.ball(0, 0.5).size());
    rows.push_back({{"rays", n}, {"ball_half_size", ball.back()}});
  }
  check(rec, "d(0, 2n) <= 2^(-n/2), so 2n -> 0", "holds", bounded ? "holds" : "violated", bounded);
  bool grows = ball.size() >= 2;
  for (std::size_t i = 1; i < ball.size(); ++i) grows &= ball[i] > ball[i - 1];
  check(rec, "B_1/2(0) keeps gaining vertices", "strictly increasing",
        grows ? "strictly increasing" : "stalls", grows);
  rec.evidence["star"] = rows;
}

LengthChoice sigma0() { return LengthChoice{LengthChoice::Kind::Sigma0, 0.0}; }
LengthChoice family_sigma() { return LengthChoice{LengthChoice::Kind::Family, 0.0}; }

std::vector<FamilySpec> build_registry() {
  std::vector<FamilySpec> r;

  r.push_back(FamilySpec{
      "ex5.1",
      "w = 1 on Z with fast decaying measure: polar boundary, not essentially self-adjoint",
      {{"decay", 2.0, "mu(x) = decay^-|x| (1 + x^2)^-power"}, {"power", 4.0, "see decay"}},
      sigma0(),
      true,
      {},
      {{"boundary", "two points"},
       {"polar", "yes"},
       {"markov_unique", "yes"},
       {"essentially_self_adjoint", "no (harmonic witness h(x) = x)"},
       {"cut-off energy", "Q(e_n) = 2/n"}},
      0,
      [](const Parameters& p) {
        const double b = p.at("decay"), k = p.at("power");
        if (!(b > 1.0) || !(k >= 0.0)) throw InputError("ex5.1 needs decay > 1 and power >= 0");
        return chain("ex5.1", p, VertexModel::Integers, [](Label) { return 1.0; },
                     [b, k](Label x) {
                       const double dx = static_cast<double>(x);
                       return std::pow(b, -std::fabs(dx)) * std::pow(1.0 + dx * dx, -k);
                     });
      },
      golden_ex51});

  r.push_back(FamilySpec{
      "ex5.2",
      "ray with w = 4^x and mu = 1: infinite capacity, essentially self-adjoint",
      {},
      sigma0(),
      true,
      {},
      {{"boundary", "one point"}, {"capacity", "infinite"}, {"essentially_self_adjoint", "yes"}},
      0,
      [](const Parameters& p) {
        auto f = chain("ex5.2", p, VertexModel::Naturals,
                       [](Label x) { return p2(2.0 * static_cast<double>(x)); },
                       [](Label) { return 1.0; });
        f.with_measure_total(std::numeric_limits<double>::infinity());
        return f;
      },
      golden_ex52});

  r.push_back(FamilySpec{
      "ex5.3a",
      "ray with w = 2^x and mu = 2^-x: 0 < Cap < inf, D(Q) != D(Qmax)",
      {},
      sigma0(),
      true,
      {},
      {{"boundary", "one point"}, {"capacity", "positive and finite"}, {"markov_unique", "no"}},
      0,
      [](const Parameters& p) {
        auto f = chain("ex5.3a", p, VertexModel::Naturals,
                       [](Label x) { return p2(static_cast<double>(x)); },
                       [](Label x) { return p2(-static_cast<double>(x)); });
        f.with_measure_total(2.0);
        return f;
      },
      golden_ex53a});

  r.push_back(FamilySpec{
      "ex5.3",
      "Z glued from the ex5.2 ray (left) and the ex5.3a ray (right)",
      {},
      sigma0(),
      true,
      {},
      {{"boundary", "two points"},
       {"capacity", "infinite, right end positive and finite"},
       {"markov_unique", "no"},
       {"essentially_self_adjoint", "no"}},
      0,
      [](const Parameters& p) {
        auto f = chain(
            "ex5.3", p, VertexModel::Integers,
            [](Label x) {
              const double dx = static_cast<double>(x);
              return x >= 0 ? p2(dx) : p2(2.0 * (-dx - 1.0));
            },
            [](Label x) { return x >= 0 ? p2(-static_cast<double>(x)) : 1.0; });
        f.with_measure_total(std::numeric_limits<double>::infinity());
        return f;
      },
      golden_ex53});

  r.push_back(FamilySpec{
      "ex5.4",
      "ray with w = 1/8 and mu = 4^-x: polar boundary of codimension 2",
      {},
      sigma0(),
      true,
      {},
      {{"polar", "yes"}, {"codimension", "2"}},
      100,
      [](const Parameters& p) {
        auto f = chain("ex5.4", p, VertexModel::Naturals, [](Label) { return 0.125; },
                       [](Label x) { return p2(-2.0 * static_cast<double>(x)); });
        f.with_measure_total(4.0 / 3.0);
        return f;
      },
      golden_ex54});

  r.push_back(FamilySpec{
      "ex5.5",
      "ray with w = (x+1)^2, mu = (x+1)^2 / 4^x, sigma = 2^-(x+2): non-polar, codimension 2",
      {},
      family_sigma(),
      true,
      {},
      {{"polar", "no"}, {"capacity", "positive and finite"}, {"codimension", "2"}},
      400,
      [](const Parameters& p) {
        return chain(
            "ex5.5", p, VertexModel::Naturals,
            [](Label x) { return static_cast<double>((x + 1) * (x + 1)); },
            [](Label x) {
              const double dx = static_cast<double>(x);
              return (dx + 1.0) * (dx + 1.0) * p2(-2.0 * dx);
            },
            [](Label x) { return p2(-static_cast<double>(x + 2)); });
      },
      golden_ex55});

  r.push_back(FamilySpec{
      "ex5.6",
      "ray with sigma = 2^-a(x+1), mu = 2^-(2a-1)x; case 1: w = 1 (polar), case 2: w = 2^x",
      {{"alpha", 1.0, "a > 1/2"}, {"case", 1.0, "1: w = 1, 2: w = 2^x"}},
      family_sigma(),
      true,
      {},
      {{"codimension", "2 - 1/alpha"}, {"polar", "case 1 yes, case 2 no"}},
      40,
      [](const Parameters& p) {
        const double a = p.at("alpha");
        const double kase = p.at("case");
        if (!(a > 0.5)) throw InputError("ex5.6 needs alpha > 1/2");
        if (kase != 1.0 && kase != 2.0) throw InputError("ex5.6 case must be 1 or 2");
        ChainRule::Fn w = kase == 1.0 ? ChainRule::Fn([](Label) { return 1.0; })
                                      : ChainRule::Fn([](Label x) {
                                          return p2(static_cast<double>(x));
                                        });
        return chain(
            "ex5.6", p, VertexModel::Naturals, std::move(w),
            [a](Label x) { return p2(-(2.0 * a - 1.0) * static_cast<double>(x)); },
            [a](Label x) { return p2(-a * static_cast<double>(x + 1)); });
      },
      golden_ex56});

  r.push_back(FamilySpec{
      "codim3",
      "ray with sigma = 2^-x, mu = 8^-x, w = min(mu)/(2 sigma^2): codimension 3",
      {},
      family_sigma(),
      true,
      {},
      {{"polar", "yes"}, {"codimension", "3"}, {"cut-off norms", "decrease below 1e-3"}},
      40,
      [](const Parameters& p) {
        return chain(
            "codim3", p, VertexModel::Naturals,
            [](Label x) { return p2(-static_cast<double>(x) - 4.0); },
            [](Label x) { return p2(-3.0 * static_cast<double>(x)); },
            [](Label x) { return p2(-static_cast<double>(x)); });
      },
      golden_codim3});

  r.push_back(FamilySpec{
      "ray",
      "ray with w = 1, mu = 2 and unit edge lengths: complete",
      {},
      LengthChoice{LengthChoice::Kind::Natural, 1.0},
      true,
      {},
      {{"complete", "yes"}, {"essentially_self_adjoint", "yes"}},
      0,
      [](const Parameters& p) {
        return chain("ray", p, VertexModel::Naturals, [](Label) { return 1.0; },
                     [](Label) { return 2.0; });
      },
      golden_ray});

  r.push_back(FamilySpec{
      "a5.1",
      "star of two-edge rays, w(0,2n) = 2^-n, w(2n-1,2n) = 1 - 2^-n: d(0,2n) = 1",
      {},
      sigma0(),
      true,
      {},
      {{"d(0,2n)", "1"}, {"B_1(0)", "infinite"}},
      0,
      [](const Parameters& p) {
        return star(
            "a5.1", p, [](std::int64_t n) { return p2(-static_cast<double>(n)); },
            [](std::int64_t n) { return 1.0 - p2(-static_cast<double>(n)); }, {});
      },
      golden_a51});

  r.push_back(FamilySpec{"a5.2", "star of rays of shrinking length on N0^2", {}, sigma0(), false,
                         "unsupported: requires end-space model", {}, 0, {}, {}});

  r.push_back(FamilySpec{
      "a5.3",
      "two hubs joined by ever shorter paths: d(0, apex) -> 0",
      {},
      sigma0(),
      true,
      {},
      {{"d(0, apex)", "<= 2 * 2^-n, -> 0"}},
      0,
      [](const Parameters& p) {
        auto hub = [](std::int64_t n) { return p2(-static_cast<double>(n)); };
        return star(
            "a5.3", p, hub, [](std::int64_t n) { return p2(2.0 * static_cast<double>(n)); }, hub);
      },
      golden_a53});

  r.push_back(FamilySpec{
      "a5.4",
      "star with w(0,2n) = 2^-n, w(2n-1,2n) = 2^n: balls with infinitely many vertices",
      {},
      sigma0(),
      true,
      {},
      {{"d(0,2n)", "-> 0"}, {"B_r(0)", "infinitely many vertices"}},
      0,
      [](const Parameters& p) {
        return star(
            "a5.4", p, [](std::int64_t n) { return p2(-static_cast<double>(n)); },
            [](std::int64_t n) { return p2(static_cast<double>(n)); }, {});
      },
      golden_a54});

  r.push_back(FamilySpec{"a5.5", "line with ever shorter parallel segments on N0^2", {}, sigma0(),
                         false, "unsupported: requires end-space model", {}, 0, {}, {}});
  return r;
}

std::string exception_kind(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return "input error";
  if (dynamic_cast<const FamilyError*>(&e)) return "family error";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition error";
  if (dynamic_cast<const NumericalError*>(&e)) return "numerical error";
  if (dynamic_cast<const InternalError*>(&e)) return "internal error";
  return "error";
}

std::string case_id(const RunRecord& r) {
  std::string id = r.family;
  for (const auto& [k, v] : r.params) id += " " + k + "=" + format_double(v);
  return id;
}

}  // namespace

Parameters FamilySpec::resolve(const Parameters& overrides) const {
  Parameters p;
  for (const auto& s : params) p[s.key] = s.default_value;
  for (const auto& [k, v] : overrides) {
    if (!p.count(k)) {
      std::string known;
      for (const auto& s : params) known += (known.empty() ? "" : ", ") + s.key;
      throw InputError("family '" + name + "' has no parameter '" + k + "'" +
                       (known.empty() ? std::string(" (it takes none)") : " (known: " + known + ")"));
    }
    p[k] = v;
  }
  return p;
}

GraphFamily FamilySpec::make(const Parameters& overrides) const {
  if (!supported) throw FamilyError(name + ": " + unsupported_reason);
  return build(resolve(overrides));
}

const std::vector<FamilySpec>& registry() {
  static const std::vector<FamilySpec> r = build_registry();
  return r;
}

std::vector<std::string> registry_names() {
  std::vector<std::string> out;
  for (const auto& s : registry()) out.push_back(s.name);
  return out;
}

const FamilySpec& lookup(const std::string& name) {
  for (const auto& s : registry()) {
    if (s.name == name) {
      if (!s.supported) throw FamilyError(name + ": " + s.unsupported_reason);
      return s;
    }
  }
  std::string names;
  for (const auto& n : registry_names()) names += (names.empty() ? "" : ", ") + n;
  throw FamilyError("unknown family '" + name + "'; valid names: " + names);
}

GraphFamily make_family(const std::string& name, const Parameters& params) {
  return lookup(name).make(params);
}

std::vector<GalleryCase> default_gallery() {
  std::vector<GalleryCase> out;
  for (const auto& s : registry()) {
    if (!s.supported) continue;
    if (s.name == "ex5.6") {
      for (double kase : {1.0, 2.0}) {
        for (double a : {0.75, 1.0, 2.0}) out.push_back({s.name, {{"alpha", a}, {"case", kase}}});
      }
    } else {
      out.push_back({s.name, {}});
    }
  }
  return out;
}

RunRecord run_case(const GalleryCase& c, Budget budget) {
  RunRecord rec;
  rec.tool_version = tool_version();
  rec.family = c.name;
  rec.budget = to_string(budget);
  rec.started_at = utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const FamilySpec& spec = lookup(c.name);
    rec.params = spec.resolve(c.params);
    rec.sigma = spec.sigma.to_string();
    const GraphFamily fam = spec.build(rec.params);
    ClassifyOptions opt;
    opt.budget = budget;
    opt.codim_depth = spec.codim_depth;
    const ClassificationReport report = classify(fam, spec.sigma, opt);
    if (report.hopf_rinow) rec.windows = report.hopf_rinow->windows;
    rec.verdicts = {{"completeness", report.completeness},
                    {"deg_bounded_on_balls", report.deg_bounded_on_balls},
                    {"polar", report.polar},
                    {"markov_unique", report.markov_unique},
                    {"essentially_self_adjoint", report.essentially_self_adjoint}};
    rec.numbers["boundary_points"] = static_cast<double>(report.boundary_points);
    rec.numbers["capacity_last"] = report.capacity_last;
    if (report.codim) rec.numbers["codim"] = *report.codim;
    if (report.hopf_rinow && report.hopf_rinow->total_length) {
      rec.numbers["total_length"] = *report.hopf_rinow->total_length;
    }
    rec.evidence["classification"] = to_json(report);
    spec.golden(GoldenContext{fam, spec.sigma, budget, &report}, rec);
  } catch (const std::exception& e) {
    rec.error = exception_kind(e) + ": " + e.what();
  }
  rec.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.finished_at = utc_timestamp();
  return rec;
}

GallerySummary run_gallery(const std::vector<GalleryCase>& cases, Budget budget,
                           std::size_t threads, const std::function<void(const RunRecord&)>& on_done) {
  for (const auto& c : cases) lookup(c.name);
  GallerySummary s;
  s.records.resize(cases.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, cases.size()));
  std::atomic<std::size_t> next{0};
  std::mutex done_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      s.records[i] = run_case(cases[i], budget);
      if (on_done) {
        std::lock_guard lock(done_mutex);
        on_done(s.records[i]);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& r : s.records) {
    if (!r.error.empty()) s.failures.push_back(case_id(r) + ": " + r.error);
    for (const auto& g : r.golden) {
      if (!g.pass) {
        s.mismatches.push_back(case_id(r) + ": " + g.claim + " (expected " + g.expected +
                               ", got " + g.actual + ")");
      }
    }
  }
  return s;
}

std::string format_summary(const GallerySummary& s) {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-28s %-46s %-6s %s\n", "case", "claim", "result", "actual");
  out << line;
  for (const auto& r : s.records) {
    const std::string id = case_id(r);
    if (!r.error.empty()) {
      std::snprintf(line, sizeof line, "%-28s %-46s %-6s %s\n", id.c_str(), "(run)", "ERROR",
                    r.error.c_str());
      out << line;
    }
    for (const auto& g : r.golden) {
      std::snprintf(line, sizeof line, "%-28s %-46s %-6s %s\n", id.c_str(), g.claim.c_str(),
                    g.pass ? "pass" : "FAIL", g.actual.c_str());
      out << line;
    }
  }
  std::size_t checks = 0, failed = 0;
  for (const auto& r : s.records) {
    checks += r.golden.size();
    for (const auto& g : r.golden) failed += g.pass ? 0 : 1;
  }
  out << checks - failed << "/" << checks << " golden checks passed, " << s.failures.size()
      << " runs failed\n";
  return out.str();
}

}  // namespace iglab
