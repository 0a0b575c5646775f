#include <cmath>

#include "doctest.h"
#include "iglab/codim.hpp"
#include "iglab/error.hpp"
#include "iglab/gallery.hpp"
#include "support.hpp"

using namespace iglab;

TEST_SUITE("codim") {
  TEST_CASE("ex5.4 boundary distances and ball measures are dyadic") {
    const auto& spec = lookup("ex5.4");
    const GraphFamily f = spec.make();
    const auto est = minkowski_samples(f, spec.sigma, 30);
    REQUIRE(est.samples.size() == 30);
    for (const auto& s : est.samples) {
      CAPTURE(s.x);
      const double r = std::ldexp(1.0, -static_cast<int>(s.x - 1));
      CHECK(testing::rel_err(s.r, r) <= 1e-12);
      CHECK(testing::rel_err(s.mu_ball, r * r / 3.0) <= 1e-12);
      // ln(r²/3) / ln r = 2 - ln 3 / ln r
      if (r < 1.0) CHECK(s.ratio == doctest::Approx(2.0 - std::log(3.0) / std::log(r)).epsilon(1e-12));
    }
    // The pointwise ratio approaches 2 only like 1/x.
    CHECK(est.samples.back().ratio == doctest::Approx(2.0547).epsilon(1e-4));
    CHECK(est.slope == doctest::Approx(2.0).epsilon(0.06));
    CHECK(est.deep_slope == doctest::Approx(2.0).epsilon(1e-9));
  }

  TEST_CASE("ball measure is monotone in the radius") {
    const auto& spec = lookup("ex5.4");
    const GraphFamily f = spec.make();
    const BoundaryModel bm = boundary_model(f, spec.sigma);
    double prev = 0.0;
    for (double r = 1e-6; r < 4.0; r *= 1.7) {
      const double m = boundary_ball_measure(bm, r);
      CHECK(m >= prev);
      prev = m;
    }
    CHECK(boundary_ball_measure(bm, 1e6) == doctest::Approx(4.0 / 3.0));
  }

  TEST_CASE("ex5.6 codimension is 2 - 1/alpha") {
    for (double kase : {1.0, 2.0}) {
      for (double a : {0.75, 1.0, 2.0}) {
        CAPTURE(a);
        CAPTURE(kase);
        const auto& spec = lookup("ex5.6");
        const GraphFamily f = spec.make({{"alpha", a}, {"case", kase}});
        const auto est = minkowski_samples(f, spec.sigma, 40);
        CHECK(std::fabs(est.codim - (2.0 - 1.0 / a)) <= 0.05);
        CHECK(est.quartile_size == 10);
      }
    }
  }

  TEST_CASE("families without a summable boundary are rejected") {
    CHECK_THROWS_AS(minkowski_samples(make_family("ray"), LengthChoice{}, 20), PreconditionError);
    CHECK_THROWS_AS(minkowski_samples(make_family("ex5.2"), lookup("ex5.2").sigma, 20),
                    PreconditionError);
    CHECK_THROWS_AS(minkowski_samples(make_family("a5.1"), LengthChoice{}, 20), PreconditionError);
  }

  TEST_CASE("codim3 cut-offs shrink within the bound") {
    const auto& spec = lookup("codim3");
    const GraphFamily f = spec.make();
    const auto est = minkowski_samples(f, spec.sigma, 40);
    CHECK(est.codim > 2.0);
    CHECK(est.deep_slope == doctest::Approx(3.0).epsilon(1e-6));
    const auto pt = codim_polarity_test(f, spec.sigma, 30);
    REQUIRE(pt.steps.size() == 30);
    CHECK(pt.monotone_decreasing);
    CHECK(pt.all_within_bound);
    CHECK(pt.intrinsic);
    CHECK(pt.steps.back().qnorm < 1e-3);
    for (const auto& s : pt.steps) {
      CHECK(s.qnorm == doctest::Approx(std::sqrt(s.energy + s.norm_sq)));
      CHECK(s.qnorm <= s.bound);
    }
  }

  TEST_CASE("polarity test on ex5.4 stays bounded but does not vanish") {
    // codimension exactly 2: the bound (μ + 4μ/r²)^½ tends to a constant
    const auto& spec = lookup("ex5.4");
    const auto pt = codim_polarity_test(spec.make(), spec.sigma, 20);
    CHECK(pt.all_within_bound);
    CHECK(pt.steps.back().bound == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-3));
  }
}
