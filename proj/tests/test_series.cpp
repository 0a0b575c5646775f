#include <cmath>
#include <vector>

#include "doctest.h"
#include "iglab/error.hpp"
#include "iglab/series.hpp"

using namespace iglab;

namespace {

std::vector<double> terms(std::size_t n, double (*t)(double)) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = t(static_cast<double>(k + 1));
  return v;
}

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("geometric and power series") {
    CHECK(classify_terms(terms(4096, [](double k) { return std::pow(0.5, k); })).verdict ==
          SeriesVerdict::Converges);
    CHECK(classify_terms(terms(4096, [](double k) { return 1.0 / (k * k); })).verdict ==
          SeriesVerdict::Converges);
    CHECK(classify_terms(terms(4096, [](double) { return 1.0; })).verdict == SeriesVerdict::Diverges);
    CHECK(classify_terms(terms(4096, [](double k) { return std::sqrt(k); })).verdict ==
          SeriesVerdict::Diverges);
  }

  TEST_CASE("harmonic series sits in the undecided band") {
    const auto ev = classify_terms(terms(1 << 14, [](double k) { return 1.0 / k; }));
    CHECK(ev.verdict == SeriesVerdict::Inconclusive);
    CHECK(ev.term_slope == doctest::Approx(-1.0).epsilon(1e-3));
  }

  TEST_CASE("short and non-finite inputs") {
    CHECK(classify_terms(std::vector<double>{1.0, 1.0}).verdict == SeriesVerdict::Inconclusive);
    const auto ev = classify_terms(std::vector<double>{1.0, INFINITY});
    CHECK(ev.verdict == SeriesVerdict::Diverges);
    CHECK(classify_terms(std::vector<double>{}).terms == 0);
  }

  TEST_CASE("fit_line") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0}, y{1.0, 3.0, 5.0, 7.0};
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), InputError);
    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 2.0}),
                    InputError);
  }

  TEST_CASE("compensated sum keeps small terms") {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-17);
    s.add(-1.0);
    CHECK(s.value() == doctest::Approx(1e-14).epsilon(1e-6));
  }

  TEST_CASE("tail sums") {
    const auto g = tail_sum([](std::int64_t x) { return std::ldexp(1.0, -static_cast<int>(x)); }, 0, 1,
                            1 << 12);
    CHECK(g.converged);
    CHECK(g.value == doctest::Approx(2.0).epsilon(1e-15));
    const auto left = tail_sum([](std::int64_t x) { return std::ldexp(1.0, static_cast<int>(x)); }, -1,
                               -1, 1 << 12);
    CHECK(left.value == doctest::Approx(1.0).epsilon(1e-15));
    const auto h = tail_sum([](std::int64_t x) { return 1.0 / static_cast<double>(x); }, 1, 1, 1000);
    CHECK_FALSE(h.converged);
    CHECK(h.terms_used == 1000);
    CHECK(series_evidence([](std::int64_t) { return 2.0; }, 0, 1, 1 << 16).verdict ==
          SeriesVerdict::Diverges);
    CHECK(series_evidence([](std::int64_t x) { return 1.0 / std::pow(x + 1.0, 3.0); }, 0, 1, 1 << 16)
              .verdict == SeriesVerdict::Converges);
  }
}
