#include "iglab/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iglab/error.hpp"

namespace iglab {

const char* to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::Converges: return "converges";
    case SeriesVerdict::Diverges: return "diverges";
    case SeriesVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    c_ += (sum_ - t) + v;
  } else {
    c_ += (v - t) + sum_;
  }
  sum_ = t;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InputError("fit_line needs two or more paired samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InputError("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

SeriesEvidence classify_partial_sums(std::span<const double> s) {
  std::vector<double> counts(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) counts[k] = static_cast<double>(k + 1);
  return classify_sampled(counts, s);
}

SeriesEvidence classify_sampled(std::span<const double> counts, std::span<const double> s) {
  if (counts.size() != s.size()) throw InputError("classify_sampled: size mismatch");
  SeriesEvidence ev;
  ev.terms = s.empty() ? 0 : static_cast<std::size_t>(counts.back());
  if (s.empty()) return ev;
  ev.partial_sum = s.back();
  if (!std::isfinite(s.back())) {
    ev.verdict = SeriesVerdict::Diverges;
    ev.loglog_slope = std::numeric_limits<double>::infinity();
    ev.last_quartile_growth = 1.0;
    return ev;
  }
  if (s.size() < 8) return ev;

  const std::size_t q = s.size() - s.size() / 4 - 1;
  const double end = s.back();
  ev.last_quartile_growth = end == 0.0 ? 0.0 : (end - s[q]) / std::abs(end);

  std::vector<double> lx, ly;
  for (std::size_t k = q; k < s.size(); ++k) {
    if (s[k] > 0.0) {
      lx.push_back(std::log(counts[k]));
      ly.push_back(std::log(s[k]));
    }
  }
  if (lx.size() >= 2) ev.loglog_slope = fit_line(lx, ly).slope;

  std::vector<double> tx, ty;
  bool positive = true;
  for (std::size_t k = std::max<std::size_t>(q, 1); k < s.size() && positive; ++k) {
    const double t = (s[k] - s[k - 1]) / (counts[k] - counts[k - 1]);
    positive = t > 0.0;
    tx.push_back(std::log(counts[k]));
    ty.push_back(std::log(t));
  }
  if (positive && tx.size() >= 2) ev.term_slope = fit_line(tx, ty).slope;

  if (std::abs(ev.last_quartile_growth) < kPlateauGrowth || ev.term_slope < kConvergentTermSlope) {
    ev.verdict = SeriesVerdict::Converges;
  } else if (ev.loglog_slope > kDivergenceSlope) {
    ev.verdict = SeriesVerdict::Diverges;
  }
  return ev;
}

SeriesEvidence classify_terms(std::span<const double> terms) {
  std::vector<double> s(terms.size());
  CompensatedSum acc;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    acc.add(terms[k]);
    s[k] = acc.value();
  }
  return classify_partial_sums(s);
}

TailSum tail_sum(const std::function<double(std::int64_t)>& term, std::int64_t start,
                 std::int64_t step, std::size_t max_terms) {
  constexpr std::size_t kBlock = 32;
  TailSum out;
  CompensatedSum acc;
  double prev = std::numeric_limits<double>::quiet_NaN();
  double last = 0.0;
  std::size_t k = 0;
  while (k < max_terms) {
    const double before = acc.value();
    std::size_t stop = std::min(max_terms, k + kBlock);
    for (; k < stop; ++k) {
      const double t = term(start + static_cast<std::int64_t>(k) * step);
      if (!std::isfinite(t)) {
        out.value = std::numeric_limits<double>::infinity();
        out.terms_used = k + 1;
        out.remainder_bound = std::numeric_limits<double>::infinity();
        return out;
      }
      acc.add(t);
      prev = last;
      last = t;
    }
    out.terms_used = k;
    const double now = acc.value();
    if (now == before && k > kBlock) {
      out.converged = true;
      break;
    }
  }
  out.value = acc.value();
  if (last == 0.0) {
    out.remainder_bound = 0.0;
  } else if (std::isfinite(prev) && prev > 0.0 && last < prev) {
    const double q = last / prev;
    out.remainder_bound = last * q / (1.0 - q);
  } else {
    out.remainder_bound = std::numeric_limits<double>::infinity();
  }
  if (!out.converged && out.remainder_bound <= 1e-16 * std::abs(out.value)) {
    out.converged = true;
  }
  return out;
}

SeriesEvidence series_evidence(const std::function<double(std::int64_t)>& term,
                               std::int64_t start, std::int64_t step, std::size_t max_terms) {
  const TailSum t = tail_sum(term, start, step, max_terms);
  if (t.converged) {
    SeriesEvidence ev;
    ev.verdict = SeriesVerdict::Converges;
    ev.partial_sum = t.value;
    ev.terms = t.terms_used;
    return ev;
  }
  if (!std::isfinite(t.value)) {
    const double inf = std::numeric_limits<double>::infinity();
    const double counts[] = {static_cast<double>(t.terms_used)};
    const double sums[] = {inf};
    return classify_sampled(counts, sums);
  }
  constexpr std::size_t kSamples = 1024;
  const std::size_t stride = std::max<std::size_t>(1, max_terms / kSamples);
  std::vector<double> counts, sums;
  CompensatedSum acc;
  for (std::size_t k = 0; k < max_terms; ++k) {
    acc.add(term(start + static_cast<std::int64_t>(k) * step));
    if ((k + 1) % stride == 0) {
      counts.push_back(static_cast<double>(k + 1));
      sums.push_back(acc.value());
    }
  }
  return classify_sampled(counts, sums);
}

}  // namespace iglab
