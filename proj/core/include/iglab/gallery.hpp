#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "iglab/classify.hpp"
#include "iglab/family.hpp"
#include "iglab/metric.hpp"
#include "iglab/report_json.hpp"

namespace iglab {

struct ParamSpec {
  std::string key;
  double default_value = 0.0;
  std::string doc;
};

/// Claimed outcome for a family, checked by the golden run.
struct Expectation {
  std::string claim;
  std::string expected;
};

struct GoldenContext {
  const GraphFamily& family;
  LengthChoice sigma;
  Budget budget;
  /// Null for families classify does not cover.
  const ClassificationReport* report;
};

struct FamilySpec {
  std::string name;
  std::string title;
  std::vector<ParamSpec> params;
  LengthChoice sigma;
  /// False for names kept only to report that they are out of scope.
  bool supported = true;
  std::string unsupported_reason;
  std::vector<Expectation> expected;
  /// Depth of the Minkowski sampling, 0 for the budget default.
  std::size_t codim_depth = 0;
  std::function<GraphFamily(const Parameters&)> build;
  /// Appends golden checks and extra evidence to the record.
  std::function<void(const GoldenContext&, RunRecord&)> golden;

  /// Defaults merged with `overrides`; unknown keys are an InputError.
  Parameters resolve(const Parameters& overrides) const;
  GraphFamily make(const Parameters& overrides = {}) const;
};

const std::vector<FamilySpec>& registry();

/// FamilyError listing the valid names when `name` is unknown; FamilyError
/// with the reason when the entry is unsupported.
const FamilySpec& lookup(const std::string& name);

std::vector<std::string> registry_names();

GraphFamily make_family(const std::string& name, const Parameters& params = {});

struct GalleryCase {
  std::string name;
  Parameters params;
};

/// Every supported family at its defaults, plus both weight cases of the
/// codimension sweep at α ∈ {0.75, 1, 2}.
std::vector<GalleryCase> default_gallery();

/// Runs classify and the golden checks for one case. Never throws for
/// numerical trouble: the message goes to `record.error`.
RunRecord run_case(const GalleryCase& c, Budget budget);

struct GallerySummary {
  std::vector<RunRecord> records;
  std::vector<std::string> mismatches;
  std::vector<std::string> failures;  // runs that threw
  bool passed() const { return mismatches.empty() && failures.empty(); }
};

/// Runs the cases on `threads` workers (0: hardware concurrency). Records
/// come back in input order.
GallerySummary run_gallery(const std::vector<GalleryCase>& cases, Budget budget,
                           std::size_t threads = 0,
                           const std::function<void(const RunRecord&)>& on_done = {});

/// Fixed-width pass/fail table, one line per golden check.
std::string format_summary(const GallerySummary& s);

}  // namespace iglab
