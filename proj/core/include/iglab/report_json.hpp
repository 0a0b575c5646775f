#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iglab/classify.hpp"
#include "iglab/codim.hpp"

namespace iglab {

inline constexpr int kRunRecordSchema = 1;

const char* tool_version();

/// Non-finite doubles become the strings "inf", "-inf" and "nan"; finite
/// ones are stored as shortest round-trip numbers.
nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SeriesEvidence& e);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const HopfRinowReport& r);
nlohmann::json to_json(const CapacitySequence& c);
nlohmann::json to_json(const LambdaSolution& s);
nlohmann::json to_json(const HarmonicWitness& w);
nlohmann::json to_json(const CodimEstimate& c);
nlohmann::json to_json(const PolarityTest& p);
nlohmann::json to_json(const DegBallTable& t);
nlohmann::json to_json(const ClassificationReport& r);

Verdict verdict_from_json(const nlohmann::json& j);

struct GoldenCheck {
  std::string claim;
  std::string expected;
  std::string actual;
  bool pass = false;

  friend bool operator==(const GoldenCheck&, const GoldenCheck&) = default;
};

/// One run of one family: identification, verdicts, headline numbers,
/// golden checks and the full evidence tree.
struct RunRecord {
  int schema_version = kRunRecordSchema;
  std::string tool_version;
  std::string family;
  Parameters params;
  std::string sigma;
  std::string budget;
  std::vector<std::size_t> windows;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  double elapsed_seconds = 0.0;
  std::map<std::string, Verdict> verdicts;
  std::map<std::string, double> numbers;
  std::vector<GoldenCheck> golden;
  /// "error" is set when the run threw; the message is kept here.
  std::string error;
  nlohmann::json evidence = nlohmann::json::object();

  bool passed() const;
};

bool same_verdicts(const RunRecord& a, const RunRecord& b);
/// Verdicts, numbers (bitwise), golden checks and evidence all equal.
bool identical(const RunRecord& a, const RunRecord& b);

nlohmann::json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);

/// Writes to a temporary file next to `path` and renames it into place.
void write_run_record(const std::filesystem::path& path, const RunRecord& r);
RunRecord read_run_record(const std::filesystem::path& path);

/// UTC time in ISO 8601, seconds resolution.
std::string utc_timestamp();

}  // namespace iglab
