#include "iglab/report_json.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>

#include "iglab/error.hpp"

#ifndef IGLAB_VERSION
#define IGLAB_VERSION "0.0.0"
#endif

namespace iglab {

using nlohmann::json;

const char* tool_version() { return IGLAB_VERSION; }

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw InputError("expected a number, got " + j.dump());
}

namespace {

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

json params_json(const Parameters& p) {
  json o = json::object();
  for (const auto& [k, v] : p) o[k] = number_to_json(v);
  return o;
}

}  // namespace

json to_json(const SeriesEvidence& e) {
  return {{"verdict", to_string(e.verdict)},
          {"partial_sum", number_to_json(e.partial_sum)},
          {"terms", e.terms},
          {"last_quartile_growth", number_to_json(e.last_quartile_growth)},
          {"loglog_slope", number_to_json(e.loglog_slope)},
          {"term_slope", number_to_json(e.term_slope)}};
}

json to_json(const Verdict& v) {
  return {{"value", v.value}, {"source", v.source}, {"detail", v.detail}};
}

Verdict verdict_from_json(const json& j) {
  return Verdict{j.at("value").get<std::string>(), j.at("source").get<std::string>(),
                 j.at("detail").get<std::string>()};
}

json to_json(const HopfRinowReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"radius", number_to_json(row.radius)},
                    {"sizes", row.sizes},
                    {"stable", row.stable},
                    {"fills_window", row.fills_window}});
  }
  json o = {{"family", r.family},
            {"sigma", r.sigma},
            {"windows", r.windows},
            {"window_sizes", r.window_sizes},
            {"rows", rows},
            {"locally_finite", r.locally_finite},
            {"length_partial_sums", numbers(r.length_partial_sums)},
            {"boundary_points", r.boundary_points},
            {"verdict", r.verdict},
            {"reason", r.reason}};
  o["total_length"] = r.total_length ? number_to_json(*r.total_length) : json(nullptr);
  return o;
}

json to_json(const CapacitySequence& c) {
  json samples = json::array();
  for (const auto& s : c.samples) {
    samples.push_back({{"tail_start", s.tail_start},
                       {"outer_window", s.outer_window},
                       {"capacity", number_to_json(s.capacity)},
                       {"outer_converged", s.outer_converged}});
  }
  return {{"family", c.family},
          {"sigma", c.sigma},
          {"ends", to_string(c.ends)},
          {"samples", samples},
          {"monotone_nonincreasing", c.monotone_nonincreasing},
          {"tail_measure", to_string(c.tail_measure)},
          {"last_value", number_to_json(c.last_value)},
          {"loglog_slope", number_to_json(c.loglog_slope)},
          {"last_quartile_change", number_to_json(c.last_quartile_change)},
          {"regime", to_string(c.regime)},
          {"reason", c.reason}};
}

json to_json(const LambdaSolution& s) {
  // The full solution can be long; keep the endpoints and a thinned profile.
  json profile = json::array();
  const std::size_t stride = std::max<std::size_t>(1, s.u.size() / 64);
  for (std::size_t i = 0; i < s.u.size(); i += stride) {
    profile.push_back({{"x", s.labels[i]}, {"u", number_to_json(s.u[i])}});
  }
  if (!s.u.empty() && (s.u.size() - 1) % stride != 0) {
    profile.push_back({{"x", s.labels.back()}, {"u", number_to_json(s.u.back())}});
  }
  return {{"lambda", number_to_json(s.lambda)},
          {"points", s.u.size()},
          {"overflow", s.overflow},
          {"bounded", to_json(s.bounded)},
          {"plateau", to_json(s.plateau)},
          {"l2", to_json(s.l2)},
          {"energy", to_json(s.energy)},
          {"residual", number_to_json(s.residual)},
          {"increasing", s.increasing},
          {"profile", profile}};
}

json to_json(const HarmonicWitness& w) {
  return {{"window", w.window},
          {"laplacian_residual", number_to_json(w.laplacian_residual)},
          {"norm", to_json(w.norm)},
          {"window_energy", number_to_json(w.window_energy)},
          {"summability", to_json(w.summability)},
          {"accepted", w.accepted},
          {"verdict", w.verdict}};
}

json to_json(const CodimEstimate& c) {
  json samples = json::array();
  for (const auto& s : c.samples) {
    samples.push_back({{"x", s.x},
                       {"r", number_to_json(s.r)},
                       {"mu_ball", number_to_json(s.mu_ball)},
                       {"ratio", number_to_json(s.ratio)}});
  }
  return {{"samples", samples},
          {"slope", number_to_json(c.slope)},
          {"deep_slope", number_to_json(c.deep_slope)},
          {"limsup_proxy", number_to_json(c.limsup_proxy)},
          {"quartile_size", c.quartile_size},
          {"codim", number_to_json(c.codim)}};
}

json to_json(const PolarityTest& p) {
  json steps = json::array();
  for (const auto& s : p.steps) {
    steps.push_back({{"n", s.n},
                     {"r", number_to_json(s.r)},
                     {"qnorm", number_to_json(s.qnorm)},
                     {"energy", number_to_json(s.energy)},
                     {"norm_sq", number_to_json(s.norm_sq)},
                     {"mu_ball", number_to_json(s.mu_ball)},
                     {"bound", number_to_json(s.bound)},
                     {"within_bound", s.within_bound}});
  }
  return {{"steps", steps},
          {"monotone_decreasing", p.monotone_decreasing},
          {"all_within_bound", p.all_within_bound},
          {"intrinsic", p.intrinsic},
          {"min_slack", number_to_json(p.min_slack)}};
}

json to_json(const DegBallTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"radius", number_to_json(r.radius)},
                    {"max_deg", numbers(r.max_deg)},
                    {"ball_size", r.ball_size},
                    {"stable", r.stable}});
  }
  return {{"windows", t.windows}, {"rows", rows}, {"intrinsic", t.intrinsic}, {"bounded", t.bounded}};
}

json to_json(const ClassificationReport& r) {
  json o = {{"family", r.family},
            {"params", params_json(r.params)},
            {"sigma", r.sigma},
            {"budget", r.budget},
            {"completeness", to_json(r.completeness)},
            {"boundary_points", r.boundary_points},
            {"deg_bounded_on_balls", to_json(r.deg_bounded_on_balls)},
            {"capacity_regime", r.capacity_regime},
            {"capacity_last", number_to_json(r.capacity_last)},
            {"polar", to_json(r.polar)},
            {"markov_unique", to_json(r.markov_unique)},
            {"essentially_self_adjoint", to_json(r.essentially_self_adjoint)},
            {"domain_note", r.domain_note}};
  o["codim"] = r.codim ? number_to_json(*r.codim) : json(nullptr);
  json ev = json::object();
  if (r.hopf_rinow) ev["hopf_rinow"] = to_json(*r.hopf_rinow);
  if (r.capacity) ev["capacity"] = to_json(*r.capacity);
  if (r.lambda) ev["lambda"] = to_json(*r.lambda);
  if (r.witness) ev["harmonic_witness"] = to_json(*r.witness);
  if (r.codim_estimate) ev["codim"] = to_json(*r.codim_estimate);
  o["evidence"] = std::move(ev);
  return o;
}

bool RunRecord::passed() const {
  if (!error.empty()) return false;
  for (const auto& g : golden) {
    if (!g.pass) return false;
  }
  return true;
}

bool same_verdicts(const RunRecord& a, const RunRecord& b) {
  if (a.verdicts.size() != b.verdicts.size()) return false;
  for (const auto& [k, v] : a.verdicts) {
    auto it = b.verdicts.find(k);
    if (it == b.verdicts.end() || it->second.value != v.value || it->second.source != v.source) {
      return false;
    }
  }
  return a.golden == b.golden;
}

bool identical(const RunRecord& a, const RunRecord& b) {
  if (!same_verdicts(a, b)) return false;
  if (a.numbers.size() != b.numbers.size()) return false;
  for (const auto& [k, v] : a.numbers) {
    auto it = b.numbers.find(k);
    if (it == b.numbers.end()) return false;
    if (std::bit_cast<std::uint64_t>(v) != std::bit_cast<std::uint64_t>(it->second)) return false;
  }
  return a.schema_version == b.schema_version && a.family == b.family && a.params == b.params &&
         a.sigma == b.sigma && a.budget == b.budget && a.windows == b.windows &&
         a.seed == b.seed && a.error == b.error && a.evidence == b.evidence;
}

json to_json(const RunRecord& r) {
  json verdicts = json::object();
  for (const auto& [k, v] : r.verdicts) verdicts[k] = to_json(v);
  json nums = json::object();
  for (const auto& [k, v] : r.numbers) nums[k] = number_to_json(v);
  json golden = json::array();
  for (const auto& g : r.golden) {
    golden.push_back(
        {{"claim", g.claim}, {"expected", g.expected}, {"actual", g.actual}, {"pass", g.pass}});
  }
  return {{"schema_version", r.schema_version},
          {"tool_version", r.tool_version},
          {"family", r.family},
          {"params", params_json(r.params)},
          {"sigma", r.sigma},
          {"budget", r.budget},
          {"windows", r.windows},
          {"seed", r.seed},
          {"started_at", r.started_at},
          {"finished_at", r.finished_at},
          {"elapsed_seconds", number_to_json(r.elapsed_seconds)},
          {"verdicts", verdicts},
          {"numbers", nums},
          {"golden", golden},
          {"error", r.error},
          {"evidence", r.evidence}};
}

RunRecord run_record_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema_version")) {
    throw InputError("run record has no schema_version");
  }
  RunRecord r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kRunRecordSchema) {
    throw InputError("unsupported run record schema " + std::to_string(r.schema_version));
  }
  try {
    r.tool_version = j.at("tool_version").get<std::string>();
    r.family = j.at("family").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) r.params[k] = number_from_json(v);
    r.sigma = j.at("sigma").get<std::string>();
    r.budget = j.at("budget").get<std::string>();
    r.windows = j.at("windows").get<std::vector<std::size_t>>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.started_at = j.at("started_at").get<std::string>();
    r.finished_at = j.at("finished_at").get<std::string>();
    r.elapsed_seconds = number_from_json(j.at("elapsed_seconds"));
    for (const auto& [k, v] : j.at("verdicts").items()) r.verdicts[k] = verdict_from_json(v);
    for (const auto& [k, v] : j.at("numbers").items()) r.numbers[k] = number_from_json(v);
    for (const auto& g : j.at("golden")) {
      r.golden.push_back(GoldenCheck{g.at("claim").get<std::string>(),
                                     g.at("expected").get<std::string>(),
                                     g.at("actual").get<std::string>(), g.at("pass").get<bool>()});
    }
    r.error = j.at("error").get<std::string>();
    r.evidence = j.at("evidence");
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed run record: ") + e.what());
  }
  return r;
}

void write_run_record(const std::filesystem::path& path, const RunRecord& r) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << to_json(r).dump(2) << '\n';
    if (!out) throw InputError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

RunRecord read_run_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return run_record_from_json(j);
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace iglab
