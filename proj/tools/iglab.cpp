#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iglab/capacity.hpp"
#include "iglab/classify.hpp"
#include "iglab/codim.hpp"
#include "iglab/completeness.hpp"
#include "iglab/error.hpp"
#include "iglab/forms.hpp"
#include "iglab/gallery.hpp"
#include "iglab/graph_io.hpp"
#include "iglab/report_json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace iglab;

namespace {

struct Globals {
  std::string out_dir;
  std::string format = "json";
  std::string budget = "standard";
};

struct Target {
  std::string spec;
  std::string sigma;
};

struct Resolved {
  const FamilySpec* spec;
  GraphFamily family;
  LengthChoice sigma;
};

Resolved resolve(const Target& t) {
  const FamilyConfig cfg = resolve_family_config(t.spec);
  const FamilySpec& spec = lookup(cfg.family);
  LengthChoice sigma = spec.sigma;
  if (cfg.sigma) sigma = LengthChoice::parse(*cfg.sigma);
  if (!t.sigma.empty()) sigma = LengthChoice::parse(t.sigma);
  return Resolved{&spec, spec.make(cfg.params), sigma};
}

std::string stem(const Resolved& r) {
  std::string s = r.family.name();
  for (const auto& [k, v] : r.family.params()) s += "_" + k + "-" + format_double(v);
  return s;
}

// stdout, or an atomically replaced file under --out.
void emit(const Globals& g, const std::string& name, const std::string& body) {
  if (g.out_dir.empty()) {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << '\n';
    return;
  }
  fs::create_directories(g.out_dir);
  const fs::path path = fs::path(g.out_dir) / (name + "." + g.format);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << body;
    if (!body.empty() && body.back() != '\n') out << '\n';
  }
  fs::rename(tmp, path);
  std::cerr << "wrote " << path.string() << '\n';
}

std::string csv_num(double v) { return number_to_json(v).dump(); }

void add_target(CLI::App* sub, Target& t) {
  sub->add_option("--family", t.spec, "family config file or name[:key=value,...]")->required();
  sub->add_option("--sigma", t.sigma, "sigma0, sigma1, natural:K or family");
}

// ---- subcommands ---------------------------------------------------------

void run_metric(const Globals& g, const Target& t, std::size_t window, Label from,
                std::size_t geodesic_hops) {
  const Resolved r = resolve(t);
  const WeightedGraph graph = truncate(r.family, window);
  const PathMetric m(make_lengths(r.family, graph, r.sigma));
  Vertex origin = graph.size();
  for (Vertex x = 0; x < graph.size(); ++x) {
    if (graph.label(x) == from) origin = x;
  }
  if (origin == graph.size()) throw InputError("label " + std::to_string(from) + " not in window");
  const auto& d = *m.distances_from(origin);
  const auto cert = intrinsic_check(m);
  const auto strong = strongly_intrinsic_check(m.lengths());
  if (g.format == "csv") {
    std::ostringstream out;
    out << "vertex,label,distance\n";
    for (Vertex x = 0; x < graph.size(); ++x) {
      out << x << ',' << graph.label(x) << ',' << csv_num(d[x]) << '\n';
    }
    emit(g, "metric_" + stem(r), out.str());
    return;
  }
  json dist = json::array();
  for (Vertex x = 0; x < graph.size(); ++x) {
    dist.push_back({{"label", graph.label(x)}, {"distance", number_to_json(d[x])}});
  }
  json o = {{"family", r.family.name()},
            {"sigma", r.sigma.to_string()},
            {"window", window},
            {"from", from},
            {"distances", dist},
            {"intrinsic", {{"pass", cert.pass}, {"min_slack", number_to_json(cert.min_slack)}}},
            {"strongly_intrinsic",
             {{"pass", strong.pass}, {"min_slack", number_to_json(strong.min_slack)}}}};
  if (geodesic_hops > 0) {
    const Geodesic geo = find_geodesic(m, origin, geodesic_hops);
    json path = json::array();
    for (Vertex v : geo.path) path.push_back(graph.label(v));
    o["geodesic"] = {{"labels", path},
                     {"length", number_to_json(geo.length)},
                     {"verified", geo.verified}};
  }
  emit(g, "metric_" + stem(r), o.dump(2));
}

void run_complete(const Globals& g, const Target& t, std::vector<std::size_t> windows) {
  const Resolved r = resolve(t);
  if (windows.empty()) {
    const std::size_t cap = std::min(limits(parse_budget(g.budget)).max_window, r.family.max_window());
    for (std::size_t n = 8; n <= cap; n *= 2) windows.push_back(n);
  }
  const HopfRinowReport rep = hopf_rinow_report(r.family, r.sigma, windows);
  if (g.format == "csv") {
    std::ostringstream out;
    out << "window,window_size,radius,ball_size\n";
    for (std::size_t i = 0; i < rep.windows.size(); ++i) {
      for (const auto& row : rep.rows) {
        out << rep.windows[i] << ',' << rep.window_sizes[i] << ',' << csv_num(row.radius) << ','
            << row.sizes[i] << '\n';
      }
    }
    emit(g, "complete_" + stem(r), out.str());
    return;
  }
  emit(g, "complete_" + stem(r), to_json(rep).dump(2));
}

VertexFunction random_function(const WeightedGraph& graph, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(graph.size());
  for (auto& x : v) x = u(rng);
  return VertexFunction(graph, std::move(v));
}

void run_forms(const Globals& g, const Target& t, std::size_t window, std::uint64_t seed,
               std::size_t trials) {
  const Resolved r = resolve(t);
  const WeightedGraph graph = truncate(r.family, window);
  std::mt19937_64 rng(seed);
  double green = 0.0, leibniz = 0.0, cacc = 1.0, contraction = -1.0;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto a = random_function(graph, rng), b = random_function(graph, rng),
               c = random_function(graph, rng);
    const auto gr = green_identity_check(a, b);
    const auto lb = leibniz_check(a, b, c);
    const auto cc = caccioppoli_check(a, b);
    green = std::max(green, std::max(gr.residual_symmetric, gr.residual_pairing) / gr.scale);
    leibniz = std::max(leibniz, lb.residual / lb.scale);
    cacc = std::min(cacc, cc.slack / cc.scale);
    contraction = std::max(contraction, energy(normal_contraction(a)) - energy(a));
    failures += (gr.pass() && lb.pass() && cc.pass()) ? 0 : 1;
  }
  json o = {{"family", r.family.name()},
            {"window", window},
            {"seed", seed},
            {"trials", trials},
            {"green_max_rel_residual", number_to_json(green)},
            {"leibniz_max_rel_residual", number_to_json(leibniz)},
            {"caccioppoli_min_rel_slack", number_to_json(cacc)},
            {"contraction_max_excess", number_to_json(contraction)},
            {"failures", failures}};
  if (g.format == "csv") {
    std::ostringstream out;
    out << "quantity,value\n";
    for (const auto& [k, v] : o.items()) out << k << ',' << v.dump() << '\n';
    emit(g, "forms_" + stem(r), out.str());
  } else {
    emit(g, "forms_" + stem(r), o.dump(2));
  }
  if (failures) throw NumericalError(std::to_string(failures) + " identity checks failed");
}

void run_cap(const Globals& g, const Target& t, const std::string& ends,
             std::vector<std::size_t> tails) {
  const Resolved r = resolve(t);
  CapacityOptions co;
  co.ends = parse_end_selection(ends);
  co.max_outer = limits(parse_budget(g.budget)).max_tail;
  if (tails.empty()) tails = default_tails(co.max_outer);
  const CapacitySequence seq = boundary_capacity(r.family, r.sigma, tails, co);
  if (g.format == "csv") {
    std::ostringstream out;
    out << "tail_start,outer_window,capacity,outer_converged\n";
    for (const auto& s : seq.samples) {
      out << s.tail_start << ',' << s.outer_window << ',' << csv_num(s.capacity) << ','
          << (s.outer_converged ? 1 : 0) << '\n';
    }
    emit(g, "cap_" + stem(r), out.str());
    return;
  }
  json o = to_json(seq);
  o["alternative"] = boundary_alternative_evidence(seq).verdict;
  emit(g, "cap_" + stem(r), o.dump(2));
}

void run_codim(const Globals& g, const Target& t, std::size_t depth, bool polarity) {
  const Resolved r = resolve(t);
  if (depth == 0) depth = r.spec->codim_depth ? r.spec->codim_depth : 40;
  const CodimEstimate est = minkowski_samples(r.family, r.sigma, depth);
  std::optional<PolarityTest> pt;
  if (polarity) pt = codim_polarity_test(r.family, r.sigma, depth);
  if (g.format == "csv") {
    std::ostringstream out;
    out << "x,r,mu_ball,ratio\n";
    for (const auto& s : est.samples) {
      out << s.x << ',' << csv_num(s.r) << ',' << csv_num(s.mu_ball) << ',' << csv_num(s.ratio)
          << '\n';
    }
    emit(g, "codim_" + stem(r), out.str());
    if (pt) {
      std::ostringstream p;
      p << "n,r,qnorm,energy,norm_sq,mu_ball,bound,within_bound\n";
      for (const auto& s : pt->steps) {
        p << s.n << ',' << csv_num(s.r) << ',' << csv_num(s.qnorm) << ',' << csv_num(s.energy)
          << ',' << csv_num(s.norm_sq) << ',' << csv_num(s.mu_ball) << ',' << csv_num(s.bound)
          << ',' << (s.within_bound ? 1 : 0) << '\n';
      }
      emit(g, "polarity_" + stem(r), p.str());
    }
    return;
  }
  json o = {{"family", r.family.name()}, {"sigma", r.sigma.to_string()}, {"estimate", to_json(est)}};
  if (pt) o["polarity_test"] = to_json(*pt);
  emit(g, "codim_" + stem(r), o.dump(2));
}

void run_classify(const Globals& g, const Target& t, double lambda) {
  const Resolved r = resolve(t);
  ClassifyOptions opt;
  opt.budget = parse_budget(g.budget);
  opt.lambda = lambda;
  opt.codim_depth = r.spec->codim_depth;
  const ClassificationReport rep = classify(r.family, r.sigma, opt);
  if (g.format != "csv") {
    emit(g, "classify_" + stem(r), to_json(rep).dump(2));
    return;
  }
  std::ostringstream out;
  out << "table,key,value\n";
  auto row = [&](const std::string& table, const std::string& key, const std::string& value) {
    out << table << ',' << key << ',' << value << '\n';
  };
  row("verdict", "completeness", rep.completeness.value);
  row("verdict", "polar", rep.polar.value);
  row("verdict", "markov_unique", rep.markov_unique.value);
  row("verdict", "essentially_self_adjoint", rep.essentially_self_adjoint.value);
  row("verdict", "capacity_regime", rep.capacity_regime);
  if (rep.capacity) {
    for (const auto& s : rep.capacity->samples) {
      row("capacity", std::to_string(s.tail_start), csv_num(s.capacity));
    }
  }
  if (rep.codim_estimate) {
    for (const auto& s : rep.codim_estimate->samples) {
      row("codim_ratio", std::to_string(s.x), csv_num(s.ratio));
    }
  }
  if (rep.lambda) {
    const auto& l = *rep.lambda;
    const std::size_t stride = std::max<std::size_t>(1, l.u.size() / 64);
    for (std::size_t i = 0; i < l.u.size(); i += stride) {
      row("lambda_u", std::to_string(l.labels[i]), csv_num(l.u[i]));
    }
  }
  emit(g, "classify_" + stem(r), out.str());
}

int run_gallery_cmd(const Globals& g, const std::vector<std::string>& names, std::size_t threads) {
  const Budget budget = parse_budget(g.budget);
  std::vector<GalleryCase> cases;
  if (names.empty()) {
    cases = default_gallery();
  } else {
    const auto all = default_gallery();
    for (const auto& n : names) {
      if (n.find(':') != std::string::npos) {
        const FamilyConfig cfg = resolve_family_config(n);
        cases.push_back({cfg.family, cfg.params});
        continue;
      }
      bool any = false;
      for (const auto& c : all) {
        if (c.name == n) {
          cases.push_back(c);
          any = true;
        }
      }
      if (!any) cases.push_back({lookup(n).name, {}});
    }
  }
  std::size_t index = 0;
  const GallerySummary s = run_gallery(cases, budget, threads, [&](const RunRecord& rec) {
    std::cerr << "[" << ++index << "/" << cases.size() << "] " << rec.family << " "
              << (rec.passed() ? "ok" : "FAIL") << " (" << rec.elapsed_seconds << " s)\n";
  });
  if (!g.out_dir.empty()) {
    fs::create_directories(g.out_dir);
    for (const auto& rec : s.records) {
      std::string name = rec.family;
      for (const auto& [k, v] : rec.params) name += "_" + k + "-" + format_double(v);
      write_run_record(fs::path(g.out_dir) / (name + ".json"), rec);
    }
  }
  if (g.format == "csv") {
    std::ostringstream out;
    out << "family,params,claim,expected,actual,pass\n";
    auto quote = [](const std::string& v) {
      std::string q = "\"";
      for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + "\"";
    };
    for (const auto& rec : s.records) {
      std::string params;
      for (const auto& [k, v] : rec.params) params += (params.empty() ? "" : ";") + k + "=" + format_double(v);
      for (const auto& gc : rec.golden) {
        out << rec.family << ',' << quote(params) << ',' << quote(gc.claim) << ','
            << quote(gc.expected) << ',' << quote(gc.actual) << ',' << (gc.pass ? 1 : 0) << '\n';
      }
    }
    std::cout << out.str();
  } else {
    std::cout << format_summary(s);
  }
  for (const auto& m : s.mismatches) std::cerr << "mismatch: " << m << '\n';
  for (const auto& f : s.failures) std::cerr << "failure: " << f << '\n';
  if (!s.failures.empty()) return static_cast<int>(ExitCode::NumericalFailure);
  if (!s.mismatches.empty()) return static_cast<int>(ExitCode::GoldenMismatch);
  return 0;
}

void run_graph(const Globals& g, const Target& t, std::size_t window) {
  const Resolved r = resolve(t);
  std::ostringstream out;
  write_graph(out, truncate(r.family, window));
  Globals plain = g;
  plain.format = "graph";
  emit(plain, "graph_" + stem(r) + "_" + std::to_string(window), out.str());
}

void list_families() {
  for (const auto& s : registry()) {
    std::cout << s.name << (s.supported ? "" : " (" + s.unsupported_reason + ")") << "\n  "
              << s.title << '\n';
    for (const auto& p : s.params) {
      std::cout << "  " << p.key << " = " << format_double(p.default_value) << "  " << p.doc << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intrinsic metrics, boundaries and self-adjointness on weighted graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out_dir, "write results into this directory");
  app.add_option("--format", g.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--budget", g.budget, "quick, standard or deep")
      ->check(CLI::IsMember({"quick", "standard", "deep"}));

  Target t;
  std::size_t window = 64, hops = 0, depth = 0, trials = 100, threads = 0;
  Label from = 0;
  std::uint64_t seed = 1;
  std::vector<std::size_t> windows, tails;
  std::string ends = "all", emit_fmt;
  double lambda = 1.0;
  std::vector<std::string> names;
  bool polarity = false;

  auto* metric = app.add_subcommand("metric", "distances and intrinsic certificates on a truncation");
  add_target(metric, t);
  metric->add_option("--window", window, "truncation window");
  metric->add_option("--from", from, "source label");
  metric->add_option("--geodesic", hops, "also find a geodesic to the hop sphere of this radius");

  auto* complete = app.add_subcommand("complete", "Hopf-Rinow ball table and boundary points");
  add_target(complete, t);
  complete->add_option("--windows", windows, "truncation windows");

  auto* forms = app.add_subcommand("forms", "identity checks with random functions");
  add_target(forms, t);
  forms->add_option("--window", window, "truncation window");
  forms->add_option("--seed", seed, "random seed");
  forms->add_option("--trials", trials, "number of random function triples");

  auto* cap = app.add_subcommand("cap", "tail capacities of the boundary");
  add_target(cap, t);
  cap->add_option("--ends", ends, "left, right or all")
      ->check(CLI::IsMember({"left", "right", "all"}));
  cap->add_option("--tails", tails, "tail starts (default: powers of two)");

  auto* codim = app.add_subcommand("codim", "Minkowski codimension of the boundary");
  add_target(codim, t);
  codim->add_option("--depth", depth, "number of sample points");
  codim->add_flag("--polarity", polarity, "also run the cut-off polarity test");

  auto* classify_cmd = app.add_subcommand("classify", "full classification report");
  add_target(classify_cmd, t);
  classify_cmd->add_option("--lambda", lambda, "lambda for the solution test");
  classify_cmd->add_option("--emit", emit_fmt, "csv for evidence tables")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* gallery = app.add_subcommand("gallery", "golden run over the built-in families");
  gallery->add_option("names", names, "families to run (default: all)");
  gallery->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* graph = app.add_subcommand("graph", "write a truncation in the graph file format");
  add_target(graph, t);
  graph->add_option("--window", window, "truncation window");

  app.add_subcommand("families", "list the built-in families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::InputError);
  }

  try {
    if (*metric) run_metric(g, t, window, from, hops);
    if (*complete) run_complete(g, t, windows);
    if (*forms) run_forms(g, t, window, seed, trials);
    if (*cap) run_cap(g, t, ends, tails);
    if (*codim) run_codim(g, t, depth, polarity);
    if (*classify_cmd) {
      if (!emit_fmt.empty()) g.format = emit_fmt;
      run_classify(g, t, lambda);
    }
    if (*gallery) return run_gallery_cmd(g, names, threads);
    if (*graph) run_graph(g, t, window);
    if (app.got_subcommand("families")) list_families();
  } catch (const Error& e) {
    std::cerr << "iglab: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "iglab: " << e.what() << '\n';
    return static_cast<int>(ExitCode::NumericalFailure);
  }
  return 0;
}
