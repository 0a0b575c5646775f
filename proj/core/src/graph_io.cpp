#include "iglab/graph_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "iglab/error.hpp"

namespace iglab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line) {
  return trim(line.substr(0, line.find('#')));
}

double parse_number(const std::string& token, std::size_t line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(line_no) + ": expected a number, got '" + token + "'");
  }
}

Vertex parse_vertex(const std::string& token, std::size_t line_no) {
  Vertex v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw InputError("line " + std::to_string(line_no) + ": bad vertex id '" + token + "'");
  }
  return v;
}

}  // namespace

void write_graph(std::ostream& out, const WeightedGraph& g) {
  out << "graph " << g.size() << '\n';
  for (Vertex x = 0; x < g.size(); ++x) out << "mu " << x << ' ' << format_double(g.measure(x)) << '\n';
  for (Vertex x = 0; x < g.size(); ++x) {
    for (const auto& nb : g.neighbors(x)) {
      if (nb.to > x) out << "edge " << x << ' ' << nb.to << ' ' << format_double(nb.weight) << '\n';
    }
  }
  for (Vertex x = 0; x < g.size(); ++x) {
    if (g.leak(x) > 0.0) out << "leak " << x << ' ' << format_double(g.leak(x)) << '\n';
  }
}

WeightedGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<GraphBuilder> builder;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_comment(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    std::vector<std::string> args;
    for (std::string t; ls >> t;) args.push_back(t);
    auto expect = [&](std::size_t count) {
      if (args.size() != count) {
        throw InputError("line " + std::to_string(line_no) + ": '" + kind + "' takes " +
                         std::to_string(count) + " fields");
      }
    };
    if (kind == "graph") {
      expect(1);
      if (builder) throw InputError("line " + std::to_string(line_no) + ": duplicate header");
      builder.emplace(parse_vertex(args[0], line_no));
      continue;
    }
    if (!builder) throw InputError("line " + std::to_string(line_no) + ": missing 'graph' header");
    if (kind == "mu") {
      expect(2);
      builder->set_measure(parse_vertex(args[0], line_no), parse_number(args[1], line_no));
    } else if (kind == "edge") {
      expect(3);
      builder->add_edge(parse_vertex(args[0], line_no), parse_vertex(args[1], line_no),
                        parse_number(args[2], line_no));
    } else if (kind == "leak") {
      expect(2);
      builder->add_leak(parse_vertex(args[0], line_no), parse_number(args[1], line_no));
    } else {
      throw InputError("line " + std::to_string(line_no) + ": unknown directive '" + kind + "'");
    }
  }
  if (!builder) throw InputError("empty graph file");
  return builder->build();
}

FamilyConfig parse_family_config(std::istream& in) {
  FamilyConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_comment(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw InputError("config line " + std::to_string(line_no) + ": empty key or value");
    }
    if (key == "family") {
      cfg.family = value;
    } else if (key == "sigma") {
      cfg.sigma = value;
    } else {
      cfg.params[key] = parse_number(value, line_no);
    }
  }
  if (cfg.family.empty()) throw InputError("family config has no 'family' key");
  return cfg;
}

FamilyConfig load_family_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open family config " + path.string());
  return parse_family_config(in);
}

FamilyConfig resolve_family_config(const std::string& spec) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec, ec)) return load_family_config(spec);
  FamilyConfig cfg;
  const auto colon = spec.find(':');
  cfg.family = trim(spec.substr(0, colon));
  if (cfg.family.empty()) throw InputError("empty family name");
  if (colon == std::string::npos) return cfg;
  std::stringstream rest(spec.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("family parameter '" + item + "' needs key=value");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    if (key == "sigma") {
      cfg.sigma = value;
    } else {
      cfg.params[key] = parse_number(value, 0);
    }
  }
  return cfg;
}

}  // namespace iglab
