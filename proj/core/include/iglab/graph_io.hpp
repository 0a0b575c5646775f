#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "iglab/family.hpp"
#include "iglab/graph.hpp"

namespace iglab {

// Graph interchange format (line oriented, '#' starts a comment):
//
//   graph <n_vertices>
//   mu <x> <value>          one per vertex
//   edge <x> <y> <w>        one per undirected edge, x < y
//   leak <x> <mass>         optional: truncated weight mass at a frontier vertex
//
// Values are written with 17 significant digits so a write/read cycle is
// bit-exact.

void write_graph(std::ostream& out, const WeightedGraph& g);
WeightedGraph read_graph(std::istream& in);

/// Family configuration file: `key = value` lines, '#' comments. The key
/// `family` names a registry entry, `sigma` optionally picks an edge-length
/// choice; every other key is a numeric family parameter.
struct FamilyConfig {
  std::string family;
  std::optional<std::string> sigma;
  Parameters params;
};

FamilyConfig parse_family_config(std::istream& in);
FamilyConfig load_family_config(const std::filesystem::path& path);

/// `spec` is either a path to a config file or an inline
/// `name[:key=value,key=value]` string.
FamilyConfig resolve_family_config(const std::string& spec);

std::string format_double(double v);

}  // namespace iglab
