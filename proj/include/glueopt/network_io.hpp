#pragma once

// Plain-text network files.
//
//   nodes <N> edges <M>
//   <x> <y>                 ... N node lines
//   edge <i> <j> <K>
//   <x> <y>                 ... K interior vertex lines
//   ...                     ... M edge blocks
//
// Coordinates are written with 17 significant digits so write/read
// round-trips reproduce doubles exactly.

#include <iosfwd>
#include <string>

#include "glueopt/geometry.hpp"

namespace glueopt::geometry {

struct NetworkParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_network(std::ostream& os, const CurveNetwork& net);
void write_network_file(const std::string& path, const CurveNetwork& net);
CurveNetwork read_network(std::istream& is);
CurveNetwork read_network_file(const std::string& path);

}  // namespace glueopt::geometry
