#pragma once

// Run configuration: a line-oriented "key = value" text format (see
// README for the full key list), canonical echo for round-tripping,
// a stable content hash, and the run manifest.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "glueopt/optimizer.hpp"
#include "glueopt/problem.hpp"

namespace glueopt::io {

using geometry::DomainSpec;
using geometry::Point2;
using optimizer::Schedule;
using solver::Problem;
using solver::SourceSpec;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  DomainSpec domain = DomainSpec::disc({0, 0}, 1.0);
  SourceSpec source = SourceSpec::constant(1.0);
  double lambda = 1.0;
  double h = 1.0 / 64;
  double cg_tol = 1e-10;
  double p = 4.0;
  unsigned seed = 1;
  std::string out = "out";
  std::string network_path;
  std::vector<Point2> probes;
  std::vector<double> radii;
  bool omega = true;
  Schedule schedule;

  std::uint64_t hash = 0;  // FNV-1a of the raw config text

  Problem make_problem() const;
};

// Throws ConfigError naming the offending key and line.
RunConfig parse_config(std::istream& is, const std::string& name = "<config>");
RunConfig parse_config_file(const std::string& path);
// Canonical serialization; parse(echo(parse(text))) == parse(text).
std::string echo_config(const RunConfig& cfg);

std::uint64_t fnv1a(const std::string& text);
std::string version_string();

// manifest.txt: tool version, config hash, seed, free-form extras.
void write_manifest(const std::string& dir, const RunConfig& cfg,
                    const std::vector<std::pair<std::string, std::string>>& extra);

}  // namespace glueopt::io
