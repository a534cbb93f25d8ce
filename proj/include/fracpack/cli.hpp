#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracpack/random_instances.hpp"
#include "fracpack/spaces.hpp"

namespace fracpack {

/// Exit codes of run_cli.
inline constexpr int kExitHolds = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFails = 2;
inline constexpr int kExitInconclusive = 3;

/// Subcommands: space, premeasure, verify, davies, cantor. args excludes the
/// program name. The JSON report goes to --out, or to `out` when absent.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ConfigEntry {
  std::string section;  // empty before the first [section]
  std::string key;
  std::string value;
  int line = 0;
};

/// Raised with "source:line: message".
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "key = value" lines, optional [section] headers, '#' and ';' comments.
std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& source);

/// A space built from a CLI descriptor.
struct LoadedSpace {
  Instance inst;
  std::string family;  // line, cantor, davies, cloud, json, or the random generator
  int dimension = 0;   // Euclidean clouds only
  PointSet E;          // random generators pick a subset; otherwise all points
};

/// "line:0,1,2", "cantor:k=4", "davies:N=2,4;depth=2;q=1/2;mode=full",
/// "cloud:file=points.json", "json:file=space.json",
/// "random:kind=ultrametric|line|exact|cloud;n=6;d=2" (drawn from rng).
LoadedSpace load_space(std::string_view descriptor, Rng& rng);

}  // namespace fracpack
