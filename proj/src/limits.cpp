#include "fracpack/limits.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace fracpack {

EngineLimits parse_limits(std::string_view text) {
  EngineLimits out;
  size_t start = 0;
  while (start < text.size()) {
    size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(start, comma - start);
    start = comma + 1;
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("limit entry must be key=value: " + std::string(item));
    std::string key(item.substr(0, eq));
    std::string value(item.substr(eq + 1));
    size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || v == 0) {
      throw std::invalid_argument("limit '" + key + "' needs a positive integer, got '" + value + "'");
    }
    const auto n = static_cast<size_t>(v);
    if (key == "bb") {
      out.bb_candidates = n;
    } else if (key == "nodes") {
      out.nodes = n;
    } else if (key == "lp") {
      out.lp_cells = n;
    } else if (key == "cover") {
      out.cover_sets = n;
    } else if (key == "product") {
      out.product_points = n;
    } else if (key == "brute") {
      if (n > 30) throw std::invalid_argument("brute-force limit above 30 candidates is not supported");
      out.brute_candidates = n;
    } else {
      throw std::invalid_argument("unknown limit '" + key + "'");
    }
  }
  return out;
}

const EngineLimits& engine_limits() {
  static const EngineLimits limits = [] {
    const char* env = std::getenv("FRACPACK_LIMITS");
    return env ? parse_limits(env) : EngineLimits{};
  }();
  return limits;
}

}  // namespace fracpack
