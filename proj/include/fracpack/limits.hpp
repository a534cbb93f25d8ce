#pragma once

#include <cstddef>
#include <string_view>

namespace fracpack {

/// Size guards. Defaults can be overridden through FRACPACK_LIMITS, e.g.
/// FRACPACK_LIMITS="bb=4000,nodes=1000000,lp=2000000,product=50000,brute=20,cover=3000".
struct EngineLimits {
  size_t bb_candidates = 2000;   // sup kinds: above this, greedy lower bound
  size_t nodes = 20000000;       // search nodes per solve before giving up on optimality
  size_t lp_cells = 4000000;     // rows x columns of the simplex tableau
  size_t cover_sets = 2000;      // Hausdorff candidate balls
  size_t product_points = 100000;
  size_t brute_candidates = 22;
};

/// Parses "key=value,..." on top of the defaults; throws std::invalid_argument.
EngineLimits parse_limits(std::string_view text);
/// Defaults merged with FRACPACK_LIMITS, read once.
const EngineLimits& engine_limits();

}  // namespace fracpack
