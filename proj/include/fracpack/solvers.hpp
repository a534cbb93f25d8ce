#pragma once

#include <vector>

#include "fracpack/bitset.hpp"
#include "fracpack/extmath.hpp"

namespace fracpack {

/// Maximum-weight independent set. Weights are finite and non-negative; the
/// search runs on the double images and settles near-ties with the exact ones.
struct MwisInput {
  std::vector<double> weight;
  std::vector<Real> exact;
  std::vector<Bitset> conflicts;  // symmetric adjacency, no self loops
  size_t node_limit = 20000000;
};

struct MwisOutput {
  std::vector<size_t> chosen;  // ascending
  Real value;
  bool optimal = false;
  size_t nodes = 0;
};

/// Rank order (weight descending, index ascending), first-fit.
MwisOutput greedy_mwis(const MwisInput& in);
MwisOutput solve_mwis(const MwisInput& in);

/// Minimum-weight set cover of {0..universe-1}.
struct CoverInput {
  size_t universe = 0;
  std::vector<Bitset> sets;
  std::vector<double> weight;
  std::vector<Real> exact;
  size_t node_limit = 20000000;
};

struct CoverOutput {
  std::vector<size_t> chosen;  // ascending
  Real value;
  bool feasible = false;
  bool optimal = false;
  size_t nodes = 0;
};

CoverOutput greedy_cover(const CoverInput& in);
CoverOutput solve_cover(const CoverInput& in);

/// max w.c subject to A c <= 1, c >= 0, with A a 0/1 matrix given by the rows
/// each column touches. Exact rational tableau; reduced costs are evaluated on
/// certified enclosures of w.
struct LpInput {
  size_t rows = 0;
  std::vector<std::vector<size_t>> column_rows;
  std::vector<Real> objective;
  size_t pivot_limit = 200000;
};

struct LpOutput {
  std::vector<Rational> primal;  // per column
  std::vector<Real> dual;        // per row
  Real primal_value;
  Real dual_value;
  bool optimal = false;
  size_t pivots = 0;
};

LpOutput solve_packing_lp(const LpInput& in);

}  // namespace fracpack
