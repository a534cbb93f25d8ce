#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fracpack/hausdorff.hpp"
#include "fracpack/packing.hpp"
#include "fracpack/spaces.hpp"

namespace fracpack {

using Rng = std::mt19937_64;

/// A generated space, its measure and the subset E the checks run on.
struct RandomInstance {
  std::string name;
  Instance inst;
  PointSet E;
};

/// Hierarchical clustering with dyadic merge heights (exact, ultrametric).
RandomInstance random_ultrametric(Rng& rng, size_t n);
/// Distinct multiples of 1/8 on a line (exact |x - y|).
RandomInstance random_line(Rng& rng, size_t n);
/// Rational-snapped points in [0,1]^d with Euclidean distances (floating mode).
RandomInstance random_cloud(Rng& rng, size_t n, int d);

/// Integer weights in 0..4 normalised; with allow_zero some atoms get mass 0.
MeasureOracle random_atomic(Rng& rng, size_t n, bool allow_zero);
/// Random non-empty subset of 0..n-1, sorted; whole set with probability 1/2.
PointSet random_subset(Rng& rng, size_t n);

/// One of -1, 0, 1/2, 2.
Rational random_q(Rng& rng);
/// Three to four increasing breakpoints with rational values.
HausdorffFunction random_table_h(Rng& rng);
/// variant 0: power 1; variant 1: power 1/2 or a random table.
HausdorffFunction h_variant(Rng& rng, int variant);

/// Pairwise grid on [resolution, largest distance in E] (or a single radius for |E| = 1).
Band default_band(const FiniteMetricSpace& space, const PointSet& E);
/// Pairwise grid restricted to at most max_radii radii, delta included.
Band small_band(Rng& rng, const FiniteMetricSpace& space, const PointSet& E, size_t max_radii);

/// Ultrametric or line instance with a random atomic measure.
RandomInstance random_exact_instance(Rng& rng, size_t n);

}  // namespace fracpack
