#pragma once

#include <vector>

#include "fracpack/bitset.hpp"
#include "fracpack/packing.hpp"

namespace fracpack::detail {

struct CandidateSet {
  std::vector<Constituent> items;  // center ascending, radius descending
  std::vector<ExtValue> weight;
};

/// E x grid with term weights; gauge (optional) keeps r < cap(center) only.
CandidateSet build_candidates(const Objective& obj, const Band& band, const Gauge* gauge);

/// Keeps (x, r') only when no smaller radius at x has a certainly-not-smaller
/// weight. Conflicts (and LP columns) grow with the radius, so this never
/// changes an optimum.
CandidateSet drop_dominated(const CandidateSet& in);

/// Closed ball over all points of the space.
Bitset ball_bitset(const FiniteMetricSpace& space, size_t center, const Rational& r);
Bitset point_mask(size_t n, const PointSet& E);

/// Symmetric conflict rows for the pairwise clause of a sup kind; candidates at
/// the same center always conflict.
std::vector<Bitset> build_conflicts(PackingKind kind, const Objective& obj, const std::vector<Constituent>& items);

}  // namespace fracpack::detail
