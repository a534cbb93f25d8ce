#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracpack/bitset.hpp"
#include "fracpack/extmath.hpp"
#include "fracpack/hausdorff.hpp"
#include "fracpack/limits.hpp"
#include "fracpack/measures.hpp"
#include "fracpack/metric.hpp"
#include "json.hpp"

namespace fracpack {

enum class PackingKind { Packing, Pseudo, Relative, WeakPseudo, Weighted };
/// Objective targets: the sup kinds plus the centered-cover infimum.
enum class Target { Packing, Pseudo, Relative, WeakPseudo, Weighted, Hausdorff };

std::string to_string(PackingKind kind);
std::string to_string(Target target);
Target parse_target(std::string_view name);
Target target_of(PackingKind kind);

enum class Status { ExactOnGrid, LowerBound, UpperBound };
std::string to_string(Status status);

struct Constituent {
  size_t center = 0;
  Rational radius;
  std::optional<Rational> weight;  // weighted families only
};

/// Sorted subset of point indices.
using PointSet = std::vector<size_t>;
PointSet all_points(const FiniteMetricSpace& space);

struct Band {
  Rational r_min;
  Rational delta;
  std::vector<Rational> grid;  // strictly increasing, inside [r_min, delta]

  /// Sorts and deduplicates; throws when empty or outside the band.
  static Band make(Rational r_min, Rational delta, std::vector<Rational> grid);
  void check() const;
};

/// Distinct pairwise distances and their halves clipped to [r_min, delta], plus delta.
Band pairwise_band(const FiniteMetricSpace& space, const PointSet& E, const Rational& r_min, const Rational& delta);
/// {2^-n} inside the band, plus delta.
Band dyadic_band(const Rational& r_min, const Rational& delta);
/// {3^-j} and {3^-j / 2} inside the band, plus delta.
Band triadic_band(const Rational& r_min, const Rational& delta);

struct PremeasureResult {
  ExtValue value;
  Status status = Status::ExactOnGrid;
  std::vector<Constituent> witness;
  Band band;
  Target target = Target::Packing;
  size_t candidates = 0;
  size_t nodes = 0;
  /// Weighted kind: optimal dual per point of E and its objective.
  std::vector<Real> dual;
  std::optional<Real> dual_value;
};

nlohmann::json to_json(const PremeasureResult& result);
nlohmann::json value_json(const ExtValue& value);

struct Validity {
  bool valid = true;
  std::string violation;
};

/// Checks the kind's clauses exactly as written (strict pairwise inequalities,
/// or per-point weight sums <= 1). Throws when a center is outside E.
Validity is_valid(PackingKind kind, const std::vector<Constituent>& pi, const FiniteMetricSpace& space,
                  const PointSet& E);

/// Index order over E; returns a maximal constant-radius pseudo-packing that covers E.
std::vector<Constituent> greedy_maximal_pseudo_packing(const FiniteMetricSpace& space, const PointSet& E,
                                                       const Rational& r);
/// Maximal pseudo-packing drawn from a mixed-radius family: descending radius,
/// then the family's own order.
std::vector<Constituent> greedy_maximal_pseudo_packing(const FiniteMetricSpace& space,
                                                       const std::vector<Constituent>& family);

struct Objective {
  const FiniteMetricSpace& space;
  const PointSet& E;
  const MeasureOracle& mu;
  Rational q;
  const HausdorffFunction& h;
};

/// mu(B(x, r))^q h(2r) with the 0^q conventions.
ExtValue term_weight(const Objective& obj, size_t center, const Rational& r);

PremeasureResult sup_premeasure(PackingKind kind, const Objective& obj, const Band& band,
                                const EngineLimits& limits = engine_limits());
PremeasureResult weighted_premeasure(const Objective& obj, const Band& band,
                                     const EngineLimits& limits = engine_limits());
PremeasureResult hausdorff_premeasure(const Objective& obj, const Band& band,
                                      const EngineLimits& limits = engine_limits());
/// Dispatch on the target.
PremeasureResult premeasure(Target target, const Objective& obj, const Band& band,
                            const EngineLimits& limits = engine_limits());

/// Sup kinds restricted to candidates with r < gauge(x).
PremeasureResult gauge_fine_sup(PackingKind kind, const Objective& obj, const Gauge& gauge, const Band& band,
                                const EngineLimits& limits = engine_limits());

/// max over non-empty F subset of E of the band Hausdorff value of F; |E| <= 15.
PremeasureResult hausdorff_subset_sup(const Objective& obj, const Band& band,
                                      const EngineLimits& limits = engine_limits());

/// Exhaustive enumeration over the given (center, radius) candidates with its
/// own distance tests; Weighted is not supported.
ExtValue brute_force_oracle(Target target, const Objective& obj, const std::vector<Constituent>& candidates,
                            const EngineLimits& limits = engine_limits());
/// Candidate family the engine uses: E x grid, center ascending then radius descending.
std::vector<Constituent> band_candidates(const PointSet& E, const Band& band);

/// Number of constituents whose closed ball contains y.
size_t amenability_witness_count(const FiniteMetricSpace& space, const std::vector<Constituent>& pi, size_t y);

/// Sum of term weights (times the constituent weight when present).
ExtValue objective_value(const Objective& obj, const std::vector<Constituent>& pi);

}  // namespace fracpack
