#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracpack/packing.hpp"
#include "fracpack/spaces.hpp"
#include "json.hpp"

namespace fracpack {

enum class Verdict { Holds, Fails, Inconclusive };
std::string to_string(Verdict v);

/// One side of a checked relation. upper_ok: the reported value is >= the
/// band value (exact or an upper bound); lower_ok: it is <= the band value.
struct Side {
  std::string label;
  ExtValue value;
  bool upper_ok = true;
  bool lower_ok = true;
  bool guard = false;  // value came from a 0 x inf product
  nlohmann::json witness;

  /// Carries the witness, its validity and its re-evaluated objective.
  static Side of(std::string label, const PremeasureResult& result, const Objective& obj);
  static Side exact(std::string label, ExtValue value);
};

/// Product side; the guard fires on 0 x inf.
Side times(const Side& a, const Side& b);
/// Multiplication by a positive constant.
Side scaled(const Side& a, const Rational& c);

enum class Relation { Le, Lt, Eq };

struct CheckReport {
  std::string name;
  Relation relation = Relation::Le;
  Side left;
  Side right;
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
  nlohmann::json certificate;  // attached to failures
};

CheckReport decide(std::string name, Relation rel, Side left, Side right);
nlohmann::json to_json(const CheckReport& report);
/// Across reports: any fails -> Fails, else any inconclusive -> Inconclusive.
Verdict overall(const std::vector<CheckReport>& reports);

/// Options shared by the theorem checks.
struct CheckOptions {
  EngineLimits limits = engine_limits();
  bool cross_check = true;  // compare against brute force when small enough
};

/// P <= Q <= R, H <= R, P <= r <= R, P <= Ptilde on one band.
std::vector<CheckReport> verify_chain(const Objective& obj, const Band& band, const CheckOptions& opt = {});

/// Two factors with their subsets; h for the left, g for the right factor.
struct ProductSetup {
  const Instance& left;
  const PointSet& E;
  const Instance& right;
  const PointSet& F;
  Rational q;
  const HausdorffFunction& h;
  const HausdorffFunction& g;
  const Band& band;
};

/// H(ExF) <= H(E) R(F) and R(E) H(F) <= R(ExF).
std::vector<CheckReport> verify_theorem_a(const ProductSetup& setup, const CheckOptions& opt = {});
/// P(ExF) <= Q(E) P(F).
CheckReport verify_theorem_c(const ProductSetup& setup, const CheckOptions& opt = {});
/// P <= r <= 3^d P on a Euclidean cloud.
std::vector<CheckReport> verify_theorem_b_bounds(const Objective& obj, const Band& band, int d,
                                                 const CheckOptions& opt = {});

struct AmenabilityStats {
  size_t families = 0;
  size_t max_count = 0;
  size_t bound = 0;
};
/// Random mixed-radius families reduced to maximal pseudo-packings; every
/// point of the space is probed for its witness count.
AmenabilityStats amenability_experiment(const FiniteMetricSpace& space, const Band& band, int d, uint64_t seed,
                                        size_t families);
/// Witness-count bound and R <= 3^d P.
std::vector<CheckReport> verify_amenability(const Objective& obj, const Band& band, int d, uint64_t seed,
                                            const CheckOptions& opt = {});

struct DaviesSeparation {
  Rational lower;  // prod_{k<=n} N_k / (N_k + 1)
  Real upper;      // series tail from n
  std::vector<CheckReport> checks;
  nlohmann::json details;
};
/// Closed-form gap at scale n; engine enumeration when the full space is small.
DaviesSeparation davies_separation(const DaviesSpec& spec, int n, const CheckOptions& opt = {});

struct CantorRow {
  int k = 0;
  PremeasureResult H;
  PremeasureResult P;
  std::optional<PremeasureResult> P_t;
  std::optional<PremeasureResult> P_product;
};
struct CantorTrend {
  std::vector<CantorRow> rows;
  std::vector<CheckReport> checks;
};
/// Band at level k: r_min = 3^-k / 2, delta = scale * 3^-k, triadic grid.
Band cantor_band(int k, const Rational& scale);
/// q = 0, h = r^s, g = r^t with s = t = log2/log3; products for k <= product_max_k.
CantorTrend cantor_trend(int k_lo, int k_hi, const Rational& scale, int product_max_k, const CheckOptions& opt = {});
std::string cantor_csv(const CantorTrend& trend);

}  // namespace fracpack
