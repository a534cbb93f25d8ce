#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fracpack/extmath.hpp"
#include "json.hpp"

namespace fracpack {

enum class NumberMode { Exact, Floating };

/// Comparison slack for floating-mode spaces.
inline constexpr double kFloatTolerance = 1e-9;

struct MetricReport {
  bool symmetric = true;
  bool identity = true;
  bool triangle = true;
  bool ultrametric = true;
};

/// Finite indexed point set with a distance oracle. Exact spaces keep their
/// distances as int64 numerators over one common denominator when they fit
/// (every builder in this library does), which lets threshold tests run on
/// integers; other exact inputs fall back to a rational matrix.
class FiniteMetricSpace {
 public:
  static FiniteMetricSpace exact(std::vector<std::string> labels, const std::vector<Rational>& matrix,
                                 Rational resolution);
  static FiniteMetricSpace floating(std::vector<std::string> labels, std::vector<double> matrix,
                                    Rational resolution);

  size_t size() const { return n_; }
  NumberMode mode() const { return mode_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Rational& resolution() const { return resolution_; }
  bool is_ultrametric() const { return ultrametric_; }
  bool triangle_checked() const { return triangle_checked_; }

  /// Exact value; floating spaces return the rational image of the double.
  Rational distance(size_t i, size_t j) const;
  double distance_approx(size_t i, size_t j) const;

  /// rho(i,j) <= r, with +tolerance in floating mode.
  bool within(size_t i, size_t j, const Rational& r) const;
  /// rho(i,j) > t; floating mode demands a margin above the tolerance.
  bool separated(size_t i, size_t j, const Rational& t) const;

  /// Bitset over all points of {y : rho(center, y) <= r}; out has words_for(size()) words.
  void ball_mask(size_t center, const Rational& r, uint64_t* out) const;
  /// Bitset of {y : !(rho(center, y) > t)}, the points too close to be separated.
  void not_separated_mask(size_t center, const Rational& t, uint64_t* out) const;

  Rational diameter() const;
  std::vector<Rational> distinct_distances() const;

  bool has_factors() const { return static_cast<bool>(left_); }
  const FiniteMetricSpace& left_factor() const { return *left_; }
  const FiniteMetricSpace& right_factor() const { return *right_; }

  friend MetricReport validate_metric(FiniteMetricSpace& space);
  friend FiniteMetricSpace product_space(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                         size_t point_limit);

 private:
  FiniteMetricSpace() = default;
  void build_scaled(const std::vector<Rational>& matrix);
  // Integer threshold k with rho <= r iff scaled <= k.
  int64_t scaled_threshold(const Rational& r) const;
  // Fills row i of the scaled/floating matrix into buf (lazy products) or returns the stored row.
  const int64_t* scaled_row(size_t i, std::vector<int64_t>& buf) const;
  const double* float_row(size_t i, std::vector<double>& buf) const;
  void rational_mask(size_t center, const Rational& r, uint64_t* out) const;

  size_t n_ = 0;
  NumberMode mode_ = NumberMode::Exact;
  std::vector<std::string> labels_;
  Rational resolution_{1};
  bool ultrametric_ = false;
  bool triangle_checked_ = false;

  // Exact storage: scaled_ (numerators over denominator_), or rationals_.
  bool integral_ = false;  // exact distances available as scaled int64 rows
  std::vector<int64_t> scaled_;
  mpz_class denominator_{1};
  std::vector<Rational> rationals_;
  // Floating storage.
  std::vector<double> floats_;
  // Set on product spaces; rows of large products are generated from them.
  std::shared_ptr<const FiniteMetricSpace> left_;
  std::shared_ptr<const FiniteMetricSpace> right_;
};

/// Exhaustive pair/triple check; records triangle and ultrametric flags on the space.
MetricReport validate_metric(FiniteMetricSpace& space);

std::vector<size_t> ball_members(const FiniteMetricSpace& space, size_t center, const Rational& r);

inline constexpr size_t kDefaultProductLimit = 100000;

/// Max metric on X x Y; point (i, j) has index i * |Y| + j.
FiniteMetricSpace product_space(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                size_t point_limit = kDefaultProductLimit);

/// Per-point radius cap for gauge-fine families.
struct Gauge {
  std::vector<Rational> cap;
  static Gauge constant(size_t points, const Rational& value);
  void check(size_t points) const;
};

nlohmann::json to_json(const FiniteMetricSpace& space);
FiniteMetricSpace space_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MetricReport& report);

}  // namespace fracpack
