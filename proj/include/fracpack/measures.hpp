#pragma once

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "fracpack/extmath.hpp"
#include "fracpack/metric.hpp"
#include "json.hpp"

namespace fracpack {

struct DaviesSpec {
  std::vector<long> N;  // N_1..N_D, each >= 2
  int depth = 1;
  Rational q{0};  // in [0, 1)
  void check() const;
};

enum class DaviesMode { Full, PeripheralOnly };

/// Vertex (i, j) of G(N): 1 <= i <= N, 0 <= j <= N, j = 0 central.
struct DaviesVertex {
  long i = 1;
  long j = 0;
  bool central() const { return j == 0; }
  bool operator==(const DaviesVertex&) const = default;
};

using DaviesPoint = std::vector<DaviesVertex>;

/// gamma_0 = 1, gamma_n = gamma_{n-1} / (N_n (N_n + 1)).
std::vector<Rational> gamma_sequence(std::span<const long> N);

/// Mixed-radix decoding of a point index, coordinate 1 most significant.
DaviesPoint davies_decode(const DaviesSpec& spec, DaviesMode mode, size_t index);
size_t davies_encode(const DaviesSpec& spec, DaviesMode mode, const DaviesPoint& u);
size_t davies_point_count(const DaviesSpec& spec, DaviesMode mode);
/// Same vertex, both central, or a peripheral vertex and its central neighbour.
bool davies_joined(const DaviesVertex& a, const DaviesVertex& b);
Rational davies_distance(const DaviesPoint& u, const DaviesPoint& v);

/// Closed form: 2 N_n gamma_n (u_n central) or 2 gamma_n (u_n peripheral) for
/// 2^-n <= r < 2^-(n-1); r >= 1 is the whole space. Radii below 2^-depth throw.
Rational davies_ball_mass(std::span<const long> N, int depth, const DaviesPoint& u, const Rational& r);

/// Endpoints of the 2^k level-k basic intervals, ascending.
std::vector<Rational> cantor_points(int k);
/// Cantor function (distribution of the natural measure), exact on rationals.
Rational cantor_function(const Rational& y);
/// Natural measure of [x - r, x + r]; x must be a level-k endpoint.
Rational cantor_ball_mass(int k, const Rational& x, const Rational& r);

class MeasureOracle {
 public:
  struct Atomic {
    std::vector<Rational> weights;
  };
  struct Cantor {
    int level;
    std::vector<Rational> points;
  };
  struct Davies {
    DaviesSpec spec;
    DaviesMode mode;
  };
  struct Product {
    std::shared_ptr<const MeasureOracle> left;
    std::shared_ptr<const MeasureOracle> right;
  };

  /// Weights non-negative, summing to 1.
  static MeasureOracle atomic(std::vector<Rational> weights);
  static MeasureOracle uniform(size_t points);
  static MeasureOracle cantor(int level);
  static MeasureOracle davies(DaviesSpec spec, DaviesMode mode);
  static MeasureOracle product(const MeasureOracle& left, const MeasureOracle& right);

  /// Exact mass of the closed ball. Product oracles need a product space.
  Rational ball_mass(const FiniteMetricSpace& space, size_t center, const Rational& r) const;
  Rational total_mass() const { return Rational(1); }
  /// Number of points the oracle describes, checked against the space.
  size_t point_count() const;

  const auto& variant() const { return rep_; }

 private:
  using Rep = std::variant<Atomic, Cantor, Davies, Product>;
  explicit MeasureOracle(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

/// max over grid radii and centers of positive mass of mu(B(x, a r)) / mu(B(x, r)).
Rational doubling_estimate(const MeasureOracle& oracle, const FiniteMetricSpace& space, const Rational& a,
                           std::span<const Rational> radius_grid);

nlohmann::json to_json(const MeasureOracle& oracle);
MeasureOracle measure_from_json(const nlohmann::json& j);

}  // namespace fracpack
