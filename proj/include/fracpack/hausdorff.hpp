#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fracpack/extmath.hpp"
#include "json.hpp"

namespace fracpack {

/// Gauge function h: h(0) = 0, h(r) > 0 for r > 0, non-decreasing.
class HausdorffFunction {
 public:
  struct PowerLaw {
    Real exponent;
    std::string label;  // descriptor text, e.g. "log2/log3" or "1/2"
  };
  /// Breakpoints strictly increasing in both radius and value; geometric
  /// (log-linear) interpolation between them, power-law extrapolation
  /// outside using the nearest segment's exponent.
  struct Table {
    std::vector<Rational> radii;
    std::vector<Real> values;
  };
  struct Product {
    std::shared_ptr<const HausdorffFunction> left;
    std::shared_ptr<const HausdorffFunction> right;
  };

  static HausdorffFunction power(const Rational& exponent);
  static HausdorffFunction power(const Real& exponent, std::string label);
  /// Exponent ln(a)/ln(b), e.g. the Cantor dimension with a = 2, b = 3.
  static HausdorffFunction power_log_ratio(unsigned long a, unsigned long b);
  static HausdorffFunction table(std::vector<std::pair<Rational, Real>> points);
  static HausdorffFunction product(const HausdorffFunction& left, const HausdorffFunction& right);

  const auto& variant() const { return rep_; }
  std::string descriptor() const;

 private:
  using Rep = std::variant<PowerLaw, Table, Product>;
  explicit HausdorffFunction(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

/// Throws std::invalid_argument for r < 0.
Real eval_h(const HausdorffFunction& h, const Rational& r);

/// max over the grid of h(2r)/h(r).
Real finite_order_estimate(const HausdorffFunction& h, std::span<const Rational> radius_grid);

nlohmann::json to_json(const HausdorffFunction& h);
HausdorffFunction hausdorff_from_json(const nlohmann::json& j);

/// CLI descriptors: "power:1", "power:0.6309", "power:log2/log3",
/// "table:1/4=1/8,1/2=1/4".
HausdorffFunction parse_hausdorff(std::string_view descriptor);

nlohmann::json to_json(const Real& value);
Real real_from_json(const nlohmann::json& j);

}  // namespace fracpack
