#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fracpack {

using Rational = mpq_class;

/// Parses "p/q", integers and plain decimals ("0.6309", "-1.5").
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);
/// Exact rational image of a finite double.
Rational rational_from_double(double value);

/// Certified enclosure [lower, upper] of a real number. Exact values have
/// lower == upper and never lose precision; enclosures produced by irrational
/// operations are kept as dyadic bounds of kEnclosureBits relative precision.
class Real {
 public:
  static constexpr long kEnclosureBits = 192;

  Real() = default;
  Real(const Rational& exact) : lo_(exact), hi_(exact) {}  // NOLINT
  Real(long exact) : lo_(exact), hi_(exact) {}             // NOLINT

  static Real enclosure(Rational lo, Rational hi);

  bool is_exact() const { return lo_ == hi_; }
  bool is_zero() const { return is_exact() && sgn(lo_) == 0; }
  const Rational& lower() const { return lo_; }
  const Rational& upper() const { return hi_; }
  /// Exact value; throws std::logic_error for a proper enclosure.
  const Rational& exact() const;
  Rational width() const { return hi_ - lo_; }
  double approx() const;

  Real& operator+=(const Real& other);
  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  /// Divisor must not contain zero.
  friend Real operator/(const Real& a, const Real& b);

 private:
  void round_outward();

  Rational lo_{0};
  Rational hi_{0};
};

enum class Order { Less, Equal, Greater, Overlap };

/// Equal only for identical exact values; Overlap when two enclosures
/// intersect without certifying either ordering.
Order compare(const Real& a, const Real& b);
bool certainly_less(const Real& a, const Real& b);
bool certainly_le(const Real& a, const Real& b);
/// a <= b, where intersecting enclosures count as a tie. Enclosure widths
/// are far below 1e-12 relative, so a tie means agreement to that tolerance.
bool le_or_tied(const Real& a, const Real& b);
const Real& max_by_upper(const Real& a, const Real& b);
Real hull_max(const Real& a, const Real& b);

/// base^exponent for base >= 0 (0^e with e <= 0 is rejected here; use pow_q).
Real pow_real(const Real& base, const Real& exponent);
Real ln_real(const Real& x);

/// Non-negative extended value: a certified enclosure or +infinity.
class ExtValue {
 public:
  ExtValue() = default;
  ExtValue(const Real& value);  // NOLINT
  ExtValue(const Rational& value) : ExtValue(Real(value)) {}  // NOLINT
  static ExtValue infinity();

  bool is_infinite() const { return infinite_; }
  bool is_zero() const { return !infinite_ && value_.is_zero(); }
  bool is_exact() const { return infinite_ || value_.is_exact(); }
  const Real& finite() const;
  double approx() const;

 private:
  bool infinite_ = false;
  Real value_{};
};

ExtValue ext_add(const ExtValue& a, const ExtValue& b);
/// 0 * inf = 0 in either order; x * inf = inf for x > 0.
ExtValue ext_mul(const ExtValue& a, const ExtValue& b);
Order compare(const ExtValue& a, const ExtValue& b);
bool le_or_tied(const ExtValue& a, const ExtValue& b);
bool certainly_greater(const ExtValue& a, const ExtValue& b);

/// base^q with 0^q = inf for q <= 0 and 0^q = 0 for q > 0.
ExtValue pow_q(const Rational& base, const Rational& q);

/// "p/q" when exact, "inf", otherwise a "~" prefixed decimal approximation.
std::string describe(const ExtValue& value);
std::string describe(const Real& value);

}  // namespace fracpack
