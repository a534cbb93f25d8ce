#pragma once

#include <string>
#include <vector>

#include "doctest.h"
#include "fracpack/extmath.hpp"
#include "fracpack/metric.hpp"
#include "fracpack/packing.hpp"

namespace fpt {

using fracpack::ExtValue;
using fracpack::Rational;
using fracpack::Real;

inline Rational Q(const char* text) { return fracpack::parse_rational(text); }

/// Exact points on the real line with |x - y|.
inline fracpack::FiniteMetricSpace line(const std::vector<Rational>& xs) {
  const size_t n = xs.size();
  std::vector<Rational> m(n * n);
  std::vector<std::string> labels;
  Rational res(0);
  for (size_t i = 0; i < n; ++i) {
    labels.push_back(fracpack::to_string(xs[i]));
    for (size_t j = 0; j < n; ++j) {
      m[i * n + j] = abs(xs[i] - xs[j]);
      if (i != j && (sgn(res) == 0 || m[i * n + j] < res)) res = m[i * n + j];
    }
  }
  if (sgn(res) == 0) res = 1;
  return fracpack::FiniteMetricSpace::exact(labels, m, res / 4);
}

inline fracpack::FiniteMetricSpace integer_line(int n) {
  std::vector<Rational> xs;
  for (int i = 0; i < n; ++i) xs.push_back(Rational(i));
  return line(xs);
}

/// Value is exact and equal to want.
inline bool is_exactly(const ExtValue& v, const Rational& want) {
  return !v.is_infinite() && v.finite().is_exact() && v.finite().lower() == want;
}

/// Enclosure of v contains want to within tol.
inline bool near(const ExtValue& v, double want, double tol = 1e-9) {
  return !v.is_infinite() && std::abs(v.approx() - want) <= tol * (1 + std::abs(want));
}

inline fracpack::Band grid(std::vector<Rational> radii) {
  Rational lo = radii.front(), hi = radii.front();
  for (const auto& r : radii) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return fracpack::Band::make(lo, hi, std::move(radii));
}

}  // namespace fpt
