#pragma once

#include <vector>

#include "fracpack/hausdorff.hpp"
#include "fracpack/measures.hpp"
#include "fracpack/metric.hpp"

namespace fracpack {

struct Instance {
  FiniteMetricSpace space;
  MeasureOracle measure;
};

/// Level-k middle-third Cantor endpoints, |x - y| metric, resolution 3^-k.
Instance build_cantor(int k);

inline constexpr size_t kDaviesPointLimit = 100000;

/// Depth-D cylinders of the Davies space (all, or only the all-peripheral
/// ones), resolution 2^-D.
Instance build_davies(const DaviesSpec& spec, DaviesMode mode);

/// h with h(2^{-n+2}) = gamma_n^{1-q} for n = 1..D, geometric in between.
HausdorffFunction davies_theorem_h(const DaviesSpec& spec);

/// sum_{n=m..D} h(2^{-n+2}) (2 N_n)^q / ((N_n + 1) gamma_n^{1-q}).
Real davies_series_tail(const DaviesSpec& spec, const HausdorffFunction& h, int m);

/// sum_{n=1..D} N_n^{-(1-q)}.
Real davies_convergence_certificate(const DaviesSpec& spec);

/// M_n = prod_{k<=n} N_k^2, the number of all-peripheral depth-n cylinders.
mpz_class davies_peripheral_count(const DaviesSpec& spec, int n);

/// M_n gamma_n = prod_{k<=n} N_k / (N_k + 1).
Rational davies_peripheral_mass(const DaviesSpec& spec, int n);

/// Floating-mode Euclidean distances; resolution = min pairwise distance / 4.
FiniteMetricSpace build_euclidean_cloud(const std::vector<std::vector<Rational>>& points);

}  // namespace fracpack
