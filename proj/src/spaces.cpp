#include "fracpack/spaces.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace fracpack {

namespace {

Rational pow_int(const Rational& base, long e) {
  Rational out(1);
  for (long k = 0; k < e; ++k) out *= base;
  return out;
}

std::string vertex_label(const DaviesPoint& u) {
  std::string s;
  for (const auto& w : u) s += "(" + std::to_string(w.i) + "," + std::to_string(w.j) + ")";
  return s;
}

}  // namespace

Instance build_cantor(int k) {
  if (k < 1 || k > 8) throw std::invalid_argument("Cantor level must be in 1..8");
  auto pts = cantor_points(k);
  const size_t n = pts.size();
  std::vector<std::string> labels;
  labels.reserve(n);
  for (const auto& p : pts) labels.push_back(to_string(p));
  std::vector<Rational> m(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) m[i * n + j] = abs(pts[i] - pts[j]);
  }
  auto space = FiniteMetricSpace::exact(std::move(labels), m, pow_int(Rational(1, 3), k));
  return {std::move(space), MeasureOracle::cantor(k)};
}

Instance build_davies(const DaviesSpec& spec, DaviesMode mode) {
  spec.check();
  const size_t n = davies_point_count(spec, mode);
  if (n > kDaviesPointLimit) {
    throw std::length_error("Davies space has " + std::to_string(n) + " points, above the limit of " +
                            std::to_string(kDaviesPointLimit));
  }
  std::vector<DaviesPoint> pts;
  pts.reserve(n);
  std::vector<std::string> labels;
  labels.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    pts.push_back(davies_decode(spec, mode, i));
    labels.push_back(vertex_label(pts.back()));
  }
  std::vector<Rational> m(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) m[i * n + j] = m[j * n + i] = davies_distance(pts[i], pts[j]);
  }
  auto space = FiniteMetricSpace::exact(std::move(labels), m, pow_int(Rational(1, 2), spec.depth));
  return {std::move(space), MeasureOracle::davies(spec, mode)};
}

HausdorffFunction davies_theorem_h(const DaviesSpec& spec) {
  spec.check();
  auto gamma = gamma_sequence(std::span<const long>(spec.N.data(), static_cast<size_t>(spec.depth)));
  const Real exponent(Rational(1 - spec.q));
  std::vector<std::pair<Rational, Real>> pts;
  for (int n = spec.depth; n >= 1; --n) {
    // radius 2^{-n+2}
    Rational r = n <= 2 ? Rational(mpz_class(1) << (2 - n)) : pow_int(Rational(1, 2), n - 2);
    pts.emplace_back(r, pow_real(Real(gamma[static_cast<size_t>(n)]), exponent));
  }
  return HausdorffFunction::table(std::move(pts));
}

Real davies_series_tail(const DaviesSpec& spec, const HausdorffFunction& h, int m) {
  spec.check();
  if (m < 1 || m > spec.depth) throw std::invalid_argument("series tail start must lie in 1..depth");
  auto gamma = gamma_sequence(std::span<const long>(spec.N.data(), static_cast<size_t>(spec.depth)));
  const Real q(spec.q);
  const Real one_minus_q(Rational(1 - spec.q));
  Real total(0);
  for (int n = m; n <= spec.depth; ++n) {
    const long N = spec.N[static_cast<size_t>(n - 1)];
    Rational r = n <= 2 ? Rational(mpz_class(1) << (2 - n)) : pow_int(Rational(1, 2), n - 2);
    Real term = eval_h(h, r) * pow_real(Real(Rational(2 * N)), q);
    term = term / (Real(Rational(N + 1)) * pow_real(Real(gamma[static_cast<size_t>(n)]), one_minus_q));
    total += term;
  }
  return total;
}

Real davies_convergence_certificate(const DaviesSpec& spec) {
  spec.check();
  Real total(0);
  const Real e(Rational(spec.q - 1));
  for (int n = 0; n < spec.depth; ++n) total += pow_real(Real(Rational(spec.N[static_cast<size_t>(n)])), e);
  return total;
}

mpz_class davies_peripheral_count(const DaviesSpec& spec, int n) {
  spec.check();
  if (n < 0 || n > spec.depth) throw std::invalid_argument("level out of range");
  mpz_class m = 1;
  for (int k = 0; k < n; ++k) m *= mpz_class(spec.N[static_cast<size_t>(k)]) * spec.N[static_cast<size_t>(k)];
  return m;
}

Rational davies_peripheral_mass(const DaviesSpec& spec, int n) {
  spec.check();
  if (n < 0 || n > spec.depth) throw std::invalid_argument("level out of range");
  Rational out(1);
  for (int k = 0; k < n; ++k) {
    const long N = spec.N[static_cast<size_t>(k)];
    out *= Rational(N, static_cast<unsigned long>(N + 1));
  }
  return out;
}

FiniteMetricSpace build_euclidean_cloud(const std::vector<std::vector<Rational>>& points) {
  if (points.empty()) throw std::invalid_argument("cloud needs at least one point");
  if (points.size() > 200) throw std::invalid_argument("cloud limited to 200 points");
  const size_t d = points[0].size();
  if (d < 1 || d > 3) throw std::invalid_argument("cloud dimension must be 1, 2 or 3");
  std::set<std::vector<Rational>> seen;
  for (const auto& p : points) {
    if (p.size() != d) throw std::invalid_argument("cloud points must share one dimension");
    if (!seen.insert(p).second) throw std::invalid_argument("duplicate point in cloud");
  }
  const size_t n = points.size();
  std::vector<double> m(n * n, 0.0);
  double closest = std::numeric_limits<double>::infinity();
  std::vector<std::string> labels;
  for (size_t i = 0; i < n; ++i) {
    std::string label;
    for (size_t k = 0; k < d; ++k) label += (k ? "," : "") + to_string(points[i][k]);
    labels.push_back("(" + label + ")");
    for (size_t j = i + 1; j < n; ++j) {
      Rational sq(0);
      for (size_t k = 0; k < d; ++k) {
        Rational diff = points[i][k] - points[j][k];
        sq += diff * diff;
      }
      double dist = std::sqrt(sq.get_d());
      m[i * n + j] = m[j * n + i] = dist;
      closest = std::min(closest, dist);
    }
  }
  Rational resolution = std::isfinite(closest) ? rational_from_double(closest / 4) : Rational(1);
  return FiniteMetricSpace::floating(std::move(labels), std::move(m), resolution);
}

}  // namespace fracpack
