#include "fracpack/random_instances.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace fracpack {

namespace {

size_t pick(Rng& rng, size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); }

std::vector<std::string> index_labels(size_t n, const char* prefix) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

Rational min_positive(const std::vector<Rational>& m) {
  Rational best(0);
  for (const auto& d : m) {
    if (sgn(d) > 0 && (sgn(best) == 0 || d < best)) best = d;
  }
  return best;
}

}  // namespace

MeasureOracle random_atomic(Rng& rng, size_t n, bool allow_zero) {
  std::vector<long> raw(n);
  long total = 0;
  for (auto& w : raw) {
    w = static_cast<long>(pick(rng, allow_zero ? 5 : 4)) + (allow_zero ? 0 : 1);
    total += w;
  }
  if (total == 0) {
    raw[pick(rng, n)] = 1;
    total = 1;
  }
  std::vector<Rational> weights;
  for (long w : raw) weights.push_back(Rational(w, total));
  for (auto& w : weights) w.canonicalize();
  return MeasureOracle::atomic(std::move(weights));
}

PointSet random_subset(Rng& rng, size_t n) {
  PointSet E;
  if (pick(rng, 2) == 0) {
    E.resize(n);
    std::iota(E.begin(), E.end(), size_t{0});
    return E;
  }
  for (size_t i = 0; i < n; ++i) {
    if (pick(rng, 3) != 0) E.push_back(i);
  }
  if (E.empty()) E.push_back(pick(rng, n));
  return E;
}

RandomInstance random_ultrametric(Rng& rng, size_t n) {
  std::vector<Rational> heights;
  for (size_t t = 0; t + 1 < n; ++t) {
    heights.push_back(Rational(1, 1u << pick(rng, 5)));
    heights.back().canonicalize();
  }
  std::sort(heights.begin(), heights.end());
  std::vector<std::vector<size_t>> clusters(n);
  for (size_t i = 0; i < n; ++i) clusters[i] = {i};
  std::vector<Rational> m(n * n, Rational(0));
  for (const auto& h : heights) {
    const size_t a = pick(rng, clusters.size());
    size_t b = pick(rng, clusters.size() - 1);
    if (b >= a) ++b;
    for (size_t x : clusters[a]) {
      for (size_t y : clusters[b]) m[x * n + y] = m[y * n + x] = h;
    }
    clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
    clusters.erase(clusters.begin() + static_cast<long>(b));
  }
  Rational res = n > 1 ? Rational(min_positive(m) / 4) : Rational(1, 4);
  auto space = FiniteMetricSpace::exact(index_labels(n, "u"), m, res);
  RandomInstance out{"ultrametric", Instance{std::move(space), random_atomic(rng, n, true)}, {}};
  out.E = random_subset(rng, n);
  return out;
}

RandomInstance random_line(Rng& rng, size_t n) {
  std::set<long> ticks;
  while (ticks.size() < n) ticks.insert(static_cast<long>(pick(rng, 4 * n + 1)));
  std::vector<Rational> xs;
  for (long t : ticks) xs.push_back(Rational(t, 8));
  for (auto& x : xs) x.canonicalize();
  std::vector<Rational> m(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) m[i * n + j] = abs(xs[i] - xs[j]);
  }
  std::vector<std::string> labels;
  for (const auto& x : xs) labels.push_back(to_string(x));
  Rational res = n > 1 ? Rational(min_positive(m) / 4) : Rational(1, 4);
  auto space = FiniteMetricSpace::exact(std::move(labels), m, res);
  RandomInstance out{"line", Instance{std::move(space), random_atomic(rng, n, true)}, {}};
  out.E = random_subset(rng, n);
  return out;
}

RandomInstance random_cloud(Rng& rng, size_t n, int d) {
  std::set<std::vector<long>> seen;
  std::vector<std::vector<Rational>> pts;
  while (pts.size() < n) {
    std::vector<long> key(static_cast<size_t>(d));
    for (auto& k : key) k = static_cast<long>(pick(rng, 17));
    if (!seen.insert(key).second) continue;
    std::vector<Rational> p;
    for (long k : key) {
      Rational c(k, 16);
      c.canonicalize();
      p.push_back(c);
    }
    pts.push_back(std::move(p));
  }
  auto space = build_euclidean_cloud(pts);
  RandomInstance out{"cloud" + std::to_string(d), Instance{std::move(space), random_atomic(rng, n, false)}, {}};
  out.E.resize(n);
  std::iota(out.E.begin(), out.E.end(), size_t{0});
  return out;
}

Rational random_q(Rng& rng) {
  static const Rational qs[] = {Rational(-1), Rational(0), Rational(1, 2), Rational(2)};
  return qs[pick(rng, 4)];
}

HausdorffFunction random_table_h(Rng& rng) {
  std::vector<int> exps{-5, -4, -3, -2, -1, 0, 1};
  std::shuffle(exps.begin(), exps.end(), rng);
  const size_t count = 3 + pick(rng, 2);
  std::vector<int> chosen(exps.begin(), exps.begin() + static_cast<long>(count));
  std::sort(chosen.begin(), chosen.end());
  static const Rational factors[] = {Rational(3, 2), Rational(2), Rational(3), Rational(4)};
  std::vector<std::pair<Rational, Real>> points;
  Rational v(1, 1u << (2 + pick(rng, 4)));
  v.canonicalize();
  for (int e : chosen) {
    Rational r = e >= 0 ? Rational(1u << e) : Rational(1, 1u << -e);
    r.canonicalize();
    points.emplace_back(r, Real(v));
    v *= factors[pick(rng, 4)];
  }
  return HausdorffFunction::table(std::move(points));
}

HausdorffFunction h_variant(Rng& rng, int variant) {
  if (variant == 0) return HausdorffFunction::power(Rational(1));
  if (pick(rng, 2) == 0) return HausdorffFunction::power(Rational(1, 2));
  return random_table_h(rng);
}

Band default_band(const FiniteMetricSpace& space, const PointSet& E) {
  Rational delta = space.resolution();
  for (size_t a = 0; a < E.size(); ++a) {
    for (size_t b = a + 1; b < E.size(); ++b) delta = std::max(delta, space.distance(E[a], E[b]));
  }
  return pairwise_band(space, E, space.resolution(), delta);
}

Band small_band(Rng& rng, const FiniteMetricSpace& space, const PointSet& E, size_t max_radii) {
  Band full = default_band(space, E);
  std::vector<Rational> grid(full.grid.begin(), full.grid.end() - 1);
  std::shuffle(grid.begin(), grid.end(), rng);
  if (max_radii == 0) max_radii = 1;
  if (grid.size() > max_radii - 1) grid.resize(max_radii - 1);
  grid.push_back(full.delta);
  return Band::make(full.r_min, full.delta, std::move(grid));
}

RandomInstance random_exact_instance(Rng& rng, size_t n) {
  return pick(rng, 2) == 0 ? random_ultrametric(rng, n) : random_line(rng, n);
}

}  // namespace fracpack
