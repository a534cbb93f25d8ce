#include "fracpack/measures.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "fracpack/kernels.hpp"

namespace fracpack {

namespace {

Rational pow2_neg(long n) {
  Rational out(1);
  mpz_mul_2exp(out.get_den_mpz_t(), out.get_den_mpz_t(), static_cast<mp_bitcnt_t>(n));
  return out;
}

size_t checked_mul(size_t a, size_t b) {
  if (b != 0 && a > (static_cast<size_t>(1) << 40) / b) throw std::length_error("point count overflow");
  return a * b;
}

}  // namespace

void DaviesSpec::check() const {
  if (depth < 1) throw std::invalid_argument("Davies depth must be >= 1");
  if (N.size() < static_cast<size_t>(depth)) throw std::invalid_argument("Davies N needs one entry per level");
  for (int n = 0; n < depth; ++n) {
    if (N[static_cast<size_t>(n)] < 2) throw std::invalid_argument("Davies N_n must be >= 2");
    if (N[static_cast<size_t>(n)] > 1000000) throw std::invalid_argument("Davies N_n too large");
  }
  if (sgn(q) < 0 || q >= 1) throw std::invalid_argument("Davies q must lie in [0, 1)");
}

std::vector<Rational> gamma_sequence(std::span<const long> N) {
  std::vector<Rational> g{Rational(1)};
  for (long n : N) {
    if (n < 2) throw std::invalid_argument("gamma_sequence: N_n must be >= 2");
    g.push_back(g.back() / Rational(mpz_class(n) * (n + 1)));
  }
  return g;
}

size_t davies_point_count(const DaviesSpec& spec, DaviesMode mode) {
  spec.check();
  size_t count = 1;
  for (int n = 0; n < spec.depth; ++n) {
    const auto v = static_cast<size_t>(spec.N[static_cast<size_t>(n)]);
    count = checked_mul(count, mode == DaviesMode::Full ? v * (v + 1) : v * v);
  }
  return count;
}

DaviesPoint davies_decode(const DaviesSpec& spec, DaviesMode mode, size_t index) {
  DaviesPoint u(static_cast<size_t>(spec.depth));
  for (int n = spec.depth - 1; n >= 0; --n) {
    const long N = spec.N[static_cast<size_t>(n)];
    const auto radix = static_cast<size_t>(mode == DaviesMode::Full ? N * (N + 1) : N * N);
    const auto v = static_cast<long>(index % radix);
    index /= radix;
    if (mode == DaviesMode::Full) {
      u[static_cast<size_t>(n)] = {v / (N + 1) + 1, v % (N + 1)};
    } else {
      u[static_cast<size_t>(n)] = {v / N + 1, v % N + 1};
    }
  }
  if (index != 0) throw std::out_of_range("Davies point index out of range");
  return u;
}

size_t davies_encode(const DaviesSpec& spec, DaviesMode mode, const DaviesPoint& u) {
  if (u.size() != static_cast<size_t>(spec.depth)) throw std::invalid_argument("Davies point has wrong length");
  size_t index = 0;
  for (int n = 0; n < spec.depth; ++n) {
    const long N = spec.N[static_cast<size_t>(n)];
    const auto& w = u[static_cast<size_t>(n)];
    if (w.i < 1 || w.i > N || w.j < 0 || w.j > N) throw std::invalid_argument("Davies vertex out of range");
    if (mode == DaviesMode::PeripheralOnly && w.central()) {
      throw std::invalid_argument("central vertex in a peripheral-only space");
    }
    const auto radix = static_cast<size_t>(mode == DaviesMode::Full ? N * (N + 1) : N * N);
    const auto v = static_cast<size_t>(mode == DaviesMode::Full ? (w.i - 1) * (N + 1) + w.j : (w.i - 1) * N + w.j - 1);
    index = index * radix + v;
  }
  return index;
}

bool davies_joined(const DaviesVertex& a, const DaviesVertex& b) {
  if (a == b) return true;
  if (a.central() && b.central()) return true;
  if (a.central() != b.central()) return a.i == b.i;
  return false;
}

Rational davies_distance(const DaviesPoint& u, const DaviesPoint& v) {
  if (u.size() != v.size()) throw std::invalid_argument("Davies points of different length");
  for (size_t k = 0; k < u.size(); ++k) {
    if (u[k] == v[k]) continue;
    const long n = static_cast<long>(k) + 1;
    return davies_joined(u[k], v[k]) ? pow2_neg(n) : pow2_neg(n - 1);
  }
  return Rational(0);
}

Rational davies_ball_mass(std::span<const long> N, int depth, const DaviesPoint& u, const Rational& r) {
  if (u.size() != static_cast<size_t>(depth) || N.size() < static_cast<size_t>(depth)) {
    throw std::invalid_argument("Davies point does not match the depth");
  }
  if (r >= 1) return Rational(1);
  if (r < pow2_neg(depth)) throw std::domain_error("radius below the truncation resolution 2^-depth");
  // n with 2^-n <= r < 2^-(n-1)
  long n = 1;
  while (r < pow2_neg(n)) ++n;
  auto gamma = gamma_sequence(N.subspan(0, static_cast<size_t>(n)));
  const Rational& g = gamma[static_cast<size_t>(n)];
  const auto& w = u[static_cast<size_t>(n - 1)];
  return w.central() ? Rational(2 * N[static_cast<size_t>(n - 1)] * g) : Rational(2 * g);
}

std::vector<Rational> cantor_points(int k) {
  if (k < 0 || k > 20) throw std::invalid_argument("Cantor level out of range");
  std::vector<Rational> lefts{Rational(0)};
  Rational len(1);
  for (int level = 1; level <= k; ++level) {
    len /= 3;
    std::vector<Rational> next;
    next.reserve(lefts.size() * 2);
    for (const auto& a : lefts) {
      next.push_back(a);
      next.push_back(a + 2 * len);
    }
    lefts.swap(next);
  }
  std::vector<Rational> pts;
  pts.reserve(lefts.size() * 2);
  for (const auto& a : lefts) {
    pts.push_back(a);
    pts.push_back(a + len);
  }
  return pts;
}

Rational cantor_function(const Rational& y) {
  if (sgn(y) <= 0) return Rational(0);
  if (y >= 1) return Rational(1);
  const mpz_class q = y.get_den();
  mpz_class p = y.get_num();
  // Ternary digits of p/q: d = floor(3p/q), p <- 3p - d q. Digits 0/2 emit
  // binary 0/1; the first digit 1 closes the value; a repeated state closes a
  // periodic tail.
  std::map<mpz_class, size_t> seen;
  std::vector<int> bits;
  while (true) {
    auto [it, fresh] = seen.emplace(p, bits.size());
    if (!fresh) {
      const size_t s = it->second;
      const size_t period = bits.size() - s;
      Rational head(0), block(0);
      for (size_t i = 0; i < s; ++i) {
        if (bits[i]) head += pow2_neg(static_cast<long>(i) + 1);
      }
      for (size_t i = s; i < bits.size(); ++i) {
        if (bits[i]) block += pow2_neg(static_cast<long>(i) + 1);
      }
      Rational factor = Rational(1) / (Rational(1) - pow2_neg(static_cast<long>(period)));
      return head + block * factor;
    }
    mpz_class t = 3 * p;
    mpz_class d = t / q;
    p = t - d * q;
    if (d == 1) {
      Rational acc(0);
      for (size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) acc += pow2_neg(static_cast<long>(i) + 1);
      }
      return acc + pow2_neg(static_cast<long>(bits.size()) + 1);
    }
    bits.push_back(d == 2 ? 1 : 0);
  }
}

Rational cantor_ball_mass(int k, const Rational& x, const Rational& r) {
  if (sgn(r) < 0) throw std::invalid_argument("cantor_ball_mass: radius must be >= 0");
  auto pts = cantor_points(k);
  if (!std::binary_search(pts.begin(), pts.end(), x)) {
    throw std::invalid_argument("cantor_ball_mass: center is not a level-" + std::to_string(k) + " endpoint");
  }
  // the natural measure has no atoms: mu([a, b]) = F(b) - F(a)
  return cantor_function(x + r) - cantor_function(x - r);
}

MeasureOracle MeasureOracle::atomic(std::vector<Rational> weights) {
  if (weights.empty()) throw std::invalid_argument("atomic measure needs at least one atom");
  Rational total(0);
  for (const auto& w : weights) {
    if (sgn(w) < 0) throw std::invalid_argument("atomic weights must be non-negative");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("atomic weights must sum to 1, got " + to_string(total));
  return MeasureOracle(Atomic{std::move(weights)});
}

MeasureOracle MeasureOracle::uniform(size_t points) {
  if (points == 0) throw std::invalid_argument("uniform measure needs at least one point");
  return atomic(std::vector<Rational>(points, Rational(1, static_cast<unsigned long>(points))));
}

MeasureOracle MeasureOracle::cantor(int level) {
  if (level < 1 || level > 12) throw std::invalid_argument("Cantor level out of range");
  return MeasureOracle(Cantor{level, cantor_points(level)});
}

MeasureOracle MeasureOracle::davies(DaviesSpec spec, DaviesMode mode) {
  spec.check();
  return MeasureOracle(Davies{std::move(spec), mode});
}

MeasureOracle MeasureOracle::product(const MeasureOracle& left, const MeasureOracle& right) {
  return MeasureOracle(
      Product{std::make_shared<const MeasureOracle>(left), std::make_shared<const MeasureOracle>(right)});
}

size_t MeasureOracle::point_count() const {
  return std::visit(
      [](const auto& v) -> size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          return v.weights.size();
        } else if constexpr (std::is_same_v<T, Cantor>) {
          return v.points.size();
        } else if constexpr (std::is_same_v<T, Davies>) {
          return davies_point_count(v.spec, v.mode);
        } else {
          return v.left->point_count() * v.right->point_count();
        }
      },
      rep_);
}

Rational MeasureOracle::ball_mass(const FiniteMetricSpace& space, size_t center, const Rational& r) const {
  if (center >= space.size()) throw std::out_of_range("ball center out of range");
  if (sgn(r) < 0) throw std::invalid_argument("ball radius must be >= 0");
  return std::visit(
      [&](const auto& v) -> Rational {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          if (v.weights.size() != space.size()) throw std::invalid_argument("atomic measure does not match the space");
          std::vector<uint64_t> mask(kernels::words_for(space.size()));
          space.ball_mask(center, r, mask.data());
          Rational total(0);
          for (size_t w = 0; w < mask.size(); ++w) {
            uint64_t bits = mask[w];
            while (bits) {
              total += v.weights[w * 64 + static_cast<size_t>(__builtin_ctzll(bits))];
              bits &= bits - 1;
            }
          }
          return total;
        } else if constexpr (std::is_same_v<T, Cantor>) {
          if (v.points.size() != space.size()) throw std::invalid_argument("Cantor measure does not match the space");
          return cantor_function(v.points[center] + r) - cantor_function(v.points[center] - r);
        } else if constexpr (std::is_same_v<T, Davies>) {
          auto u = davies_decode(v.spec, v.mode, center);
          return davies_ball_mass(v.spec.N, v.spec.depth, u, r);
        } else {
          if (!space.has_factors()) throw std::invalid_argument("product measure needs a product space");
          const auto& x = space.left_factor();
          const auto& y = space.right_factor();
          return v.left->ball_mass(x, center / y.size(), r) * v.right->ball_mass(y, center % y.size(), r);
        }
      },
      rep_);
}

Rational doubling_estimate(const MeasureOracle& oracle, const FiniteMetricSpace& space, const Rational& a,
                           std::span<const Rational> radius_grid) {
  if (a <= 1) throw std::invalid_argument("doubling_estimate: a must exceed 1");
  Rational best(0);
  for (const auto& r : radius_grid) {
    for (size_t x = 0; x < space.size(); ++x) {
      Rational small = oracle.ball_mass(space, x, r);
      if (sgn(small) == 0) continue;
      Rational ratio = oracle.ball_mass(space, x, Rational(a * r)) / small;
      if (ratio > best) best = ratio;
    }
  }
  return best;
}

nlohmann::json to_json(const MeasureOracle& oracle) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MeasureOracle::Atomic>) {
          nlohmann::json w = nlohmann::json::array();
          for (const auto& x : v.weights) w.push_back(to_string(x));
          return {{"kind", "atomic"}, {"weights", w}};
        } else if constexpr (std::is_same_v<T, MeasureOracle::Cantor>) {
          return {{"kind", "cantor"}, {"level", v.level}};
        } else if constexpr (std::is_same_v<T, MeasureOracle::Davies>) {
          std::vector<long> n(v.spec.N.begin(), v.spec.N.begin() + v.spec.depth);
          return {{"kind", "davies"},
                  {"N", n},
                  {"depth", v.spec.depth},
                  {"q", to_string(v.spec.q)},
                  {"mode", v.mode == DaviesMode::Full ? "full" : "peripheral_only"}};
        } else {
          return {{"kind", "product"}, {"left", to_json(*v.left)}, {"right", to_json(*v.right)}};
        }
      },
      oracle.variant());
}

MeasureOracle measure_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "atomic") {
    std::vector<Rational> w;
    for (const auto& x : j.at("weights")) {
      w.push_back(x.is_string() ? parse_rational(x.get<std::string>()) : Rational(x.get<long>()));
    }
    return MeasureOracle::atomic(std::move(w));
  }
  if (kind == "cantor") return MeasureOracle::cantor(j.at("level").get<int>());
  if (kind == "davies") {
    DaviesSpec spec;
    spec.N = j.at("N").get<std::vector<long>>();
    spec.depth = j.value("depth", static_cast<int>(spec.N.size()));
    if (j.contains("q")) spec.q = parse_rational(j.at("q").get<std::string>());
    const std::string mode = j.value("mode", "full");
    if (mode != "full" && mode != "peripheral_only") throw std::invalid_argument("Davies mode must be full or peripheral_only");
    return MeasureOracle::davies(std::move(spec), mode == "full" ? DaviesMode::Full : DaviesMode::PeripheralOnly);
  }
  if (kind == "product") return MeasureOracle::product(measure_from_json(j.at("left")), measure_from_json(j.at("right")));
  throw std::invalid_argument("unknown measure kind '" + kind + "'");
}

}  // namespace fracpack
