// Exhaustive reference solver. It shares no code with the search engine:
// distance tests go straight to the metric and every subset is enumerated.
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include "fracpack/packing.hpp"

namespace fracpack {

namespace {

class Tests {
 public:
  explicit Tests(const FiniteMetricSpace& s) : s_(s) {}

  bool le(size_t i, size_t j, const Rational& r) const {
    if (s_.mode() == NumberMode::Exact) return s_.distance(i, j) <= r;
    const double t = r.get_d();
    return s_.distance_approx(i, j) <= t + kFloatTolerance * std::max(1.0, std::fabs(t));
  }

  bool compatible(Target target, const Constituent& a, const Constituent& b, const std::vector<size_t>& E) const {
    if (a.center == b.center) return false;
    const Rational big = a.radius > b.radius ? a.radius : b.radius;
    switch (target) {
      case Target::Packing:
        return !le(a.center, b.center, a.radius + b.radius);
      case Target::Pseudo:
        return !le(a.center, b.center, big);
      case Target::Relative:
        for (size_t y = 0; y < s_.size(); ++y) {
          if (le(a.center, y, a.radius) && le(b.center, y, b.radius)) return false;
        }
        return true;
      case Target::WeakPseudo:
        if (le(a.center, b.center, big)) return false;
        for (size_t y : E) {
          if (le(a.center, y, a.radius) && le(b.center, y, b.radius)) return false;
        }
        return true;
      default:
        throw std::invalid_argument("brute force does not handle this kind");
    }
  }

 private:
  const FiniteMetricSpace& s_;
};

Real exact_sum(const std::vector<ExtValue>& w, uint64_t mask) {
  Real total(0);
  for (size_t i = 0; i < w.size(); ++i) {
    if (mask >> i & 1) total += w[i].finite();
  }
  return total;
}

}  // namespace

ExtValue brute_force_oracle(Target target, const Objective& obj, const std::vector<Constituent>& candidates,
                            const EngineLimits& limits) {
  if (target == Target::Weighted) throw std::invalid_argument("brute force does not handle weighted families");
  const size_t m = candidates.size();
  if (m > limits.brute_candidates || m > 30) {
    throw std::invalid_argument("brute force limited to " + std::to_string(limits.brute_candidates) + " candidates");
  }
  const Tests tests(obj.space);
  std::vector<ExtValue> w;
  std::vector<double> wd;
  for (const auto& c : candidates) {
    const Rational mass = obj.mu.ball_mass(obj.space, c.center, c.radius);
    w.push_back(ext_mul(pow_q(mass, obj.q), ExtValue(eval_h(obj.h, Rational(2 * c.radius)))));
    wd.push_back(w.back().is_infinite() ? 0.0 : w.back().approx());
  }

  if (target == Target::Hausdorff) {
    if (obj.E.empty()) return ExtValue(Real(0));
    if (obj.E.size() > 64) throw std::invalid_argument("brute force cover limited to 64 points");
    std::vector<uint64_t> covers(m, 0);
    for (size_t i = 0; i < m; ++i) {
      for (size_t k = 0; k < obj.E.size(); ++k) {
        if (tests.le(candidates[i].center, obj.E[k], candidates[i].radius)) covers[i] |= uint64_t{1} << k;
      }
    }
    const uint64_t full = obj.E.size() == 64 ? ~uint64_t{0} : (uint64_t{1} << obj.E.size()) - 1;
    std::vector<uint64_t> feasible;
    double best = HUGE_VAL;
    for (uint64_t mask = 0; mask < (uint64_t{1} << m); ++mask) {
      uint64_t got = 0;
      double val = 0;
      bool finite = true;
      for (size_t i = 0; i < m; ++i) {
        if (!(mask >> i & 1)) continue;
        if (w[i].is_infinite()) {
          finite = false;
          break;
        }
        got |= covers[i];
        val += wd[i];
      }
      if (!finite || got != full) continue;
      feasible.push_back(mask);
      best = std::min(best, val);
    }
    if (feasible.empty()) return ExtValue::infinity();
    const double tol = 1e-9 * (1.0 + std::fabs(best));
    std::optional<Real> lo;
    for (uint64_t mask : feasible) {
      double val = 0;
      for (size_t i = 0; i < m; ++i) {
        if (mask >> i & 1) val += wd[i];
      }
      if (val > best + tol) continue;
      const Real v = exact_sum(w, mask);
      if (!lo) {
        lo = v;
      } else {
        lo = Real::enclosure(std::min(lo->lower(), v.lower()), std::min(lo->upper(), v.upper()));
      }
    }
    return ExtValue(*lo);
  }

  for (const auto& v : w) {
    if (v.is_infinite()) return ExtValue::infinity();
  }
  std::vector<uint64_t> ok(m, 0);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      if (i != j && tests.compatible(target, candidates[i], candidates[j], obj.E)) ok[i] |= uint64_t{1} << j;
    }
  }
  // every independent set, by extension from the last index chosen; the
  // first pass finds the double optimum, the second evaluates near-ties exactly
  double best = 0;
  double tol = 0;
  bool second = false;
  Real hi(0);
  bool first = true;
  std::function<void(size_t, uint64_t, uint64_t, double)> grow = [&](size_t from, uint64_t chosen, uint64_t allowed,
                                                                      double val) {
    if (!second) {
      best = std::max(best, val);
    } else if (val >= best - tol) {
      const Real v = exact_sum(w, chosen);
      hi = first ? v : hull_max(hi, v);
      first = false;
    }
    for (size_t i = from; i < m; ++i) {
      if (allowed >> i & 1) grow(i + 1, chosen | uint64_t{1} << i, allowed & ok[i], val + wd[i]);
    }
  };
  const uint64_t everything = m == 64 ? ~uint64_t{0} : (uint64_t{1} << m) - 1;
  grow(0, 0, everything, 0.0);
  tol = 1e-9 * (1.0 + std::fabs(best));
  second = true;
  grow(0, 0, everything, 0.0);
  return ExtValue(hi);
}

}  // namespace fracpack
