#include <algorithm>
#include <map>
#include <stdexcept>

#include "engine_internal.hpp"

namespace fracpack::detail {

CandidateSet build_candidates(const Objective& obj, const Band& band, const Gauge* gauge) {
  if (gauge) gauge->check(obj.space.size());
  CandidateSet out;
  for (const Constituent& c : band_candidates(obj.E, band)) {
    if (gauge && !(c.radius < gauge->cap[c.center])) continue;
    out.weight.push_back(term_weight(obj, c.center, c.radius));
    out.items.push_back(c);
  }
  return out;
}

CandidateSet drop_dominated(const CandidateSet& in) {
  CandidateSet out;
  size_t start = 0;
  while (start < in.items.size()) {
    size_t end = start;
    while (end < in.items.size() && in.items[end].center == in.items[start].center) ++end;
    // radii descend inside [start, end): smaller radii sit later
    for (size_t a = start; a < end; ++a) {
      bool dominated = false;
      for (size_t b = a + 1; b < end && !dominated; ++b) {
        const Order o = compare(in.weight[b], in.weight[a]);
        dominated = o == Order::Greater || o == Order::Equal;
      }
      if (!dominated) {
        out.items.push_back(in.items[a]);
        out.weight.push_back(in.weight[a]);
      }
    }
    start = end;
  }
  return out;
}

Bitset ball_bitset(const FiniteMetricSpace& space, size_t center, const Rational& r) {
  Bitset b(space.size());
  space.ball_mask(center, r, b.data());
  return b;
}

Bitset point_mask(size_t n, const PointSet& E) {
  Bitset b(n);
  for (size_t x : E) {
    if (x >= n) throw std::out_of_range("point set index out of range");
    b.set(x);
  }
  return b;
}

std::vector<Bitset> build_conflicts(PackingKind kind, const Objective& obj, const std::vector<Constituent>& items) {
  const size_t m = items.size();
  const FiniteMetricSpace& space = obj.space;
  std::vector<Bitset> rows(m, Bitset(m));
  if (m == 0) return rows;

  // distinct radii and, per radius, the candidate sitting at each point
  std::vector<Rational> radii;
  for (const auto& c : items) radii.push_back(c.radius);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  auto radius_index = [&](const Rational& r) {
    return static_cast<size_t>(std::lower_bound(radii.begin(), radii.end(), r) - radii.begin());
  };
  constexpr size_t none = static_cast<size_t>(-1);
  std::vector<std::vector<size_t>> at_point(radii.size(), std::vector<size_t>(space.size(), none));
  std::vector<size_t> rindex(m);
  for (size_t a = 0; a < m; ++a) {
    rindex[a] = radius_index(items[a].radius);
    at_point[rindex[a]][items[a].center] = a;
  }
  std::vector<std::vector<size_t>> by_center(space.size());
  for (size_t a = 0; a < m; ++a) by_center[items[a].center].push_back(a);

  auto mark = [&](size_t a, size_t b) {
    if (a == b) return;
    rows[a].set(b);
    rows[b].set(a);
  };

  for (const auto& list : by_center) {
    for (size_t a : list) {
      for (size_t b : list) mark(a, b);
    }
  }

  const bool pairwise = kind == PackingKind::Packing || kind == PackingKind::Pseudo || kind == PackingKind::WeakPseudo;
  if (pairwise) {
    Bitset close(space.size());
    for (size_t a = 0; a < m; ++a) {
      for (size_t k = 0; k < radii.size(); ++k) {
        const auto& rb = radii[k];
        const Rational t = kind == PackingKind::Packing ? Rational(items[a].radius + rb) : std::max(items[a].radius, rb);
        space.not_separated_mask(items[a].center, t, close.data());
        close.for_each([&](size_t y) {
          const size_t b = at_point[k][y];
          if (b != none) mark(a, b);
        });
      }
    }
  }

  if (kind == PackingKind::Relative || kind == PackingKind::WeakPseudo) {
    std::vector<Bitset> balls;
    balls.reserve(m);
    for (const auto& c : items) balls.push_back(ball_bitset(space, c.center, c.radius));
    const Bitset inE = point_mask(space.size(), obj.E);
    for (size_t a = 0; a < m; ++a) {
      for (size_t b = a + 1; b < m; ++b) {
        if (rows[a].test(b)) continue;
        const bool hit =
            kind == PackingKind::Relative ? balls[a].intersects(balls[b]) : balls[a].intersects(balls[b], inE);
        if (hit) mark(a, b);
      }
    }
  }
  return rows;
}

}  // namespace fracpack::detail
