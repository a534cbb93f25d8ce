#include "fracpack/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "engine_internal.hpp"
#include "fracpack/solvers.hpp"

namespace fracpack {

using detail::CandidateSet;

std::string to_string(PackingKind kind) { return to_string(target_of(kind)); }

std::string to_string(Target target) {
  switch (target) {
    case Target::Packing:
      return "packing";
    case Target::Pseudo:
      return "pseudo";
    case Target::Relative:
      return "relative";
    case Target::WeakPseudo:
      return "weak_pseudo";
    case Target::Weighted:
      return "weighted";
    case Target::Hausdorff:
      return "hausdorff";
  }
  return "?";
}

Target parse_target(std::string_view name) {
  if (name == "packing" || name == "P") return Target::Packing;
  if (name == "pseudo" || name == "R") return Target::Pseudo;
  if (name == "relative" || name == "Ptilde") return Target::Relative;
  if (name == "weak_pseudo" || name == "weak-pseudo" || name == "weak" || name == "r") return Target::WeakPseudo;
  if (name == "weighted" || name == "Q") return Target::Weighted;
  if (name == "hausdorff" || name == "H") return Target::Hausdorff;
  throw std::invalid_argument("unknown premeasure kind '" + std::string(name) + "'");
}

Target target_of(PackingKind kind) {
  switch (kind) {
    case PackingKind::Packing:
      return Target::Packing;
    case PackingKind::Pseudo:
      return Target::Pseudo;
    case PackingKind::Relative:
      return Target::Relative;
    case PackingKind::WeakPseudo:
      return Target::WeakPseudo;
    case PackingKind::Weighted:
      return Target::Weighted;
  }
  return Target::Packing;
}

std::string to_string(Status status) {
  switch (status) {
    case Status::ExactOnGrid:
      return "exact_on_grid";
    case Status::LowerBound:
      return "lower_bound";
    case Status::UpperBound:
      return "upper_bound";
  }
  return "?";
}

PointSet all_points(const FiniteMetricSpace& space) {
  PointSet e(space.size());
  for (size_t i = 0; i < e.size(); ++i) e[i] = i;
  return e;
}

// ---- bands

Band Band::make(Rational r_min, Rational delta, std::vector<Rational> grid) {
  r_min.canonicalize();
  delta.canonicalize();
  for (auto& r : grid) r.canonicalize();
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  Band b{std::move(r_min), std::move(delta), std::move(grid)};
  b.check();
  return b;
}

void Band::check() const {
  if (sgn(r_min) <= 0) throw std::invalid_argument("band r_min must be positive");
  if (delta < r_min) throw std::invalid_argument("band delta must be >= r_min");
  if (grid.empty()) throw std::invalid_argument("band grid is empty");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < r_min || grid[i] > delta) {
      throw std::invalid_argument("grid radius " + fracpack::to_string(grid[i]) + " outside the band [" +
                                  fracpack::to_string(r_min) + ", " + fracpack::to_string(delta) + "]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("band grid must be strictly increasing");
  }
}

Band pairwise_band(const FiniteMetricSpace& space, const PointSet& E, const Rational& r_min, const Rational& delta) {
  std::vector<Rational> grid{delta};
  std::vector<Rational> distances;
  if (E.size() == space.size()) {
    distances = space.distinct_distances();
  } else {
    for (size_t a = 0; a < E.size(); ++a) {
      for (size_t b = a + 1; b < E.size(); ++b) distances.push_back(space.distance(E[a], E[b]));
    }
  }
  for (const auto& d : distances) {
    for (const Rational& r : {d, Rational(d / 2)}) {
      if (r >= r_min && r <= delta) grid.push_back(r);
    }
  }
  return Band::make(r_min, delta, std::move(grid));
}

Band dyadic_band(const Rational& r_min, const Rational& delta) {
  std::vector<Rational> grid{delta};
  Rational r(1);
  while (r > delta) r /= 2;
  for (; r >= r_min; r /= 2) grid.push_back(r);
  return Band::make(r_min, delta, std::move(grid));
}

Band triadic_band(const Rational& r_min, const Rational& delta) {
  std::vector<Rational> grid{delta};
  Rational r(1);
  while (r / 2 > delta) r /= 3;
  for (; r / 2 >= r_min; r /= 3) {
    if (r >= r_min && r <= delta) grid.push_back(r);
    if (r / 2 <= delta) grid.push_back(r / 2);
  }
  return Band::make(r_min, delta, std::move(grid));
}

// ---- serialization

nlohmann::json value_json(const ExtValue& value) {
  if (value.is_infinite()) return "inf";
  const Real& v = value.finite();
  if (v.is_exact()) return fracpack::to_string(v.lower());
  return describe(v);
}

namespace {

nlohmann::json interval_json(const ExtValue& value) {
  if (value.is_infinite()) return nullptr;
  const Real& v = value.finite();
  return nlohmann::json::array({fracpack::to_string(v.lower()), fracpack::to_string(v.upper())});
}

nlohmann::json band_json(const Band& band) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& r : band.grid) grid.push_back(fracpack::to_string(r));
  return {{"r_min", fracpack::to_string(band.r_min)}, {"delta", fracpack::to_string(band.delta)}, {"grid", grid}};
}

}  // namespace

nlohmann::json to_json(const PremeasureResult& result) {
  nlohmann::json j;
  j["value"] = value_json(result.value);
  if (!result.value.is_infinite() && !result.value.finite().is_exact()) j["value_interval"] = interval_json(result.value);
  j["status"] = to_string(result.status);
  j["kind"] = to_string(result.target);
  j["band"] = band_json(result.band);
  j["candidates"] = result.candidates;
  nlohmann::json w = nlohmann::json::array();
  for (const auto& c : result.witness) {
    nlohmann::json item{{"center", c.center}, {"radius", fracpack::to_string(c.radius)}};
    if (c.weight) item["weight"] = fracpack::to_string(*c.weight);
    w.push_back(std::move(item));
  }
  j["witness"] = std::move(w);
  if (result.dual_value) j["dual_value"] = value_json(*result.dual_value);
  return j;
}

// ---- validity

namespace {

std::string pair_text(const std::vector<Constituent>& pi, size_t a, size_t b) {
  std::ostringstream os;
  os << "constituents " << a << " (center " << pi[a].center << ", r=" << fracpack::to_string(pi[a].radius)
     << ") and " << b << " (center " << pi[b].center << ", r=" << fracpack::to_string(pi[b].radius) << ")";
  return os.str();
}

bool balls_meet(const FiniteMetricSpace& space, const Constituent& a, const Constituent& b, const Bitset* within) {
  Bitset ba = detail::ball_bitset(space, a.center, a.radius);
  Bitset bb = detail::ball_bitset(space, b.center, b.radius);
  return within ? ba.intersects(bb, *within) : ba.intersects(bb);
}

}  // namespace

Validity is_valid(PackingKind kind, const std::vector<Constituent>& pi, const FiniteMetricSpace& space,
                  const PointSet& E) {
  const Bitset inE = detail::point_mask(space.size(), E);
  for (size_t a = 0; a < pi.size(); ++a) {
    if (pi[a].center >= space.size() || !inE.test(pi[a].center)) {
      throw std::invalid_argument("constituent " + std::to_string(a) + " has its center outside E");
    }
    if (sgn(pi[a].radius) <= 0) return {false, "constituent " + std::to_string(a) + " has a non-positive radius"};
  }
  if (kind == PackingKind::Weighted) {
    for (size_t a = 0; a < pi.size(); ++a) {
      if (pi[a].weight && sgn(*pi[a].weight) <= 0) {
        return {false, "constituent " + std::to_string(a) + " has a non-positive weight"};
      }
    }
    for (size_t x : E) {
      Rational load(0);
      for (const auto& c : pi) {
        if (space.within(c.center, x, c.radius)) load += c.weight ? *c.weight : Rational(1);
      }
      if (load > 1) return {false, "point " + std::to_string(x) + " carries weight " + fracpack::to_string(load) + " > 1"};
    }
    return {};
  }
  for (size_t a = 0; a < pi.size(); ++a) {
    for (size_t b = a + 1; b < pi.size(); ++b) {
      const auto& A = pi[a];
      const auto& B = pi[b];
      switch (kind) {
        case PackingKind::Packing:
          if (!space.separated(A.center, B.center, A.radius + B.radius)) {
            return {false, pair_text(pi, a, b) + ": distance not > r_i + r_j"};
          }
          break;
        case PackingKind::Pseudo:
          if (!space.separated(A.center, B.center, std::max(A.radius, B.radius))) {
            return {false, pair_text(pi, a, b) + ": distance not > max(r_i, r_j)"};
          }
          break;
        case PackingKind::Relative:
          if (A.center == B.center || balls_meet(space, A, B, nullptr)) {
            return {false, pair_text(pi, a, b) + ": closed balls intersect"};
          }
          break;
        case PackingKind::WeakPseudo:
          if (!space.separated(A.center, B.center, std::max(A.radius, B.radius))) {
            return {false, pair_text(pi, a, b) + ": distance not > max(r_i, r_j)"};
          }
          if (balls_meet(space, A, B, &inE)) return {false, pair_text(pi, a, b) + ": balls share a point of E"};
          break;
        case PackingKind::Weighted:
          break;
      }
    }
  }
  return {};
}

std::vector<Constituent> greedy_maximal_pseudo_packing(const FiniteMetricSpace& space, const PointSet& E,
                                                       const Rational& r) {
  if (sgn(r) <= 0) throw std::invalid_argument("greedy pseudo-packing needs r > 0");
  std::vector<Constituent> family;
  for (size_t x : E) family.push_back({x, r, std::nullopt});
  return greedy_maximal_pseudo_packing(space, family);
}

std::vector<Constituent> greedy_maximal_pseudo_packing(const FiniteMetricSpace& space,
                                                       const std::vector<Constituent>& family) {
  std::vector<size_t> order(family.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return family[a].radius > family[b].radius; });
  std::vector<Constituent> chosen;
  for (size_t idx : order) {
    const auto& c = family[idx];
    bool ok = true;
    for (const auto& y : chosen) {
      if (y.center == c.center || !space.separated(c.center, y.center, std::max(c.radius, y.radius))) {
        ok = false;
        break;
      }
    }
    if (ok) chosen.push_back(c);
  }
  return chosen;
}

// ---- objective

ExtValue term_weight(const Objective& obj, size_t center, const Rational& r) {
  const Rational mass = obj.mu.ball_mass(obj.space, center, r);
  return ext_mul(pow_q(mass, obj.q), ExtValue(eval_h(obj.h, Rational(2 * r))));
}

ExtValue objective_value(const Objective& obj, const std::vector<Constituent>& pi) {
  ExtValue total(Real(0));
  for (const auto& c : pi) {
    ExtValue w = term_weight(obj, c.center, c.radius);
    if (c.weight) w = ext_mul(w, ExtValue(*c.weight));
    total = ext_add(total, w);
  }
  return total;
}

std::vector<Constituent> band_candidates(const PointSet& E, const Band& band) {
  std::vector<Constituent> out;
  out.reserve(E.size() * band.grid.size());
  for (size_t x : E) {
    for (auto it = band.grid.rbegin(); it != band.grid.rend(); ++it) out.push_back({x, *it, std::nullopt});
  }
  return out;
}

size_t amenability_witness_count(const FiniteMetricSpace& space, const std::vector<Constituent>& pi, size_t y) {
  size_t count = 0;
  for (const auto& c : pi) {
    if (space.within(c.center, y, c.radius)) ++count;
  }
  return count;
}

// ---- sup kinds

namespace {

void check_points(const FiniteMetricSpace& space, const PointSet& E) {
  for (size_t i = 0; i < E.size(); ++i) {
    if (E[i] >= space.size()) throw std::out_of_range("E contains an index outside the space");
    if (i > 0 && E[i] <= E[i - 1]) throw std::invalid_argument("E must be sorted without repeats");
  }
}

PremeasureResult base_result(Target target, const Band& band) {
  PremeasureResult r;
  r.value = ExtValue(Real(0));
  r.band = band;
  r.target = target;
  return r;
}

// First infinite-weight candidate, if any.
std::optional<size_t> first_infinite(const CandidateSet& c) {
  for (size_t i = 0; i < c.weight.size(); ++i) {
    if (c.weight[i].is_infinite()) return i;
  }
  return std::nullopt;
}

CandidateSet drop_zero(const CandidateSet& in) {
  CandidateSet out;
  for (size_t i = 0; i < in.items.size(); ++i) {
    if (in.weight[i].is_zero()) continue;
    out.items.push_back(in.items[i]);
    out.weight.push_back(in.weight[i]);
  }
  return out;
}

PremeasureResult solve_sup(PackingKind kind, const Objective& obj, const Band& band, const Gauge* gauge,
                           const EngineLimits& limits) {
  band.check();
  check_points(obj.space, obj.E);
  PremeasureResult res = base_result(target_of(kind), band);
  CandidateSet all = detail::build_candidates(obj, band, gauge);
  res.candidates = all.items.size();
  if (auto inf = first_infinite(all)) {
    res.value = ExtValue::infinity();
    res.witness = {all.items[*inf]};
    return res;
  }
  CandidateSet cand = detail::drop_dominated(drop_zero(all));
  MwisInput in;
  in.node_limit = limits.nodes;
  for (const auto& w : cand.weight) {
    in.weight.push_back(w.approx());
    in.exact.push_back(w.finite());
  }
  in.conflicts = detail::build_conflicts(kind, obj, cand.items);
  const bool too_big = cand.items.size() > limits.bb_candidates;
  MwisOutput out = too_big ? greedy_mwis(in) : solve_mwis(in);
  res.nodes = out.nodes;
  res.status = out.optimal ? Status::ExactOnGrid : Status::LowerBound;
  for (size_t i : out.chosen) res.witness.push_back(cand.items[i]);
  res.value = ExtValue(out.value);
  return res;
}

}  // namespace

PremeasureResult sup_premeasure(PackingKind kind, const Objective& obj, const Band& band, const EngineLimits& limits) {
  if (kind == PackingKind::Weighted) return weighted_premeasure(obj, band, limits);
  return solve_sup(kind, obj, band, nullptr, limits);
}

PremeasureResult gauge_fine_sup(PackingKind kind, const Objective& obj, const Gauge& gauge, const Band& band,
                                const EngineLimits& limits) {
  if (kind != PackingKind::Packing && kind != PackingKind::Pseudo) {
    throw std::invalid_argument("gauge-fine values are defined for packing and pseudo-packing");
  }
  return solve_sup(kind, obj, band, &gauge, limits);
}

// ---- weighted

PremeasureResult weighted_premeasure(const Objective& obj, const Band& band, const EngineLimits& limits) {
  band.check();
  check_points(obj.space, obj.E);
  PremeasureResult res = base_result(Target::Weighted, band);
  CandidateSet all = detail::build_candidates(obj, band, nullptr);
  res.candidates = all.items.size();
  if (auto inf = first_infinite(all)) {
    res.value = ExtValue::infinity();
    Constituent c = all.items[*inf];
    c.weight = Rational(1);
    res.witness = {c};
    return res;
  }
  CandidateSet cand = detail::drop_dominated(drop_zero(all));
  const size_t rows = obj.E.size();
  std::vector<size_t> row_of(obj.space.size(), static_cast<size_t>(-1));
  for (size_t k = 0; k < rows; ++k) row_of[obj.E[k]] = k;

  const size_t cells = rows * (cand.items.size() + rows);
  if (cells > limits.lp_cells) {
    // y_x = heaviest candidate centred at x is dual feasible: every ball contains its centre.
    std::vector<Real> y(rows, Real(0));
    std::vector<bool> seen(rows, false);
    for (size_t i = 0; i < cand.items.size(); ++i) {
      const size_t k = row_of[cand.items[i].center];
      y[k] = seen[k] ? hull_max(y[k], cand.weight[i].finite()) : cand.weight[i].finite();
      seen[k] = true;
    }
    Real total(0);
    for (const auto& v : y) total += v;
    res.value = ExtValue(Real::enclosure(total.upper(), total.upper()));
    res.status = Status::UpperBound;
    res.dual = y;
    res.dual_value = total;
    return res;
  }

  LpInput lp;
  lp.rows = rows;
  for (size_t i = 0; i < cand.items.size(); ++i) {
    Bitset ball = detail::ball_bitset(obj.space, cand.items[i].center, cand.items[i].radius);
    std::vector<size_t> touched;
    ball.for_each([&](size_t y) {
      if (row_of[y] != static_cast<size_t>(-1)) touched.push_back(row_of[y]);
    });
    lp.column_rows.push_back(std::move(touched));
    lp.objective.push_back(cand.weight[i].finite());
  }
  LpOutput out = solve_packing_lp(lp);
  res.status = out.optimal ? Status::ExactOnGrid : Status::LowerBound;
  res.nodes = out.pivots;
  for (size_t i = 0; i < cand.items.size(); ++i) {
    if (sgn(out.primal[i]) > 0) {
      Constituent c = cand.items[i];
      c.weight = out.primal[i];
      res.witness.push_back(std::move(c));
    }
  }
  res.value = ExtValue(out.primal_value);
  res.dual = out.dual;
  res.dual_value = out.dual_value;
  return res;
}

// ---- Hausdorff

PremeasureResult hausdorff_premeasure(const Objective& obj, const Band& band, const EngineLimits& limits) {
  band.check();
  check_points(obj.space, obj.E);
  PremeasureResult res = base_result(Target::Hausdorff, band);
  if (obj.E.empty()) return res;
  CandidateSet all = detail::build_candidates(obj, band, nullptr);
  res.candidates = all.items.size();
  std::vector<size_t> row_of(obj.space.size(), static_cast<size_t>(-1));
  for (size_t k = 0; k < obj.E.size(); ++k) row_of[obj.E[k]] = k;

  CoverInput in;
  in.universe = obj.E.size();
  in.node_limit = limits.nodes;
  std::vector<size_t> source;
  for (size_t i = 0; i < all.items.size(); ++i) {
    if (all.weight[i].is_infinite()) continue;
    Bitset ball = detail::ball_bitset(obj.space, all.items[i].center, all.items[i].radius);
    Bitset over_e(in.universe);
    ball.for_each([&](size_t y) {
      if (row_of[y] != static_cast<size_t>(-1)) over_e.set(row_of[y]);
    });
    in.sets.push_back(std::move(over_e));
    in.weight.push_back(all.weight[i].approx());
    in.exact.push_back(all.weight[i].finite());
    source.push_back(i);
  }
  const bool too_big = in.sets.size() > limits.cover_sets;
  CoverOutput out = too_big ? greedy_cover(in) : solve_cover(in);
  if (!out.feasible) {
    // only infinite-weight balls reach some point: every cover costs infinity
    res.value = ExtValue::infinity();
    const Rational& top = band.grid.back();
    for (size_t x : obj.E) res.witness.push_back({x, top, std::nullopt});
    return res;
  }
  res.status = out.optimal ? Status::ExactOnGrid : Status::UpperBound;
  res.nodes = out.nodes;
  for (size_t s : out.chosen) res.witness.push_back(all.items[source[s]]);
  res.value = ExtValue(out.value);
  return res;
}

PremeasureResult hausdorff_subset_sup(const Objective& obj, const Band& band, const EngineLimits& limits) {
  if (obj.E.size() > 15) throw std::invalid_argument("subset regularization limited to |E| <= 15");
  PremeasureResult best = base_result(Target::Hausdorff, band);
  const size_t n = obj.E.size();
  bool all_exact = true;
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    PointSet F;
    for (size_t k = 0; k < n; ++k) {
      if (mask >> k & 1) F.push_back(obj.E[k]);
    }
    Objective sub{obj.space, F, obj.mu, obj.q, obj.h};
    PremeasureResult r = hausdorff_premeasure(sub, band, limits);
    if (r.status != Status::ExactOnGrid) all_exact = false;
    if (certainly_greater(r.value, best.value)) best = std::move(r);
  }
  best.status = all_exact ? Status::ExactOnGrid : Status::UpperBound;
  return best;
}

PremeasureResult premeasure(Target target, const Objective& obj, const Band& band, const EngineLimits& limits) {
  switch (target) {
    case Target::Packing:
      return sup_premeasure(PackingKind::Packing, obj, band, limits);
    case Target::Pseudo:
      return sup_premeasure(PackingKind::Pseudo, obj, band, limits);
    case Target::Relative:
      return sup_premeasure(PackingKind::Relative, obj, band, limits);
    case Target::WeakPseudo:
      return sup_premeasure(PackingKind::WeakPseudo, obj, band, limits);
    case Target::Weighted:
      return weighted_premeasure(obj, band, limits);
    case Target::Hausdorff:
      return hausdorff_premeasure(obj, band, limits);
  }
  throw std::logic_error("unreachable");
}

}  // namespace fracpack
