#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fracpack/solvers.hpp"

namespace fracpack {

namespace {

double tie_tolerance(double a, double b) { return 1e-11 * std::max({1e-300, std::fabs(a), std::fabs(b)}); }

Real exact_sum(const std::vector<Real>& exact, const std::vector<size_t>& idx) {
  Real total(0);
  for (size_t i : idx) total += exact[i];
  return total;
}

void check_input(const CoverInput& in) {
  const size_t m = in.sets.size();
  if (in.weight.size() != m || in.exact.size() != m) throw std::invalid_argument("cover input sizes differ");
  for (size_t s = 0; s < m; ++s) {
    if (in.sets[s].size() != in.universe) throw std::invalid_argument("cover set has wrong universe size");
    if (!(in.weight[s] >= 0) || !std::isfinite(in.weight[s])) throw std::invalid_argument("cover weights must be finite, >= 0");
  }
}

class CoverSearch {
 public:
  explicit CoverSearch(const CoverInput& in) : in_(in), m_(in.sets.size()) {
    reduce();
    element_sets_.resize(in_.universe);
    for (size_t s : active_) {
      in_.sets[s].for_each([&](size_t e) { element_sets_[e].push_back(s); });
    }
  }

  bool coverable() const {
    for (const auto& list : element_sets_) {
      if (list.empty()) return false;
    }
    return true;
  }

  std::vector<size_t> greedy() const {
    Bitset uncovered(in_.universe);
    uncovered.set_all();
    std::vector<size_t> chosen;
    while (uncovered.any()) {
      size_t pick = Bitset::npos;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (size_t s : active_) {
        const size_t gain = in_.sets[s].and_count(uncovered);
        if (gain == 0) continue;
        const double ratio = in_.weight[s] / static_cast<double>(gain);
        if (ratio < best_ratio) {
          best_ratio = ratio;
          pick = s;
        }
      }
      if (pick == Bitset::npos) break;
      chosen.push_back(pick);
      uncovered.subtract(in_.sets[pick]);
    }
    return chosen;
  }

  void run(std::vector<size_t> start) {
    best_ = std::move(start);
    best_value_ = 0;
    for (size_t s : best_) best_value_ += in_.weight[s];
    best_has_exact_ = false;
    Bitset uncovered(in_.universe);
    uncovered.set_all();
    Bitset allowed(m_);
    for (size_t s : active_) allowed.set(s);
    std::vector<size_t> chosen;
    search(uncovered, allowed, chosen, 0.0);
  }

  const std::vector<size_t>& best() const { return best_; }
  bool aborted() const { return aborted_; }
  size_t nodes() const { return nodes_; }

 private:
  // Drop sets contained in another set of no larger weight (lowest index kept among equals).
  void reduce() {
    for (size_t s = 0; s < m_; ++s) {
      bool dominated = false;
      for (size_t t = 0; t < m_ && !dominated; ++t) {
        if (t == s || !in_.sets[s].subset_of(in_.sets[t])) continue;
        const bool same = in_.sets[t].subset_of(in_.sets[s]);
        const Order o = compare(in_.exact[t], in_.exact[s]);
        if (o == Order::Less) dominated = true;
        if (o == Order::Equal && (!same || t < s)) dominated = true;
      }
      if (!dominated) active_.push_back(s);
    }
  }

  const Real& best_exact() {
    if (!best_has_exact_) {
      best_exact_ = exact_sum(in_.exact, best_);
      best_has_exact_ = true;
    }
    return best_exact_;
  }

  void offer(const std::vector<size_t>& chosen, double value) {
    const double tol = tie_tolerance(value, best_value_);
    if (value > best_value_ + tol) return;
    if (value >= best_value_ - tol) {
      Real ex = exact_sum(in_.exact, chosen);
      if (!certainly_less(ex, best_exact())) return;
      best_exact_ = std::move(ex);
      best_has_exact_ = true;
    } else {
      best_has_exact_ = false;
    }
    best_ = chosen;
    best_value_ = value;
  }

  // sum over uncovered e of min_{S ∋ e} w_S / |S ∩ U|: a dual-feasible LP bound.
  double lower_bound(const Bitset& U, const Bitset& allowed, std::vector<size_t>& gain) const {
    double total = 0;
    U.for_each([&](size_t e) {
      double best = std::numeric_limits<double>::infinity();
      for (size_t s : element_sets_[e]) {
        if (!allowed.test(s)) continue;
        const double r = in_.weight[s] / static_cast<double>(gain[s]);
        best = std::min(best, r);
      }
      total += best;
    });
    return total;
  }

  Real exact_lower_bound(const Bitset& U, const Bitset& allowed, const std::vector<size_t>& gain) const {
    Real total(0);
    U.for_each([&](size_t e) {
      bool first = true;
      Real best;
      for (size_t s : element_sets_[e]) {
        if (!allowed.test(s)) continue;
        Real r = in_.exact[s] / Real(Rational(static_cast<unsigned long>(gain[s])));
        // lower envelope: keep whichever has the smaller lower endpoint
        if (first || r.lower() < best.lower()) best = r;
        first = false;
      }
      total += Real(best.lower());
    });
    return total;
  }

  void search(const Bitset& U, const Bitset& allowed, std::vector<size_t>& chosen, double cost) {
    if (aborted_) return;
    if (++nodes_ > in_.node_limit) {
      aborted_ = true;
      return;
    }
    if (!U.any()) {
      offer(chosen, cost);
      return;
    }
    std::vector<size_t> gain(m_, 0);
    allowed.for_each([&](size_t s) { gain[s] = in_.sets[s].and_count(U); });
    // element with the fewest usable sets
    size_t pivot = Bitset::npos, fewest = std::numeric_limits<size_t>::max();
    bool dead = false;
    U.for_each([&](size_t e) {
      size_t k = 0;
      for (size_t s : element_sets_[e]) k += allowed.test(s) ? 1 : 0;
      if (k == 0) dead = true;
      if (k < fewest) {
        fewest = k;
        pivot = e;
      }
    });
    if (dead) return;
    const double bound = cost + lower_bound(U, allowed, gain);
    const double tol = tie_tolerance(bound, best_value_);
    if (bound > best_value_ + tol) return;
    if (bound >= best_value_ - tol) {
      Real exact_bound = exact_sum(in_.exact, chosen) + exact_lower_bound(U, allowed, gain);
      if (!certainly_less(exact_bound, best_exact())) return;
    }
    std::vector<size_t> options;
    for (size_t s : element_sets_[pivot]) {
      if (allowed.test(s)) options.push_back(s);
    }
    std::stable_sort(options.begin(), options.end(), [&](size_t a, size_t b) {
      return in_.weight[a] * static_cast<double>(gain[b]) < in_.weight[b] * static_cast<double>(gain[a]);
    });
    Bitset still = allowed;
    for (size_t s : options) {
      Bitset next_u = U;
      next_u.subtract(in_.sets[s]);
      still.reset(s);
      chosen.push_back(s);
      search(next_u, still, chosen, cost + in_.weight[s]);
      chosen.pop_back();
      if (aborted_) return;
    }
  }

  const CoverInput& in_;
  size_t m_;
  std::vector<size_t> active_;
  std::vector<std::vector<size_t>> element_sets_;
  std::vector<size_t> best_;
  double best_value_ = 0;
  bool best_has_exact_ = false;
  Real best_exact_;
  size_t nodes_ = 0;
  bool aborted_ = false;
};

CoverOutput finish(const CoverInput& in, std::vector<size_t> chosen, bool optimal, size_t nodes) {
  CoverOutput out;
  std::sort(chosen.begin(), chosen.end());
  out.chosen = std::move(chosen);
  out.value = exact_sum(in.exact, out.chosen);
  out.feasible = true;
  out.optimal = optimal;
  out.nodes = nodes;
  return out;
}

}  // namespace

CoverOutput greedy_cover(const CoverInput& in) {
  check_input(in);
  if (in.universe == 0) return finish(in, {}, true, 0);
  CoverSearch s(in);
  if (!s.coverable()) return CoverOutput{};
  return finish(in, s.greedy(), false, 0);
}

CoverOutput solve_cover(const CoverInput& in) {
  check_input(in);
  if (in.universe == 0) return finish(in, {}, true, 0);
  // elements joined by a common set form independent sub-problems
  std::vector<size_t> parent(in.universe);
  std::iota(parent.begin(), parent.end(), size_t{0});
  auto root = [&](size_t e) {
    while (parent[e] != e) e = parent[e] = parent[parent[e]];
    return e;
  };
  for (const auto& set : in.sets) {
    const size_t first = set.first();
    if (first == Bitset::npos) continue;
    set.for_each([&](size_t e) { parent[root(e)] = root(first); });
  }
  std::vector<size_t> comp_of(in.universe), local(in.universe);
  std::vector<std::vector<size_t>> members;
  std::vector<size_t> id(in.universe, static_cast<size_t>(-1));
  for (size_t e = 0; e < in.universe; ++e) {
    const size_t r = root(e);
    if (id[r] == static_cast<size_t>(-1)) {
      id[r] = members.size();
      members.emplace_back();
    }
    comp_of[e] = id[r];
    local[e] = members[id[r]].size();
    members[id[r]].push_back(e);
  }
  if (members.size() == 1) {
    CoverSearch s(in);
    if (!s.coverable()) return CoverOutput{};
    s.run(s.greedy());
    return finish(in, s.best(), !s.aborted(), s.nodes());
  }
  std::vector<CoverInput> parts(members.size());
  std::vector<std::vector<size_t>> origin(members.size());
  for (size_t c = 0; c < members.size(); ++c) {
    parts[c].universe = members[c].size();
    parts[c].node_limit = in.node_limit;
  }
  for (size_t k = 0; k < in.sets.size(); ++k) {
    const size_t first = in.sets[k].first();
    if (first == Bitset::npos) continue;
    const size_t c = comp_of[first];
    Bitset sub(parts[c].universe);
    in.sets[k].for_each([&](size_t e) { sub.set(local[e]); });
    parts[c].sets.push_back(std::move(sub));
    parts[c].weight.push_back(in.weight[k]);
    parts[c].exact.push_back(in.exact[k]);
    origin[c].push_back(k);
  }
  std::vector<size_t> chosen;
  bool optimal = true;
  size_t nodes = 0;
  for (size_t c = 0; c < parts.size(); ++c) {
    CoverSearch s(parts[c]);
    if (!s.coverable()) return CoverOutput{};
    s.run(s.greedy());
    for (size_t k : s.best()) chosen.push_back(origin[c][k]);
    optimal = optimal && !s.aborted();
    nodes += s.nodes();
  }
  std::sort(chosen.begin(), chosen.end());
  return finish(in, chosen, optimal, nodes);
}

}  // namespace fracpack
