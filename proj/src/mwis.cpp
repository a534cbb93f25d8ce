#include <algorithm>
#include <cmath>
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

class MwisSearch {
 public:
  explicit MwisSearch(const MwisInput& in) : in_(in), n_(in.weight.size()) {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](size_t a, size_t b) { return in_.weight[a] > in_.weight[b]; });
  }

  struct Best {
    std::vector<size_t> set;
    double value = 0;
    bool has_exact = false;
    Real exact;
  };

  // Optimal set inside P (or the best found once the node budget runs out).
  Best solve(const Bitset& P) {
    Best best = greedy(P);
    std::vector<size_t> chosen;
    search(P, chosen, 0.0, best);
    return best;
  }

  Best greedy(const Bitset& P) const {
    Best b;
    Bitset blocked(n_);
    for (size_t idx : order_) {
      if (!P.test(idx) || blocked.test(idx)) continue;
      b.set.push_back(idx);
      b.value += in_.weight[idx];
      blocked |= in_.conflicts[idx];
    }
    return b;
  }

  bool aborted() const { return aborted_; }
  size_t nodes() const { return nodes_; }

 private:
  const Real& best_exact(Best& b) const {
    if (!b.has_exact) {
      b.exact = exact_sum(in_.exact, b.set);
      b.has_exact = true;
    }
    return b.exact;
  }

  // Replace best when the candidate is strictly better; near-ties are settled exactly.
  void offer(std::vector<size_t> set, double value, Best& best) const {
    const double tol = tie_tolerance(value, best.value);
    if (value < best.value - tol) return;
    if (value <= best.value + tol) {
      Real ex = exact_sum(in_.exact, set);
      if (!certainly_less(best_exact(best), ex)) return;
      best.set = std::move(set);
      best.value = value;
      best.exact = std::move(ex);
      best.has_exact = true;
      return;
    }
    best.set = std::move(set);
    best.value = value;
    best.has_exact = false;
  }

  struct Cover {
    double bound = 0;
    std::vector<std::vector<size_t>> cliques;
  };

  // Greedy clique partition of P in rank order; each clique contributes its heaviest member.
  Cover clique_cover(const Bitset& P, bool keep_members) const {
    Cover c;
    std::vector<Bitset> common;
    std::vector<size_t> heads;
    for (size_t idx : order_) {
      if (!P.test(idx)) continue;
      size_t hit = Bitset::npos;
      for (size_t k = 0; k < common.size(); ++k) {
        if (common[k].test(idx)) {
          hit = k;
          break;
        }
      }
      if (hit == Bitset::npos) {
        common.push_back(in_.conflicts[idx]);
        heads.push_back(idx);
        c.bound += in_.weight[idx];
        if (keep_members) c.cliques.push_back({idx});
      } else {
        common[hit] &= in_.conflicts[idx];
        if (keep_members) c.cliques[hit].push_back(idx);
      }
    }
    return c;
  }

  Real exact_cover_bound(const Bitset& P, const std::vector<size_t>& chosen) const {
    Cover c = clique_cover(P, true);
    Real total = exact_sum(in_.exact, chosen);
    for (const auto& clique : c.cliques) {
      Real top = in_.exact[clique[0]];
      for (size_t k = 1; k < clique.size(); ++k) top = hull_max(top, in_.exact[clique[k]]);
      total += top;
    }
    return total;
  }

  std::vector<Bitset> components(const Bitset& P) const {
    std::vector<Bitset> out;
    Bitset rest = P;
    while (rest.any()) {
      Bitset comp(n_), frontier(n_);
      const size_t seed = rest.first();
      frontier.set(seed);
      comp.set(seed);
      rest.reset(seed);
      while (frontier.any()) {
        Bitset next(n_);
        frontier.for_each([&](size_t v) { next |= in_.conflicts[v]; });
        next &= rest;
        rest.subtract(next);
        comp |= next;
        frontier = std::move(next);
      }
      out.push_back(std::move(comp));
    }
    return out;
  }

  void search(const Bitset& P, std::vector<size_t>& chosen, double cur, Best& best) {
    if (aborted_) return;
    if (++nodes_ > in_.node_limit) {
      aborted_ = true;
      return;
    }
    const size_t first = P.first();
    if (first == Bitset::npos) {
      std::vector<size_t> set = chosen;
      offer(std::move(set), cur, best);
      return;
    }
    const double bound = cur + clique_cover(P, false).bound;
    const double tol = tie_tolerance(bound, best.value);
    if (bound < best.value - tol) return;
    if (bound <= best.value + tol) {
      // cannot improve on best unless the exact bound certainly exceeds it
      if (!certainly_less(best_exact(best), exact_cover_bound(P, chosen))) return;
    }
    auto comps = components(P);
    if (comps.size() > 1) {
      std::vector<size_t> set = chosen;
      double total = cur;
      for (const auto& comp : comps) {
        Best sub = solve(comp);  // starts from greedy, so feasible even when aborted
        set.insert(set.end(), sub.set.begin(), sub.set.end());
        total += sub.value;
      }
      offer(std::move(set), total, best);
      return;
    }
    // branch on the heaviest vertex of P
    size_t v = Bitset::npos;
    for (size_t idx : order_) {
      if (P.test(idx)) {
        v = idx;
        break;
      }
    }
    Bitset include = P;
    include.subtract(in_.conflicts[v]);
    include.reset(v);
    chosen.push_back(v);
    search(include, chosen, cur + in_.weight[v], best);
    chosen.pop_back();
    Bitset exclude = P;
    exclude.reset(v);
    search(exclude, chosen, cur, best);
  }

  const MwisInput& in_;
  size_t n_;
  std::vector<size_t> order_;
  size_t nodes_ = 0;
  bool aborted_ = false;
};

void check_input(const MwisInput& in) {
  const size_t n = in.weight.size();
  if (in.exact.size() != n || in.conflicts.size() != n) throw std::invalid_argument("MWIS input sizes differ");
  for (size_t i = 0; i < n; ++i) {
    if (!(in.weight[i] >= 0) || !std::isfinite(in.weight[i])) throw std::invalid_argument("MWIS weights must be finite, >= 0");
    if (in.conflicts[i].size() != n) throw std::invalid_argument("MWIS conflict row has wrong size");
    if (in.conflicts[i].test(i)) throw std::invalid_argument("MWIS conflict rows must not contain self loops");
  }
}

}  // namespace

MwisOutput greedy_mwis(const MwisInput& in) {
  check_input(in);
  MwisSearch s(in);
  Bitset all(in.weight.size());
  all.set_all();
  auto b = s.greedy(all);
  MwisOutput out;
  out.chosen = std::move(b.set);
  std::sort(out.chosen.begin(), out.chosen.end());
  out.value = exact_sum(in.exact, out.chosen);
  out.optimal = in.weight.empty();
  return out;
}

MwisOutput solve_mwis(const MwisInput& in) {
  check_input(in);
  MwisSearch s(in);
  Bitset all(in.weight.size());
  all.set_all();
  auto b = s.solve(all);
  MwisOutput out;
  out.chosen = std::move(b.set);
  std::sort(out.chosen.begin(), out.chosen.end());
  out.value = exact_sum(in.exact, out.chosen);
  out.optimal = !s.aborted();
  out.nodes = s.nodes();
  return out;
}

}  // namespace fracpack
