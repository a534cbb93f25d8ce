#include <random>

#include "fracpack/solvers.hpp"
#include "helpers.hpp"

using namespace fracpack;
using namespace fpt;

namespace {

struct Graph {
  MwisInput in;
  std::vector<std::vector<bool>> adj;
};

Graph random_graph(std::mt19937_64& rng, size_t n, unsigned density) {
  Graph g;
  g.adj.assign(n, std::vector<bool>(n, false));
  g.in.conflicts.assign(n, Bitset(n));
  for (size_t i = 0; i < n; ++i) {
    const Rational w(static_cast<long>(rng() % 9), static_cast<long>(1 + rng() % 4));
    Rational c = w;
    c.canonicalize();
    g.in.exact.push_back(Real(c));
    g.in.weight.push_back(c.get_d());
    for (size_t j = i + 1; j < n; ++j) {
      if (rng() % 100 < density) {
        g.adj[i][j] = g.adj[j][i] = true;
        g.in.conflicts[i].set(j);
        g.in.conflicts[j].set(i);
      }
    }
  }
  return g;
}

Rational brute_mwis(const Graph& g) {
  const size_t n = g.in.weight.size();
  Rational best(0);
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    bool ok = true;
    Rational sum(0);
    for (size_t i = 0; i < n && ok; ++i) {
      if (!((mask >> i) & 1)) continue;
      sum += g.in.exact[i].exact();
      for (size_t j = i + 1; j < n; ++j) {
        if (((mask >> j) & 1) && g.adj[i][j]) ok = false;
      }
    }
    if (ok) best = std::max(best, sum);
  }
  return best;
}

CoverInput random_cover(std::mt19937_64& rng, size_t universe, size_t sets) {
  CoverInput in;
  in.universe = universe;
  for (size_t k = 0; k < sets; ++k) {
    Bitset b(universe);
    for (size_t e = 0; e < universe; ++e) {
      if (rng() % 3 == 0) b.set(e);
    }
    Rational c(static_cast<long>(1 + rng() % 7), static_cast<long>(1 + rng() % 3));
    c.canonicalize();
    in.sets.push_back(std::move(b));
    in.exact.push_back(Real(c));
    in.weight.push_back(c.get_d());
  }
  return in;
}

// nullopt-free: returns -1 when infeasible
Rational brute_cover(const CoverInput& in) {
  Rational best(-1);
  const size_t m = in.sets.size();
  for (uint64_t mask = 0; mask < (uint64_t{1} << m); ++mask) {
    Bitset covered(in.universe);
    Rational sum(0);
    for (size_t k = 0; k < m; ++k) {
      if ((mask >> k) & 1) {
        covered |= in.sets[k];
        sum += in.exact[k].exact();
      }
    }
    if (covered.count() == in.universe && (best < 0 || sum < best)) best = sum;
  }
  return best;
}

}  // namespace

TEST_SUITE("solvers") {
  TEST_CASE("mwis equals brute force on random graphs") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 80; ++t) {
      const size_t n = 1 + rng() % 16;
      auto g = random_graph(rng, n, static_cast<unsigned>(10 + rng() % 70));
      const MwisOutput out = solve_mwis(g.in);
      CHECK(out.optimal);
      CHECK(out.value.exact() == brute_mwis(g));
      CHECK(std::is_sorted(out.chosen.begin(), out.chosen.end()));
      for (size_t a : out.chosen) {
        for (size_t b : out.chosen) CHECK_FALSE(g.adj[a][b]);
      }
      const MwisOutput gr = greedy_mwis(g.in);
      CHECK(gr.value.exact() <= out.value.exact());
    }
  }

  TEST_CASE("mwis on a path") {
    MwisInput in;
    const size_t n = 5;
    in.conflicts.assign(n, Bitset(n));
    for (size_t i = 0; i + 1 < n; ++i) {
      in.conflicts[i].set(i + 1);
      in.conflicts[i + 1].set(i);
    }
    for (long w : {1, 3, 1, 3, 1}) {
      in.weight.push_back(static_cast<double>(w));
      in.exact.push_back(Real(Rational(w)));
    }
    const MwisOutput out = solve_mwis(in);
    CHECK(out.value.exact() == 6);
    CHECK(out.chosen == std::vector<size_t>{1, 3});
    const MwisOutput gr = greedy_mwis(in);
    CHECK(gr.chosen == std::vector<size_t>{1, 3});
  }

  TEST_CASE("node limit reports non-optimal") {
    std::mt19937_64 rng(5);
    auto g = random_graph(rng, 40, 10);
    g.in.node_limit = 3;
    const MwisOutput out = solve_mwis(g.in);
    CHECK_FALSE(out.optimal);
  }

  TEST_CASE("set cover equals brute force") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 80; ++t) {
      auto in = random_cover(rng, 1 + rng() % 9, 1 + rng() % 12);
      const CoverOutput out = solve_cover(in);
      const Rational want = brute_cover(in);
      if (want < 0) {
        CHECK_FALSE(out.feasible);
        continue;
      }
      REQUIRE(out.feasible);
      CHECK(out.optimal);
      CHECK(out.value.exact() == want);
      Bitset covered(in.universe);
      for (size_t k : out.chosen) covered |= in.sets[k];
      CHECK(covered.count() == in.universe);
      const CoverOutput gr = greedy_cover(in);
      REQUIRE(gr.feasible);
      CHECK(gr.value.exact() >= want);
    }
  }

  TEST_CASE("set cover splits independent blocks") {
    // 40 disjoint blocks of 3 elements, each with a cheap pair and a costly triple
    CoverInput in;
    const size_t blocks = 40;
    in.universe = 3 * blocks;
    for (size_t b = 0; b < blocks; ++b) {
      for (size_t e = 0; e < 3; ++e) {
        Bitset s(in.universe);
        s.set(3 * b + e);
        s.set(3 * b + (e + 1) % 3);
        in.sets.push_back(s);
        in.exact.push_back(Real(Rational(1)));
        in.weight.push_back(1.0);
      }
      Bitset all(in.universe);
      for (size_t e = 0; e < 3; ++e) all.set(3 * b + e);
      in.sets.push_back(all);
      in.exact.push_back(Real(Q("5/2")));
      in.weight.push_back(2.5);
    }
    in.node_limit = 100000;
    const CoverOutput out = solve_cover(in);
    REQUIRE(out.feasible);
    CHECK(out.optimal);
    CHECK(out.value.exact() == 2 * static_cast<long>(blocks));
    CHECK(std::is_sorted(out.chosen.begin(), out.chosen.end()));
  }

  TEST_CASE("empty universe and uncoverable elements") {
    CoverInput in;
    const CoverOutput z = solve_cover(in);
    CHECK(z.feasible);
    CHECK(z.value.is_zero());
    in.universe = 2;
    Bitset s(2);
    s.set(0);
    in.sets.push_back(s);
    in.exact.push_back(Real(Rational(1)));
    in.weight.push_back(1.0);
    CHECK_FALSE(solve_cover(in).feasible);
    CHECK_FALSE(greedy_cover(in).feasible);
  }

  TEST_CASE("packing LP hand examples") {
    // three columns all touching row 1 of a 3-row line: max c0 + c1 + c2 with c0+c1+c2 <= 1 at the middle
    LpInput in;
    in.rows = 3;
    in.column_rows = {{0, 1}, {0, 1, 2}, {1, 2}};
    in.objective = {Real(Rational(2)), Real(Rational(2)), Real(Rational(2))};
    const LpOutput out = solve_packing_lp(in);
    REQUIRE(out.optimal);
    CHECK(out.primal_value.exact() == 2);
    CHECK(out.dual_value.exact() == 2);
    Rational row1(0);
    for (size_t c = 0; c < 3; ++c) row1 += out.primal[c];
    CHECK(row1 <= 1);

    // fractional optimum: triangle of pairwise-overlapping columns
    LpInput tri;
    tri.rows = 3;
    tri.column_rows = {{0, 1}, {1, 2}, {0, 2}};
    tri.objective = {Real(Rational(1)), Real(Rational(1)), Real(Rational(1))};
    const LpOutput t = solve_packing_lp(tri);
    REQUIRE(t.optimal);
    CHECK(t.primal_value.exact() == Q("3/2"));
    CHECK(t.dual_value.exact() == Q("3/2"));
    for (const auto& c : t.primal) CHECK(c == Q("1/2"));
  }

  TEST_CASE("LP primal equals dual on random instances") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 40; ++t) {
      LpInput in;
      in.rows = 2 + rng() % 6;
      const size_t cols = 1 + rng() % 10;
      for (size_t c = 0; c < cols; ++c) {
        std::vector<size_t> rows;
        for (size_t r = 0; r < in.rows; ++r) {
          if (rng() % 2) rows.push_back(r);
        }
        if (rows.empty()) rows.push_back(rng() % in.rows);
        in.column_rows.push_back(rows);
        Rational w(static_cast<long>(rng() % 10), static_cast<long>(1 + rng() % 5));
        w.canonicalize();
        in.objective.push_back(Real(w));
      }
      const LpOutput out = solve_packing_lp(in);
      REQUIRE(out.optimal);
      CHECK(out.primal_value.exact() == out.dual_value.exact());
      std::vector<Rational> load(in.rows, Rational(0));
      Rational obj(0);
      for (size_t c = 0; c < cols; ++c) {
        CHECK(out.primal[c] >= 0);
        obj += out.primal[c] * in.objective[c].exact();
        for (size_t r : in.column_rows[c]) load[r] += out.primal[c];
      }
      for (const auto& l : load) CHECK(l <= 1);
      CHECK(obj == out.primal_value.exact());
      for (size_t c = 0; c < cols; ++c) {
        Real cover(Rational(0));
        for (size_t r : in.column_rows[c]) cover += out.dual[r];
        CHECK(le_or_tied(in.objective[c], cover));
      }
    }
  }
}
