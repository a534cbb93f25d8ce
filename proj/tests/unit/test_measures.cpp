#include <random>

#include "fracpack/measures.hpp"
#include "fracpack/random_instances.hpp"
#include "fracpack/spaces.hpp"
#include "helpers.hpp"

using namespace fracpack;
using namespace fpt;

namespace {

// Enclosure of the natural Cantor mass of [a, b] by subdividing down to a
// fixed depth: intervals fully inside count, straddling ones stay open.
void cantor_enclosure(const Rational& a, const Rational& b, const Rational& lo, const Rational& len,
                      const Rational& w, int depth, Rational& inside, Rational& open) {
  const Rational hi = lo + len;
  if (b < lo || a > hi) return;
  if (a <= lo && hi <= b) {
    inside += w;
    return;
  }
  if (depth == 0) {
    open += w;
    return;
  }
  const Rational third = len / 3;
  cantor_enclosure(a, b, lo, third, w / 2, depth - 1, inside, open);
  cantor_enclosure(a, b, Rational(lo + 2 * third), third, w / 2, depth - 1, inside, open);
}

}  // namespace

TEST_SUITE("measures") {
  TEST_CASE("atomic masses") {
    auto two = integer_line(2);
    auto u = MeasureOracle::uniform(2);
    CHECK(u.ball_mass(two, 0, Q("1/2")) == Q("1/2"));
    CHECK(u.ball_mass(two, 0, Rational(1)) == 1);
    CHECK(u.point_count() == 2);
    CHECK_THROWS(MeasureOracle::atomic({Q("1/2"), Q("1/3")}));
    CHECK_THROWS(MeasureOracle::atomic({Q("3/2"), Q("-1/2")}));
    auto three = integer_line(3);
    CHECK_THROWS(u.ball_mass(three, 0, Rational(1)));
  }

  TEST_CASE("Davies closed-form examples") {
    const std::vector<long> N{2, 4};
    CHECK(davies_ball_mass(N, 2, {{1, 0}, {1, 0}}, Q("1/2")) == Q("2/3"));
    CHECK(davies_ball_mass(N, 2, {{1, 1}, {1, 0}}, Q("1/2")) == Q("1/3"));
    CHECK(davies_ball_mass(N, 2, {{1, 1}, {2, 3}}, Q("1/4")) == Q("1/60"));
    CHECK(davies_ball_mass(N, 2, {{1, 1}, {2, 0}}, Q("1/4")) == Q("8/120"));
    CHECK(davies_ball_mass(N, 2, {{1, 1}, {2, 3}}, Q("3/8")) == Q("1/60"));
    CHECK(davies_ball_mass(N, 2, {{1, 1}, {2, 3}}, Rational(1)) == 1);
    CHECK_THROWS(davies_ball_mass(N, 2, {{1, 1}, {2, 3}}, Q("1/8")));
  }

  TEST_CASE("Davies closed form equals cylinder enumeration") {
    DaviesSpec spec{{2, 4}, 2, Q("1/2")};
    auto inst = build_davies(spec, DaviesMode::Full);
    REQUIRE(inst.space.size() == 120);
    const Rational cylinder = gamma_sequence(spec.N).back();
    CHECK(cylinder * 120 == 1);
    for (const Rational& r : {Q("1/4"), Q("1/3"), Q("1/2"), Q("3/4"), Rational(1)}) {
      for (size_t c = 0; c < inst.space.size(); ++c) {
        const Rational counted = cylinder * static_cast<long>(ball_members(inst.space, c, r).size());
        CHECK(inst.measure.ball_mass(inst.space, c, r) == counted);
      }
    }
  }

  TEST_CASE("Cantor examples") {
    CHECK(cantor_ball_mass(3, Rational(0), Rational(1)) == 1);
    CHECK(cantor_ball_mass(3, Rational(0), Q("1/3")) == Q("1/2"));
    CHECK(cantor_ball_mass(3, Rational(0), Q("1/9")) == Q("1/4"));
    // [1/6, 5/18] holds half of the level-2 interval [2/9, 1/3]
    CHECK(cantor_ball_mass(2, Q("2/9"), Q("1/18")) == Q("1/8"));
    CHECK(cantor_function(Q("1/3")) == Q("1/2"));
    CHECK(cantor_function(Q("1/4")) == Q("1/3"));
    CHECK(cantor_function(Rational(2)) == 1);
    CHECK(cantor_function(Rational(-1)) == 0);
    CHECK_THROWS(cantor_ball_mass(2, Q("1/2"), Q("1/9")));
  }

  TEST_CASE("Cantor masses agree with subdivision enclosures") {
    for (int k = 1; k <= 6; ++k) {
      const auto pts = cantor_points(k);
      Rational unit(1);
      for (int i = 0; i < k; ++i) unit /= 3;
      const std::vector<Rational> radii{unit / 2, unit, 3 * unit / 2, 3 * unit, Q("1/2"), Rational(1)};
      for (size_t c = 0; c < pts.size(); c += (k > 4 ? 5 : 1)) {
        for (const auto& r : radii) {
          Rational inside(0), open(0);
          cantor_enclosure(Rational(pts[c] - r), Rational(pts[c] + r), Rational(0), Rational(1), Rational(1), 24,
                           inside, open);
          const Rational m = cantor_ball_mass(k, pts[c], r);
          CHECK(inside <= m);
          CHECK(m <= inside + open);
          CHECK(open < Rational(1, 1 << 20));
        }
      }
    }
  }

  TEST_CASE("oracle monotone in r and total mass one") {
    auto c = build_cantor(3);
    DaviesSpec spec{{2, 4}, 2, Rational(0)};
    auto d = build_davies(spec, DaviesMode::Full);
    for (const Instance* inst : {&c, &d}) {
      const auto radii = inst->space.distinct_distances();
      for (size_t x = 0; x < inst->space.size(); ++x) {
        Rational prev(0);
        for (const auto& r : radii) {
          const Rational m = inst->measure.ball_mass(inst->space, x, r);
          CHECK(m >= prev);
          prev = m;
        }
        CHECK(inst->measure.ball_mass(inst->space, x, inst->space.diameter()) == 1);
      }
    }
  }

  TEST_CASE("product oracle factorizes") {
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
      auto a = random_exact_instance(rng, 4);
      auto b = random_exact_instance(rng, 5);
      const auto& mx = a.inst.measure;
      const auto& my = b.inst.measure;
      auto p = product_space(a.inst.space, b.inst.space);
      const auto& wx = std::get<MeasureOracle::Atomic>(mx.variant()).weights;
      const auto& wy = std::get<MeasureOracle::Atomic>(my.variant()).weights;
      std::vector<Rational> w;
      for (const auto& x : wx) {
        for (const auto& y : wy) w.push_back(x * y);
      }
      auto explicit_mu = MeasureOracle::atomic(w);
      auto prod = MeasureOracle::product(mx, my);
      for (const auto& r : p.distinct_distances()) {
        for (size_t c = 0; c < p.size(); ++c) CHECK(prod.ball_mass(p, c, r) == explicit_mu.ball_mass(p, c, r));
      }
    }
    auto one = integer_line(2);
    CHECK_THROWS(MeasureOracle::product(MeasureOracle::uniform(2), MeasureOracle::uniform(2)).ball_mass(one, 0, Rational(1)));
  }

  TEST_CASE("doubling estimates") {
    auto one = FiniteMetricSpace::exact({"a"}, {Rational(0)}, Rational(1));
    const std::vector<Rational> g1{Rational(1)};
    CHECK(doubling_estimate(MeasureOracle::uniform(1), one, Rational(2), g1) == 1);

    auto c = build_cantor(4);
    const auto grid = triadic_band(Q("1/81"), Q("1/3")).grid;
    Rational best(0);
    for (const auto& r : grid) {
      for (size_t x = 0; x < c.space.size(); ++x) {
        const Rational xv = cantor_points(4)[x];
        const Rational small = cantor_ball_mass(4, xv, r);
        best = std::max(best, Rational(cantor_ball_mass(4, xv, Rational(2 * r)) / small));
      }
    }
    CHECK(doubling_estimate(c.measure, c.space, Rational(2), grid) == best);
    CHECK(best > 1);

    DaviesSpec spec{{2, 4}, 2, Rational(0)};
    auto d = build_davies(spec, DaviesMode::Full);
    const Rational cyl = gamma_sequence(spec.N).back();
    const std::vector<Rational> dg{Q("1/4"), Q("1/2")};
    Rational want(0);
    for (const auto& r : dg) {
      for (size_t x = 0; x < d.space.size(); ++x) {
        const auto small = static_cast<long>(ball_members(d.space, x, r).size());
        const auto big = static_cast<long>(ball_members(d.space, x, Rational(2 * r)).size());
        want = std::max(want, Rational(big, small));
      }
    }
    want.canonicalize();
    CHECK(doubling_estimate(d.measure, d.space, Rational(2), dg) == want);
    CHECK_THROWS(doubling_estimate(d.measure, d.space, Rational(1), dg));
  }

  TEST_CASE("measure JSON round trip") {
    DaviesSpec spec{{2, 4}, 2, Q("1/2")};
    auto d = build_davies(spec, DaviesMode::PeripheralOnly);
    auto c = build_cantor(2);
    auto a = MeasureOracle::atomic({Q("1/4"), Q("3/4")});
    for (const MeasureOracle* m : {&d.measure, &c.measure, &a}) {
      auto back = measure_from_json(to_json(*m));
      CHECK(to_json(back) == to_json(*m));
    }
    auto p = MeasureOracle::product(a, a);
    CHECK(to_json(measure_from_json(to_json(p))) == to_json(p));
    CHECK(to_json(c.measure)["kind"] == "cantor");
  }
}
