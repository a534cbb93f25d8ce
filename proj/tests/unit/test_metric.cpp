#include <random>
#include <set>

#include "fracpack/kernels.hpp"
#include "fracpack/random_instances.hpp"
#include "fracpack/spaces.hpp"
#include "helpers.hpp"

using namespace fracpack;
using namespace fpt;

namespace {

std::set<size_t> members(const FiniteMetricSpace& s, size_t c, const Rational& r) {
  auto v = ball_members(s, c, r);
  return {v.begin(), v.end()};
}

}  // namespace

TEST_SUITE("metric") {
  TEST_CASE("validate_metric examples") {
    auto one = FiniteMetricSpace::exact({"a"}, {Rational(0)}, Rational(1));
    const MetricReport r1 = validate_metric(one);
    CHECK(r1.symmetric);
    CHECK(r1.identity);
    CHECK(r1.triangle);
    CHECK(r1.ultrametric);

    auto l = integer_line(3);
    const MetricReport r2 = validate_metric(l);
    CHECK(r2.triangle);
    CHECK_FALSE(r2.ultrametric);
    CHECK(l.triangle_checked());
    CHECK_FALSE(l.is_ultrametric());

    DaviesSpec spec{{2, 4}, 2, Q("1/2")};
    auto d = build_davies(spec, DaviesMode::Full).space;
    const MetricReport rd = validate_metric(d);
    CHECK(rd.triangle);
    // joined-ness is not transitive: (1,1) ~ (1,0) ~ (2,0) but (1,1) and (2,0) are not joined
    CHECK_FALSE(rd.ultrametric);
    CHECK_FALSE(d.is_ultrametric());
  }

  TEST_CASE("validate_metric flags broken matrices") {
    auto asym = FiniteMetricSpace::exact({"a", "b"}, {Rational(0), Rational(1), Rational(2), Rational(0)}, Q("1/4"));
    CHECK_FALSE(validate_metric(asym).symmetric);
    auto tri = FiniteMetricSpace::exact(
        {"a", "b", "c"},
        {Rational(0), Rational(1), Rational(5), Rational(1), Rational(0), Rational(1), Rational(5), Rational(1), Rational(0)},
        Q("1/4"));
    const MetricReport r = validate_metric(tri);
    CHECK(r.symmetric);
    CHECK_FALSE(r.triangle);
    CHECK_FALSE(r.ultrametric);
  }

  TEST_CASE("ball_members examples") {
    auto l = integer_line(3);
    CHECK(members(l, 1, Rational(1)) == std::set<size_t>{0, 1, 2});
    CHECK(members(l, 0, Rational(1)) == std::set<size_t>{0, 1});
    for (size_t c = 0; c < 3; ++c) CHECK(members(l, c, Rational(0)) == std::set<size_t>{c});

    DaviesSpec spec{{2}, 1, Rational(0)};
    auto d = build_davies(spec, DaviesMode::Full).space;
    REQUIRE(d.size() == 6);
    size_t central = davies_encode(spec, DaviesMode::Full, {{1, 0}});
    // B(u, 1/2) at a central vertex: N central plus N peripheral cylinders... all of G(2) adjacent to it
    const auto ball = members(d, central, Q("1/2"));
    std::set<size_t> want;
    for (size_t i = 0; i < d.size(); ++i) {
      if (davies_joined(davies_decode(spec, DaviesMode::Full, i)[0], DaviesVertex{1, 0})) want.insert(i);
    }
    CHECK(ball == want);
    CHECK(ball.size() == 4);
  }

  TEST_CASE("ball_members is monotone in r") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
      auto ri = random_exact_instance(rng, 7);
      const auto& s = ri.inst.space;
      auto radii = s.distinct_distances();
      for (size_t c = 0; c < s.size(); ++c) {
        for (size_t i = 1; i < radii.size(); ++i) {
          auto small = members(s, c, radii[i - 1]), big = members(s, c, radii[i]);
          CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
          CHECK(small.count(c) == 1);
        }
      }
    }
  }

  TEST_CASE("threshold predicates in exact mode") {
    auto l = integer_line(4);
    CHECK(l.within(0, 2, Rational(2)));
    CHECK_FALSE(l.within(0, 3, Rational(2)));
    CHECK_FALSE(l.separated(0, 2, Rational(2)));
    CHECK(l.separated(0, 3, Rational(2)));
    std::vector<uint64_t> m(1);
    l.not_separated_mask(1, Rational(1), m.data());
    CHECK(m[0] == 0b0111u);
    l.ball_mask(3, Q("1/2"), m.data());
    CHECK(m[0] == 0b1000u);
    CHECK(l.diameter() == 3);
    CHECK(l.distinct_distances() == std::vector<Rational>{Rational(1), Rational(2), Rational(3)});
  }

  TEST_CASE("floating mode uses the tolerance") {
    auto f = FiniteMetricSpace::floating({"a", "b"}, {0.0, 1.0 + 1e-12, 1.0 + 1e-12, 0.0}, Q("1/4"));
    CHECK(f.mode() == NumberMode::Floating);
    CHECK(f.within(0, 1, Rational(1)));
    // within tolerance of equality counts as not separated
    CHECK_FALSE(f.separated(0, 1, Rational(1)));
    CHECK(f.separated(0, 1, Q("99/100")));
  }

  TEST_CASE("product space examples") {
    auto x = line({Rational(0), Rational(3)});
    auto y = line({Rational(0), Rational(1)});
    auto p = product_space(x, y);
    REQUIRE(p.size() == 4);
    CHECK(p.distance(0 * 2 + 0, 1 * 2 + 1) == 3);
    CHECK(p.distance(0, 1) == 1);
    CHECK(p.resolution() == std::max(x.resolution(), y.resolution()));
    CHECK(p.labels()[3] == "(3,1)");
    CHECK(p.has_factors());

    auto one = FiniteMetricSpace::exact({"o"}, {Rational(0)}, Q("1/4"));
    auto iso = product_space(one, y);
    for (size_t i = 0; i < 2; ++i) {
      for (size_t j = 0; j < 2; ++j) CHECK(iso.distance(i, j) == y.distance(i, j));
    }
    CHECK_THROWS_AS(product_space(integer_line(20), integer_line(20), 100), std::length_error);
  }

  TEST_CASE("product balls are products of balls") {
    Rng rng(5);
    for (int t = 0; t < 15; ++t) {
      auto a = random_exact_instance(rng, 5);
      auto b = random_exact_instance(rng, 4);
      const auto& x = a.inst.space;
      const auto& y = b.inst.space;
      auto p = product_space(x, y);
      std::set<Rational> radii;
      for (const auto& r : x.distinct_distances()) radii.insert(r);
      for (const auto& r : y.distinct_distances()) radii.insert(r);
      radii.insert(Rational(0));
      for (const auto& r : radii) {
        for (size_t c = 0; c < p.size(); ++c) {
          std::set<size_t> want;
          for (size_t i : ball_members(x, c / y.size(), r)) {
            for (size_t j : ball_members(y, c % y.size(), r)) want.insert(i * y.size() + j);
          }
          CHECK(members(p, c, r) == want);
        }
      }
      if (x.is_ultrametric() && y.is_ultrametric()) CHECK(validate_metric(p).ultrametric);
    }
  }

  TEST_CASE("product of ultrametric spaces is ultrametric") {
    Rng rng(9);
    auto a = random_ultrametric(rng, 5), b = random_ultrametric(rng, 6);
    auto p = product_space(a.inst.space, b.inst.space);
    CHECK(validate_metric(p).ultrametric);
  }

  TEST_CASE("gauges") {
    auto g = Gauge::constant(3, Q("1/2"));
    CHECK(g.cap.size() == 3);
    CHECK_NOTHROW(g.check(3));
    CHECK_THROWS(g.check(4));
    Gauge bad{{Rational(1), Rational(0)}};
    CHECK_THROWS(bad.check(2));
  }

  TEST_CASE("space JSON round trip") {
    auto l = line({Rational(0), Q("1/3"), Q("5/4")});
    auto back = space_from_json(to_json(l));
    REQUIRE(back.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
      for (size_t j = 0; j < 3; ++j) CHECK(back.distance(i, j) == l.distance(i, j));
    }
    CHECK(back.resolution() == l.resolution());
    CHECK(to_json(l)["distances"][0][2] == "5/4");
  }
}
