#include <cmath>

#include "fracpack/random_instances.hpp"
#include "fracpack/spaces.hpp"
#include "helpers.hpp"

using namespace fracpack;
using namespace fpt;

namespace {

// Digits of x in base 3, for x = p / 3^k with 0 <= x <= 1; 1 = 0.222...
bool cantor_digits(const Rational& x, int k) {
  if (x == 1) return true;
  mpz_class scale = 1;
  for (int i = 0; i < k; ++i) scale *= 3;
  mpq_class s = x * scale;
  s.canonicalize();
  if (s.get_den() != 1) return false;
  mpz_class v = s.get_num();
  // a right endpoint ...1000 may be rewritten ...0222
  std::vector<int> digits;
  for (int i = 0; i < k; ++i) {
    mpz_class d = v % 3;
    digits.push_back(static_cast<int>(d.get_si()));
    v /= 3;
  }
  size_t first = 0;
  while (first < digits.size() && digits[first] == 0) ++first;
  if (first < digits.size() && digits[first] == 1) {
    for (size_t i = first + 1; i < digits.size(); ++i) {
      if (digits[i] == 1) return false;
    }
    return true;
  }
  for (int d : digits) {
    if (d == 1) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("spaces") {
  TEST_CASE("Cantor builder") {
    auto c1 = build_cantor(1);
    CHECK(c1.space.labels() == std::vector<std::string>{"0", "1/3", "2/3", "1"});
    auto c2 = build_cantor(2);
    CHECK(c2.space.size() == 8);
    const auto& labs = c2.space.labels();
    CHECK(std::find(labs.begin(), labs.end(), "2/9") != labs.end());
    CHECK(std::find(labs.begin(), labs.end(), "7/9") != labs.end());
    for (int k = 1; k <= 6; ++k) {
      auto c = build_cantor(k);
      CHECK(c.space.diameter() == 1);
      CHECK(c.space.size() == (size_t{2} << k));
      Rational res(1);
      for (int i = 0; i < k; ++i) res /= 3;
      CHECK(c.space.resolution() == res);
      for (const auto& p : cantor_points(k)) CHECK(cantor_digits(p, k));
    }
    CHECK_THROWS(build_cantor(0));
    CHECK_THROWS(build_cantor(9));
  }

  TEST_CASE("Davies builder") {
    DaviesSpec s1{{2}, 1, Rational(0)};
    auto d1 = build_davies(s1, DaviesMode::Full);
    CHECK(d1.space.size() == 6);
    CHECK(d1.space.resolution() == Q("1/2"));

    DaviesSpec spec{{2, 4}, 2, Q("1/2")};
    // both central at the first differing coordinate
    CHECK(davies_distance({{1, 0}, {1, 0}}, {{2, 0}, {1, 0}}) == Q("1/2"));
    CHECK(davies_distance({{1, 1}, {1, 0}}, {{1, 1}, {3, 0}}) == Q("1/4"));
    // peripheral vertices with different central neighbours
    CHECK(davies_distance({{1, 1}, {1, 0}}, {{2, 1}, {1, 0}}) == Rational(1));
    CHECK(davies_distance({{1, 1}, {1, 2}}, {{1, 1}, {2, 2}}) == Q("1/2"));
    // same central neighbour, different peripheral j
    CHECK(davies_distance({{1, 1}, {1, 0}}, {{1, 2}, {1, 0}}) == Rational(1));
    // peripheral and its central vertex are joined
    CHECK(davies_distance({{1, 1}, {1, 0}}, {{1, 0}, {1, 0}}) == Q("1/2"));

    auto full = build_davies(spec, DaviesMode::Full);
    CHECK(full.space.size() == 120);
    const MetricReport rep = validate_metric(full.space);
    CHECK(rep.triangle);
    CHECK_FALSE(rep.ultrametric);
    const DaviesPoint a{{1, 1}, {1, 0}}, b{{1, 0}, {1, 0}}, c{{2, 0}, {1, 0}};
    CHECK(davies_distance(a, b) == Q("1/2"));
    CHECK(davies_distance(b, c) == Q("1/2"));
    CHECK(davies_distance(a, c) == Rational(1));
    auto per = build_davies(spec, DaviesMode::PeripheralOnly);
    CHECK(per.space.size() == 64);
    CHECK(davies_point_count(spec, DaviesMode::PeripheralOnly) == 64);
    CHECK(davies_peripheral_count(spec, 2) == 64);
    for (size_t i = 0; i < full.space.size(); ++i) CHECK(davies_encode(spec, DaviesMode::Full, davies_decode(spec, DaviesMode::Full, i)) == i);
    DaviesSpec huge{{100, 100, 100}, 3, Rational(0)};
    CHECK_THROWS_AS(build_davies(huge, DaviesMode::Full), std::length_error);
    DaviesSpec bad{{1, 4}, 2, Rational(0)};
    CHECK_THROWS(bad.check());
    DaviesSpec badq{{2, 4}, 2, Rational(1)};
    CHECK_THROWS(badq.check());
  }

  TEST_CASE("gamma sequence") {
    CHECK(gamma_sequence(std::vector<long>{2}) == std::vector<Rational>{Rational(1), Q("1/6")});
    CHECK(gamma_sequence(std::vector<long>{2, 4}) == std::vector<Rational>{Rational(1), Q("1/6"), Q("1/120")});
    // recurrence evaluated independently: 5440 * 64 * 65
    const auto g = gamma_sequence(std::vector<long>{4, 16, 64});
    REQUIRE(g.size() == 4);
    CHECK(g[1] == Q("1/20"));
    CHECK(g[2] == Q("1/5440"));
    CHECK(g[3] == Rational(1, 5440 * 64 * 65));
    CHECK(g[3] == Q("1/22630400"));
  }

  TEST_CASE("cylinder and peripheral masses") {
    DaviesSpec spec{{2, 4}, 2, Q("1/2")};
    auto full = build_davies(spec, DaviesMode::Full);
    const Rational cyl = gamma_sequence(spec.N).back();
    CHECK(cyl * static_cast<long>(full.space.size()) == 1);
    CHECK(davies_peripheral_mass(spec, 1) == Q("2/3"));
    CHECK(davies_peripheral_mass(spec, 2) == Q("8/15"));
    // enumeration: all-peripheral depth-2 cylinders times their mass
    size_t per = 0;
    for (size_t i = 0; i < full.space.size(); ++i) {
      const auto u = davies_decode(spec, DaviesMode::Full, i);
      if (!u[0].central() && !u[1].central()) ++per;
    }
    CHECK(per == 64);
    CHECK(cyl * static_cast<long>(per) == davies_peripheral_mass(spec, 2));
    DaviesSpec big{{4, 16, 64}, 3, Q("1/2")};
    CHECK(davies_peripheral_count(big, 3) == mpz_class(16 * 256 * 4096));
    CHECK(davies_peripheral_mass(big, 3) == Q("4/5") * Q("16/17") * Q("64/65"));
    CHECK(davies_peripheral_mass(big, 3) == Q("4096/5525"));
  }

  TEST_CASE("Davies theorem h and series tail") {
    DaviesSpec spec{{4, 16, 64}, 3, Q("1/2")};
    const auto h = davies_theorem_h(spec);
    const auto g = gamma_sequence(spec.N);
    // h(2^{-n+2}) = gamma_n^{1/2}
    CHECK(near(eval_h(h, Rational(2)), std::sqrt(1.0 / 20), 1e-13));
    CHECK(near(eval_h(h, Rational(1)), std::sqrt(1.0 / 5440), 1e-13));
    CHECK(near(eval_h(h, Q("1/2")), std::sqrt(1.0 / 22630400), 1e-13));
    const Real t3 = davies_series_tail(spec, h, 3);
    CHECK(std::abs(t3.approx() - std::sqrt(128.0) / 65) < 1e-13);
    CHECK(t3.lower() * t3.lower() <= Q("128/4225"));
    CHECK(t3.upper() * t3.upper() >= Q("128/4225"));
    const double want1 = std::sqrt(8.0) / 5 + std::sqrt(32.0) / 17 + std::sqrt(128.0) / 65;
    CHECK(std::abs(davies_series_tail(spec, h, 1).approx() - want1) < 1e-12);
    CHECK(std::abs(want1 - 1.07256) < 1e-4);
    CHECK_THROWS(davies_series_tail(spec, h, 0));
    CHECK_THROWS(davies_series_tail(spec, h, 4));
    CHECK(std::abs(davies_convergence_certificate(spec).approx() - (0.5 + 0.25 + 0.125)) < 1e-13);
  }

  TEST_CASE("Euclidean clouds") {
    auto l = build_euclidean_cloud({{Rational(0)}, {Rational(1)}, {Rational(2)}});
    CHECK(l.mode() == NumberMode::Floating);
    CHECK(l.distance_approx(0, 1) == 1.0);
    CHECK(l.distance_approx(1, 2) == 1.0);
    CHECK(l.distance_approx(0, 2) == 2.0);
    CHECK(l.resolution() == Q("1/4"));
    auto sq = build_euclidean_cloud({{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)}, {Rational(1), Rational(1)}});
    CHECK(std::abs(sq.distance_approx(0, 3) - std::sqrt(2.0)) < 1e-15);
    CHECK_THROWS(build_euclidean_cloud({{Rational(0)}, {Rational(0)}}));
    CHECK_THROWS(build_euclidean_cloud({{Rational(0), Rational(1), Rational(2), Rational(3)}, {Rational(1), Rational(1), Rational(2), Rational(3)}}));
    Rng rng(17);
    for (int d = 1; d <= 3; ++d) {
      auto c = random_cloud(rng, 12, d);
      CHECK(validate_metric(c.inst.space).triangle);
    }
  }
}
