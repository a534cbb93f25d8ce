#include <cmath>

#include "fracpack/harness.hpp"
#include "fracpack/random_instances.hpp"
#include "helpers.hpp"

using namespace fracpack;
using namespace fpt;

namespace {

const CheckReport& find(const std::vector<CheckReport>& reports, const std::string& name) {
  for (const auto& r : reports) {
    if (r.name == name) return r;
  }
  FAIL("missing check " << name);
  throw std::logic_error("unreachable");
}

bool all_hold(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) {
    if (r.verdict != Verdict::Holds) {
      MESSAGE(r.name << ": " << to_string(r.verdict) << " " << to_json(r).dump());
      return false;
    }
  }
  return true;
}

Side bound(long v, bool upper_ok, bool lower_ok) {
  Side s = Side::exact("x", ExtValue(Rational(v)));
  s.upper_ok = upper_ok;
  s.lower_ok = lower_ok;
  return s;
}

Instance atoms(FiniteMetricSpace s, std::vector<Rational> w) {
  return Instance{std::move(s), MeasureOracle::atomic(std::move(w))};
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("verdict logic") {
    CHECK(decide("a", Relation::Le, bound(1, true, true), bound(2, true, true)).verdict == Verdict::Holds);
    CHECK(decide("a", Relation::Le, bound(2, true, true), bound(2, true, true)).verdict == Verdict::Holds);
    const CheckReport f = decide("a", Relation::Le, bound(3, true, true), bound(2, true, true));
    CHECK(f.verdict == Verdict::Fails);
    CHECK(f.certificate.contains("left"));
    CHECK(f.certificate.contains("right"));
    // a lower bound on the left cannot certify <=
    CHECK(decide("a", Relation::Le, bound(1, false, true), bound(2, true, true)).verdict == Verdict::Inconclusive);
    // an upper bound on the right cannot certify <=
    CHECK(decide("a", Relation::Le, bound(1, true, true), bound(2, true, false)).verdict == Verdict::Inconclusive);
    // a lower bound already exceeding an exact right side refutes
    CHECK(decide("a", Relation::Le, bound(3, false, true), bound(2, true, true)).verdict == Verdict::Fails);
    CHECK(decide("a", Relation::Le, bound(3, true, false), bound(2, true, true)).verdict == Verdict::Inconclusive);

    CHECK(decide("b", Relation::Lt, bound(1, true, true), bound(2, true, true)).verdict == Verdict::Holds);
    CHECK(decide("b", Relation::Lt, bound(2, true, true), bound(2, true, true)).verdict == Verdict::Fails);
    const Real s2 = pow_q(Rational(2), Q("1/2")).finite();
    CHECK(decide("b", Relation::Lt, Side::exact("x", ExtValue(s2)), Side::exact("y", ExtValue(s2))).verdict ==
          Verdict::Inconclusive);
    CHECK(decide("c", Relation::Eq, Side::exact("x", ExtValue(s2)), Side::exact("y", ExtValue(s2))).verdict ==
          Verdict::Holds);
    CHECK(decide("c", Relation::Eq, bound(1, true, true), bound(2, true, true)).verdict == Verdict::Fails);
    CHECK(decide("c", Relation::Eq, bound(1, false, true), bound(1, true, true)).verdict == Verdict::Inconclusive);

    std::vector<CheckReport> rs{decide("a", Relation::Le, bound(1, true, true), bound(2, true, true))};
    CHECK(overall(rs) == Verdict::Holds);
    rs.push_back(decide("a", Relation::Le, bound(1, false, true), bound(2, true, true)));
    CHECK(overall(rs) == Verdict::Inconclusive);
    rs.push_back(f);
    CHECK(overall(rs) == Verdict::Fails);
  }

  TEST_CASE("0 x inf guard") {
    const Side zero = Side::exact("z", ExtValue(Rational(0)));
    const Side inf = Side::exact("i", ExtValue::infinity());
    const Side p = times(zero, inf);
    CHECK(p.guard);
    CHECK(p.value.is_zero());
    CHECK(times(inf, zero).guard);
    CHECK_FALSE(times(zero, bound(3, true, true)).guard);
    const CheckReport r = decide("g", Relation::Le, zero, p);
    CHECK(r.verdict == Verdict::Inconclusive);
    CHECK(to_json(r)["right"]["guard"] == true);
  }

  TEST_CASE("chain on the three-point line") {
    auto s = integer_line(3);
    const auto mu = MeasureOracle::uniform(3);
    const PointSet E = all_points(s);
    const auto h = HausdorffFunction::power(Rational(1));
    const Objective obj{s, E, mu, Rational(0), h};
    const auto reports = verify_chain(obj, grid({Rational(1)}));
    CHECK(all_hold(reports));
    const auto& pq = find(reports, "chain:P<=Q");
    CHECK(is_exactly(pq.left.value, Rational(2)));
    CHECK(is_exactly(pq.right.value, Rational(2)));
    CHECK(is_exactly(find(reports, "chain:Q<=R").right.value, Rational(4)));
    CHECK(is_exactly(find(reports, "chain:H<=R").left.value, Rational(2)));
    CHECK(find(reports, "oracle:P").verdict == Verdict::Holds);
    CHECK(find(reports, "lp:primal=dual").verdict == Verdict::Holds);
  }

  TEST_CASE("chain on a singleton") {
    auto s = integer_line(3);
    const auto mu = MeasureOracle::uniform(3);
    const PointSet E{1};
    const auto h = HausdorffFunction::power(Rational(1));
    const Objective obj{s, E, mu, Q("1/2"), h};
    const auto reports = verify_chain(obj, grid({Q("1/2"), Rational(1)}));
    CHECK(all_hold(reports));
    // best radius 1: mu(B(1,1))^(1/2) h(2) = 2
    for (const char* name : {"chain:P<=Q", "chain:Q<=R", "chain:P<=r", "chain:P<=Ptilde"}) {
      const auto& r = find(reports, name);
      CHECK(is_exactly(r.left.value, Rational(2)));
      CHECK(is_exactly(r.right.value, Rational(2)));
    }
    // the only centre is 1; the cheapest cover uses radius 1/2: (1/3)^(1/2) * 1
    CHECK(near(find(reports, "chain:H<=R").left.value, std::sqrt(1.0 / 3)));
  }

  TEST_CASE("chain on random instances") {
    Rng rng(404);
    for (int t = 0; t < 8; ++t) {
      auto ri = random_exact_instance(rng, 6);
      const auto h = h_variant(rng, t % 2);
      const Band band = small_band(rng, ri.inst.space, ri.E, 3);
      const Objective obj{ri.inst.space, ri.E, ri.inst.measure, random_q(rng), h};
      CHECK(all_hold(verify_chain(obj, band)));
    }
  }

  TEST_CASE("theorem A on two-point factors") {
    const Instance two{integer_line(2), MeasureOracle::uniform(2)};
    const PointSet E = all_points(two.space);
    const auto h = HausdorffFunction::power(Rational(1));
    const Band band = grid({Q("2/5")});
    const ProductSetup setup{two, E, two, E, Rational(0), h, h, band};
    const auto reports = verify_theorem_a(setup);
    CHECK(all_hold(reports));
    const auto& first = find(reports, "theorem-a:H(ExF)<=H(E)R(F)");
    // four singleton balls of h g (4/5) = 16/25 on each side
    CHECK(is_exactly(first.left.value, Q("64/25")));
    CHECK(is_exactly(first.right.value, Q("64/25")));
    const auto& second = find(reports, "theorem-a:R(E)H(F)<=R(ExF)");
    CHECK(is_exactly(second.left.value, Q("64/25")));
    CHECK(is_exactly(second.right.value, Q("64/25")));
  }

  TEST_CASE("theorem A with a singleton factor") {
    const Instance one = atoms(FiniteMetricSpace::exact({"o"}, {Rational(0)}, Q("1/4")), {Rational(1)});
    const Instance line3{integer_line(3), MeasureOracle::uniform(3)};
    const PointSet E{0}, F = all_points(line3.space);
    const auto h = HausdorffFunction::power(Rational(1));
    const Band band = grid({Q("1/2"), Rational(1)});
    const auto reports = verify_theorem_a({one, E, line3, F, Rational(0), h, h, band});
    CHECK(all_hold(reports));
    // E x F is isometric to F with hg(2r) = (2r)^2: three radius-1/2 balls beat B(1, 1)
    const auto& first = find(reports, "theorem-a:H(ExF)<=H(E)R(F)");
    CHECK(is_exactly(first.left.value, Rational(3)));
    // H(E) = h(1) = 1 and R(F) = 2 h(2) from centres 0 and 2
    CHECK(is_exactly(first.right.value, Rational(4)));
  }

  TEST_CASE("theorem A guard on an empty factor") {
    const Instance left{integer_line(2), MeasureOracle::uniform(2)};
    const Instance right = atoms(integer_line(2), {Rational(1), Rational(0)});
    const PointSet E{}, F{0, 1};
    const auto h = HausdorffFunction::power(Rational(1));
    const Band band = grid({Q("1/2")});
    const auto reports = verify_theorem_a({left, E, right, F, Rational(-1), h, h, band});
    const auto& first = find(reports, "theorem-a:H(ExF)<=H(E)R(F)");
    CHECK(first.verdict == Verdict::Inconclusive);
    CHECK(first.right.guard);
    for (const auto& r : reports) CHECK((r.verdict != Verdict::Holds || r.name.rfind("oracle:", 0) == 0));
  }

  TEST_CASE("theorem C examples") {
    const Instance line3{integer_line(3), MeasureOracle::uniform(3)};
    const Instance two{integer_line(2), MeasureOracle::uniform(2)};
    const PointSet E = all_points(line3.space), F = all_points(two.space);
    const auto h = HausdorffFunction::power(Rational(1));
    const Band band = grid({Rational(1)});
    const CheckReport c = verify_theorem_c({line3, E, two, F, Rational(0), h, h, band});
    CHECK(c.verdict == Verdict::Holds);
    // Q(E) = 2, P(F) = h(2) = 2; one ball fits in the product: (2 * 1)^2
    CHECK(is_exactly(c.right.value, Rational(4)));
    CHECK(is_exactly(c.left.value, Rational(4)));

    const Instance one = atoms(FiniteMetricSpace::exact({"o"}, {Rational(0)}, Q("1/4")), {Rational(1)});
    const PointSet S{0};
    const CheckReport s = verify_theorem_c({one, S, line3, E, Rational(0), h, h, band});
    CHECK(s.verdict == Verdict::Holds);
  }

  TEST_CASE("theorem B bounds on collinear points") {
    auto cloud = build_euclidean_cloud({{Rational(0)}, {Rational(1)}, {Rational(2)}, {Rational(3)}, {Rational(4)}});
    const auto mu = MeasureOracle::uniform(5);
    const PointSet E = all_points(cloud);
    const auto h = HausdorffFunction::power(Rational(1));
    const Objective obj{cloud, E, mu, Rational(0), h};
    const auto reports = verify_theorem_b_bounds(obj, grid({Rational(1)}), 1);
    CHECK(all_hold(reports));
    const auto& pr = find(reports, "theorem-b:P<=r");
    // radius-1 balls pack only at distance > 2, and weak-pseudo balls at distance 2 share a point
    CHECK(is_exactly(pr.left.value, Rational(4)));
    CHECK(is_exactly(pr.right.value, Rational(4)));

    const PointSet one{2};
    const Objective o1{cloud, one, mu, Rational(0), h};
    const auto single = verify_theorem_b_bounds(o1, grid({Rational(1)}), 1);
    CHECK(all_hold(single));
    CHECK(compare(find(single, "theorem-b:P<=r").left.value, find(single, "theorem-b:P<=r").right.value) ==
          Order::Equal);
  }

  TEST_CASE("amenability on clouds") {
    Rng rng(8);
    for (int d = 1; d <= 2; ++d) {
      auto c = random_cloud(rng, 10, d);
      const Band band = small_band(rng, c.inst.space, c.E, 3);
      const AmenabilityStats st = amenability_experiment(c.inst.space, band, d, 77, 50);
      CHECK(st.families == 50);
      CHECK(st.bound == (d == 1 ? 3u : 9u));
      CHECK(st.max_count <= st.bound);
      CHECK(st.max_count >= 1);
      const auto h = HausdorffFunction::power(Rational(1));
      const Objective obj{c.inst.space, c.E, c.inst.measure, Rational(1, 2), h};
      CHECK(all_hold(verify_amenability(obj, band, d, 5)));
    }
  }

  TEST_CASE("Davies separation at N=(4,16,64)") {
    const DaviesSpec spec{{4, 16, 64}, 3, Q("1/2")};
    const DaviesSeparation sep = davies_separation(spec, 3);
    CHECK(sep.lower == Q("4096/5525"));
    CHECK(std::abs(sep.upper.approx() - std::sqrt(128.0) / 65) < 1e-13);
    CHECK(find(sep.checks, "davies:tail<lower").verdict == Verdict::Holds);
    CHECK(sep.details["gamma"].back() == "1/22630400");
    CHECK(sep.details["enumeration"] == "skipped: closed forms only");
  }

  TEST_CASE("Davies enumeration at N=(2,4)") {
    const DaviesSpec spec{{2, 4}, 2, Q("1/2")};
    const DaviesSeparation sep = davies_separation(spec, 2);
    CHECK(sep.lower == Q("8/15"));
    CHECK(find(sep.checks, "davies:enumerated=closed-form").verdict == Verdict::Holds);
    CHECK(find(sep.checks, "davies:peripheral-family-valid").verdict == Verdict::Holds);
    CHECK(find(sep.checks, "davies:lower<=engine-R").verdict == Verdict::Holds);
    CHECK(find(sep.checks, "davies:engine-Ptilde<=tail").verdict == Verdict::Holds);
    CHECK(sep.details["family_valid_at_edge"] == false);
    CHECK(sep.details["family_valid_below_edge"] == true);
    // the tail from n = 2 is the single term sqrt(8)/5 > 8/15 at this small N
    CHECK(std::abs(sep.upper.approx() - std::sqrt(8.0) / 5) < 1e-13);
    CHECK(find(sep.checks, "davies:tail<lower").verdict == Verdict::Fails);
    CHECK_THROWS(davies_separation(spec, 3));
  }

  TEST_CASE("Cantor trend at small levels") {
    const CantorTrend t = cantor_trend(1, 2, Rational(1), 1);
    REQUIRE(t.rows.size() == 2);
    CHECK(all_hold(t.checks));
    for (const auto& row : t.rows) {
      CHECK(near(row.H.value, 1.27428132632, 1e-10));
      CHECK(near(row.P.value, 1.54856265263, 1e-10));
    }
    // k = 1: centres 0 and 1 at radius 1/3 give 2 (2/3)^s = 2^s
    CHECK(near(t.rows[0].P.value, std::pow(2.0, std::log(2.0) / std::log(3.0))));
    REQUIRE(t.rows[0].P_product);
    CHECK(near(t.rows[0].P_product->value, std::pow(4.0, std::log(2.0) / std::log(3.0))));
    CHECK_FALSE(t.rows[1].P_product);
    const std::string csv = cantor_csv(t);
    CHECK(csv.rfind("k,H_s,P_s,P_t,P_st_product,ratio,H_status,P_status,product_status\n", 0) == 0);
    CHECK(csv.find("1,1.27428132632,1.54856265263,1.54856265263,2.39804628912,1.21524393448") != std::string::npos);
  }

  TEST_CASE("reports are deterministic") {
    Rng a(123), b(123);
    auto ra = random_exact_instance(a, 6), rb = random_exact_instance(b, 6);
    const auto h = HausdorffFunction::power(Q("1/2"));
    const Band ba = default_band(ra.inst.space, ra.E), bb = default_band(rb.inst.space, rb.E);
    const Objective oa{ra.inst.space, ra.E, ra.inst.measure, Rational(0), h};
    const Objective ob{rb.inst.space, rb.E, rb.inst.measure, Rational(0), h};
    nlohmann::json ja = nlohmann::json::array(), jb = nlohmann::json::array();
    for (const auto& r : verify_chain(oa, ba)) ja.push_back(to_json(r));
    for (const auto& r : verify_chain(ob, bb)) jb.push_back(to_json(r));
    CHECK(ja.dump() == jb.dump());
  }
}
