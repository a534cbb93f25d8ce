#include "fracpack/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

namespace fracpack {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Fails:
      return "fails";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::Le:
      return "<=";
    case Relation::Lt:
      return "<";
    case Relation::Eq:
      return "=";
  }
  return "?";
}

bool covers(const FiniteMetricSpace& space, const PointSet& E, const std::vector<Constituent>& pi) {
  for (size_t x : E) {
    bool hit = false;
    for (const auto& c : pi) {
      if (space.within(c.center, x, c.radius)) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

nlohmann::json certify(const PremeasureResult& result, const Objective& obj) {
  nlohmann::json j = to_json(result);
  bool valid = true;
  std::string violation;
  if (result.target == Target::Hausdorff) {
    valid = covers(obj.space, obj.E, result.witness);
    if (!valid) violation = "witness does not cover E";
  } else {
    PackingKind kind = PackingKind::Packing;
    switch (result.target) {
      case Target::Pseudo:
        kind = PackingKind::Pseudo;
        break;
      case Target::Relative:
        kind = PackingKind::Relative;
        break;
      case Target::WeakPseudo:
        kind = PackingKind::WeakPseudo;
        break;
      case Target::Weighted:
        kind = PackingKind::Weighted;
        break;
      default:
        break;
    }
    Validity v = is_valid(kind, result.witness, obj.space, obj.E);
    valid = v.valid;
    violation = v.violation;
  }
  j["witness_valid"] = valid;
  if (!valid) j["violation"] = violation;
  j["witness_objective"] = value_json(objective_value(obj, result.witness));
  return j;
}

// The engine's value against the exhaustive oracle, when the candidate family is small.
void cross_check(std::vector<CheckReport>& out, const std::string& label, const PremeasureResult& result,
                 const Objective& obj, const Band& band, const CheckOptions& opt) {
  if (!opt.cross_check || result.target == Target::Weighted) return;
  const auto cands = band_candidates(obj.E, band);
  if (cands.size() > opt.limits.brute_candidates) return;
  Side engine = Side::of(label, result, obj);
  Side brute = Side::exact("brute(" + label + ")", brute_force_oracle(result.target, obj, cands, opt.limits));
  out.push_back(decide("oracle:" + label, Relation::Eq, std::move(engine), std::move(brute)));
}

}  // namespace

Side Side::of(std::string label, const PremeasureResult& result, const Objective& obj) {
  Side s;
  s.label = std::move(label);
  s.value = result.value;
  s.upper_ok = result.status != Status::LowerBound;
  s.lower_ok = result.status != Status::UpperBound;
  s.witness = certify(result, obj);
  return s;
}

Side Side::exact(std::string label, ExtValue value) {
  Side s;
  s.label = std::move(label);
  s.value = std::move(value);
  return s;
}

Side times(const Side& a, const Side& b) {
  Side s;
  s.label = a.label + "*" + b.label;
  s.value = ext_mul(a.value, b.value);
  s.upper_ok = a.upper_ok && b.upper_ok;
  s.lower_ok = a.lower_ok && b.lower_ok;
  s.guard = a.guard || b.guard || (a.value.is_zero() && b.value.is_infinite()) ||
            (a.value.is_infinite() && b.value.is_zero());
  s.witness = {{a.label, a.witness}, {b.label, b.witness}};
  return s;
}

Side scaled(const Side& a, const Rational& c) {
  Side s = a;
  s.label = to_string(c) + "*" + a.label;
  s.value = ext_mul(ExtValue(c), a.value);
  return s;
}

CheckReport decide(std::string name, Relation rel, Side left, Side right) {
  CheckReport r;
  r.name = std::move(name);
  r.relation = rel;
  const Order o = compare(left.value, right.value);
  const bool favourable = left.upper_ok && right.lower_ok;
  const bool refutable = left.lower_ok && right.upper_ok;
  if (left.guard || right.guard) {
    r.verdict = Verdict::Inconclusive;
    r.note = "0 x inf product: the relation is not asserted";
  } else if (rel == Relation::Le) {
    const bool le = o != Order::Greater;
    if (le && favourable) {
      r.verdict = Verdict::Holds;
      if (o == Order::Overlap) r.note = "enclosures overlap; counted as a tie";
    } else if (o == Order::Greater && refutable) {
      r.verdict = Verdict::Fails;
    } else {
      r.note = "bound status on the wrong side";
    }
  } else if (rel == Relation::Lt) {
    if (o == Order::Less && favourable) {
      r.verdict = Verdict::Holds;
    } else if ((o == Order::Greater || o == Order::Equal) && refutable) {
      r.verdict = Verdict::Fails;
    } else {
      r.note = o == Order::Overlap ? "enclosures overlap; strictness not certified" : "bound status on the wrong side";
    }
  } else {
    const bool exact = favourable && refutable;
    if (exact && (o == Order::Equal || o == Order::Overlap)) {
      r.verdict = Verdict::Holds;
      if (o == Order::Overlap) r.note = "enclosures overlap; counted as a tie";
    } else if (exact) {
      r.verdict = Verdict::Fails;
    } else {
      r.note = "a side is only a bound";
    }
  }
  if (r.verdict == Verdict::Fails) {
    r.certificate = {{"left", left.witness}, {"right", right.witness}};
  }
  r.left = std::move(left);
  r.right = std::move(right);
  return r;
}

nlohmann::json to_json(const CheckReport& report) {
  auto side = [](const Side& s) {
    nlohmann::json j{{"label", s.label},
                     {"value", value_json(s.value)},
                     {"approx", s.value.is_infinite() ? nlohmann::json("inf") : nlohmann::json(s.value.approx())},
                     {"upper_ok", s.upper_ok},
                     {"lower_ok", s.lower_ok}};
    if (s.guard) j["guard"] = true;
    return j;
  };
  nlohmann::json j{{"name", report.name},
                   {"relation", relation_text(report.relation)},
                   {"left", side(report.left)},
                   {"right", side(report.right)},
                   {"verdict", to_string(report.verdict)}};
  if (!report.note.empty()) j["note"] = report.note;
  if (!report.certificate.is_null()) j["certificate"] = report.certificate;
  return j;
}

Verdict overall(const std::vector<CheckReport>& reports) {
  bool inconclusive = false;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::Fails) return Verdict::Fails;
    if (r.verdict == Verdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Holds;
}

// ---- chain

std::vector<CheckReport> verify_chain(const Objective& obj, const Band& band, const CheckOptions& opt) {
  const auto& lim = opt.limits;
  const PremeasureResult P = sup_premeasure(PackingKind::Packing, obj, band, lim);
  const PremeasureResult Q = weighted_premeasure(obj, band, lim);
  const PremeasureResult R = sup_premeasure(PackingKind::Pseudo, obj, band, lim);
  const PremeasureResult H = hausdorff_premeasure(obj, band, lim);
  const PremeasureResult r = sup_premeasure(PackingKind::WeakPseudo, obj, band, lim);
  const PremeasureResult Pt = sup_premeasure(PackingKind::Relative, obj, band, lim);
  const Side sP = Side::of("P", P, obj), sQ = Side::of("Q", Q, obj), sR = Side::of("R", R, obj);
  const Side sH = Side::of("H", H, obj), sr = Side::of("r", r, obj), sPt = Side::of("Ptilde", Pt, obj);

  std::vector<CheckReport> out;
  cross_check(out, "P", P, obj, band, opt);
  cross_check(out, "R", R, obj, band, opt);
  cross_check(out, "H", H, obj, band, opt);
  cross_check(out, "r", r, obj, band, opt);
  cross_check(out, "Ptilde", Pt, obj, band, opt);
  if (Q.dual_value && Q.status == Status::ExactOnGrid && !Q.value.is_infinite()) {
    out.push_back(decide("lp:primal=dual", Relation::Eq, Side::exact("Q primal", Q.value),
                         Side::exact("Q dual", ExtValue(*Q.dual_value))));
  }
  out.push_back(decide("chain:P<=Q", Relation::Le, sP, sQ));
  out.push_back(decide("chain:Q<=R", Relation::Le, sQ, sR));
  out.push_back(decide("chain:H<=R", Relation::Le, sH, sR));
  out.push_back(decide("chain:P<=r", Relation::Le, sP, sr));
  out.push_back(decide("chain:r<=R", Relation::Le, sr, sR));
  out.push_back(decide("chain:P<=Ptilde", Relation::Le, sP, sPt));
  return out;
}

// ---- products

namespace {

struct ProductWorld {
  FiniteMetricSpace space;
  MeasureOracle mu;
  PointSet EF;
  HausdorffFunction hg;
};

ProductWorld make_product(const ProductSetup& s, const CheckOptions& opt) {
  FiniteMetricSpace xy = product_space(s.left.space, s.right.space, opt.limits.product_points);
  PointSet EF;
  const size_t ny = s.right.space.size();
  for (size_t i : s.E) {
    for (size_t j : s.F) EF.push_back(i * ny + j);
  }
  return ProductWorld{std::move(xy), MeasureOracle::product(s.left.measure, s.right.measure), std::move(EF),
                      HausdorffFunction::product(s.h, s.g)};
}

}  // namespace

std::vector<CheckReport> verify_theorem_a(const ProductSetup& s, const CheckOptions& opt) {
  const ProductWorld w = make_product(s, opt);
  const Objective oE{s.left.space, s.E, s.left.measure, s.q, s.h};
  const Objective oF{s.right.space, s.F, s.right.measure, s.q, s.g};
  const Objective oEF{w.space, w.EF, w.mu, s.q, w.hg};
  const auto& lim = opt.limits;
  const PremeasureResult H_EF = hausdorff_premeasure(oEF, s.band, lim);
  const PremeasureResult H_E = hausdorff_premeasure(oE, s.band, lim);
  const PremeasureResult R_F = sup_premeasure(PackingKind::Pseudo, oF, s.band, lim);
  const PremeasureResult R_E = sup_premeasure(PackingKind::Pseudo, oE, s.band, lim);
  const PremeasureResult H_F = hausdorff_premeasure(oF, s.band, lim);
  const PremeasureResult R_EF = sup_premeasure(PackingKind::Pseudo, oEF, s.band, lim);

  std::vector<CheckReport> out;
  cross_check(out, "H(ExF)", H_EF, oEF, s.band, opt);
  cross_check(out, "H(E)", H_E, oE, s.band, opt);
  cross_check(out, "R(F)", R_F, oF, s.band, opt);
  cross_check(out, "R(E)", R_E, oE, s.band, opt);
  cross_check(out, "H(F)", H_F, oF, s.band, opt);
  cross_check(out, "R(ExF)", R_EF, oEF, s.band, opt);
  out.push_back(decide("theorem-a:H(ExF)<=H(E)R(F)", Relation::Le, Side::of("H(ExF)", H_EF, oEF),
                       times(Side::of("H(E)", H_E, oE), Side::of("R(F)", R_F, oF))));
  out.push_back(decide("theorem-a:R(E)H(F)<=R(ExF)", Relation::Le,
                       times(Side::of("R(E)", R_E, oE), Side::of("H(F)", H_F, oF)),
                       Side::of("R(ExF)", R_EF, oEF)));
  return out;
}

CheckReport verify_theorem_c(const ProductSetup& s, const CheckOptions& opt) {
  const ProductWorld w = make_product(s, opt);
  const Objective oE{s.left.space, s.E, s.left.measure, s.q, s.h};
  const Objective oF{s.right.space, s.F, s.right.measure, s.q, s.g};
  const Objective oEF{w.space, w.EF, w.mu, s.q, w.hg};
  const auto& lim = opt.limits;
  const PremeasureResult P_EF = sup_premeasure(PackingKind::Packing, oEF, s.band, lim);
  const PremeasureResult Q_E = weighted_premeasure(oE, s.band, lim);
  const PremeasureResult P_F = sup_premeasure(PackingKind::Packing, oF, s.band, lim);
  return decide("theorem-c:P(ExF)<=Q(E)P(F)", Relation::Le, Side::of("P(ExF)", P_EF, oEF),
                times(Side::of("Q(E)", Q_E, oE), Side::of("P(F)", P_F, oF)));
}

namespace {

Rational three_pow(int d) {
  Rational k(1);
  for (int i = 0; i < d; ++i) k *= 3;
  return k;
}

}  // namespace

std::vector<CheckReport> verify_theorem_b_bounds(const Objective& obj, const Band& band, int d,
                                                 const CheckOptions& opt) {
  const PremeasureResult P = sup_premeasure(PackingKind::Packing, obj, band, opt.limits);
  const PremeasureResult r = sup_premeasure(PackingKind::WeakPseudo, obj, band, opt.limits);
  std::vector<CheckReport> out;
  cross_check(out, "P", P, obj, band, opt);
  cross_check(out, "r", r, obj, band, opt);
  const Side sP = Side::of("P", P, obj), sr = Side::of("r", r, obj);
  out.push_back(decide("theorem-b:P<=r", Relation::Le, sP, sr));
  out.push_back(decide("theorem-b:r<=3^d*P", Relation::Le, sr, scaled(sP, three_pow(d))));
  return out;
}

// ---- amenability

AmenabilityStats amenability_experiment(const FiniteMetricSpace& space, const Band& band, int d, uint64_t seed,
                                        size_t families) {
  std::mt19937_64 rng(seed);
  AmenabilityStats st;
  st.bound = static_cast<size_t>(three_pow(d).get_num().get_ui());
  const size_t n = space.size();
  std::uniform_int_distribution<size_t> point(0, n - 1);
  std::uniform_int_distribution<size_t> radius(0, band.grid.size() - 1);
  std::uniform_int_distribution<size_t> size(1, 3 * n);
  const PointSet all = all_points(space);
  for (size_t f = 0; f < families; ++f) {
    std::vector<Constituent> family(size(rng));
    for (auto& c : family) c = {point(rng), band.grid[radius(rng)], std::nullopt};
    const auto pi = greedy_maximal_pseudo_packing(space, family);
    if (!is_valid(PackingKind::Pseudo, pi, space, all).valid) {
      throw std::logic_error("greedy pseudo-packing is not a pseudo-packing");
    }
    for (size_t y = 0; y < n; ++y) st.max_count = std::max(st.max_count, amenability_witness_count(space, pi, y));
    ++st.families;
  }
  return st;
}

std::vector<CheckReport> verify_amenability(const Objective& obj, const Band& band, int d, uint64_t seed,
                                            const CheckOptions& opt) {
  std::vector<CheckReport> out;
  const AmenabilityStats st = amenability_experiment(obj.space, band, d, seed, 100);
  out.push_back(decide("amenability:witness-count<=3^d", Relation::Le,
                       Side::exact("max count", ExtValue(Rational(static_cast<unsigned long>(st.max_count)))),
                       Side::exact("3^d", ExtValue(three_pow(d)))));
  const PremeasureResult P = sup_premeasure(PackingKind::Packing, obj, band, opt.limits);
  const PremeasureResult R = sup_premeasure(PackingKind::Pseudo, obj, band, opt.limits);
  cross_check(out, "P", P, obj, band, opt);
  cross_check(out, "R", R, obj, band, opt);
  out.push_back(decide("amenability:R<=3^d*P", Relation::Le, Side::of("R", R, obj),
                       scaled(Side::of("P", P, obj), three_pow(d))));
  return out;
}

// ---- Davies

DaviesSeparation davies_separation(const DaviesSpec& spec, int n, const CheckOptions& opt) {
  spec.check();
  if (n < 1 || n > spec.depth) throw std::invalid_argument("scale index must lie in 1..depth");
  DaviesSeparation out;
  const HausdorffFunction h = davies_theorem_h(spec);
  out.lower = davies_peripheral_mass(spec, n);
  out.upper = davies_series_tail(spec, h, n);
  out.checks.push_back(decide("davies:tail<lower", Relation::Lt, Side::exact("U", ExtValue(out.upper)),
                              Side::exact("L", ExtValue(out.lower))));
  auto& det = out.details;
  det["N"] = spec.N;
  det["depth"] = spec.depth;
  det["q"] = to_string(spec.q);
  det["scale"] = n;
  det["L"] = to_string(out.lower);
  det["L_approx"] = out.lower.get_d();
  det["U"] = to_json(out.upper);
  det["U_approx"] = out.upper.approx();
  det["peripheral_count"] = davies_peripheral_count(spec, n).get_str();
  det["convergence_certificate"] = davies_convergence_certificate(spec).approx();
  nlohmann::json gam = nlohmann::json::array();
  for (const auto& g : gamma_sequence(spec.N)) gam.push_back(to_string(g));
  det["gamma"] = gam;

  // explicit enumeration on the full truncation
  const bool small = n == spec.depth && davies_point_count(spec, DaviesMode::Full) <= 4096;
  if (!small) {
    det["enumeration"] = "skipped: closed forms only";
    return out;
  }
  const Instance inst = build_davies(spec, DaviesMode::Full);
  const auto gamma = gamma_sequence(spec.N);
  PointSet periph;
  for (size_t u = 0; u < inst.space.size(); ++u) {
    const DaviesPoint p = davies_decode(spec, DaviesMode::Full, u);
    if (std::none_of(p.begin(), p.end(), [](const DaviesVertex& v) { return v.central(); })) periph.push_back(u);
  }
  const Rational enumerated = Rational(static_cast<unsigned long>(periph.size())) * gamma[static_cast<size_t>(n)];
  det["enumerated_peripheral_mass"] = to_string(enumerated);
  out.checks.push_back(decide("davies:enumerated=closed-form", Relation::Eq,
                              Side::exact("enumerated M_n gamma_n", ExtValue(enumerated)),
                              Side::exact("prod N/(N+1)", ExtValue(out.lower))));

  const Rational edge = Rational(1) / Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(n - 1));
  const Rational below = edge * (1 - Rational(1) / Rational(mpz_class(1) << 32));
  auto family = [&](const Rational& r) {
    std::vector<Constituent> pi;
    for (size_t u : periph) pi.push_back({u, r, std::nullopt});
    return pi;
  };
  const Validity at_edge = is_valid(PackingKind::Pseudo, family(edge), inst.space, periph);
  const Validity at_below = is_valid(PackingKind::Pseudo, family(below), inst.space, periph);
  det["family_valid_at_edge"] = at_edge.valid;
  if (!at_edge.valid) det["edge_violation"] = at_edge.violation;
  det["family_valid_below_edge"] = at_below.valid;
  out.checks.push_back(decide("davies:peripheral-family-valid", Relation::Eq,
                              Side::exact("valid below 2^-(n-1)", ExtValue(Rational(at_below.valid ? 1 : 0))),
                              Side::exact("expected", ExtValue(Rational(1)))));

  const Band band = Band::make(below, below, {below});
  const Objective obj{inst.space, periph, inst.measure, spec.q, h};
  const PremeasureResult R = sup_premeasure(PackingKind::Pseudo, obj, band, opt.limits);
  det["engine_R"] = to_json(R)["value"];
  det["engine_R_approx"] = R.value.approx();
  out.checks.push_back(decide("davies:lower<=engine-R", Relation::Le, Side::exact("L", ExtValue(out.lower)),
                              Side::of("R(peripheral)", R, obj)));

  // relative packings of the whole truncation at scales >= n sit below the tail
  const Rational top = below;
  const Rational bottom = Rational(1) / Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(spec.depth));
  const Band rel_band = Band::make(bottom, top, {bottom, top});
  const PointSet all = all_points(inst.space);
  const Objective whole{inst.space, all, inst.measure, spec.q, h};
  const PremeasureResult Pt = sup_premeasure(PackingKind::Relative, whole, rel_band, opt.limits);
  det["engine_Ptilde"] = to_json(Pt)["value"];
  det["engine_Ptilde_approx"] = Pt.value.approx();
  out.checks.push_back(decide("davies:engine-Ptilde<=tail", Relation::Le, Side::of("Ptilde(X)", Pt, whole),
                              Side::exact("U", ExtValue(out.upper))));
  return out;
}

// ---- Cantor

Band cantor_band(int k, const Rational& scale) {
  Rational unit(1);
  for (int i = 0; i < k; ++i) unit /= 3;
  return triadic_band(unit / 2, unit * scale);
}

CantorTrend cantor_trend(int k_lo, int k_hi, const Rational& scale, int product_max_k, const CheckOptions& opt) {
  if (k_lo < 1 || k_hi > 8 || k_lo > k_hi) throw std::invalid_argument("cantor levels must satisfy 1 <= lo <= hi <= 8");
  CantorTrend trend;
  const HausdorffFunction hs = HausdorffFunction::power_log_ratio(2, 3);
  const HausdorffFunction hst = HausdorffFunction::product(hs, hs);
  const Rational q(0);
  for (int k = k_lo; k <= k_hi; ++k) {
    const Instance inst = build_cantor(k);
    const PointSet E = all_points(inst.space);
    const Band band = cantor_band(k, scale);
    const Objective obj{inst.space, E, inst.measure, q, hs};
    CantorRow row;
    row.k = k;
    row.H = hausdorff_premeasure(obj, band, opt.limits);
    row.P = sup_premeasure(PackingKind::Packing, obj, band, opt.limits);
    // t = s, so P^t(E_k) is the same band value
    row.P_t = row.P;
    const std::string tag = "k=" + std::to_string(k);
    cross_check(trend.checks, "H^s(" + tag + ")", row.H, obj, band, opt);
    cross_check(trend.checks, "P^s(" + tag + ")", row.P, obj, band, opt);
    trend.checks.push_back(decide("cantor:" + tag + ":H<P", Relation::Lt, Side::of("H^s", row.H, obj),
                                  Side::of("P^s", row.P, obj)));
    if (k <= product_max_k) {
      const FiniteMetricSpace xy = product_space(inst.space, inst.space, opt.limits.product_points);
      const MeasureOracle mu = MeasureOracle::product(inst.measure, inst.measure);
      const PointSet EE = all_points(xy);
      const Objective pobj{xy, EE, mu, q, hst};
      row.P_product = sup_premeasure(PackingKind::Packing, pobj, band, opt.limits);
    }
    trend.rows.push_back(std::move(row));
  }
  return trend;
}

std::string cantor_csv(const CantorTrend& trend) {
  std::ostringstream os;
  os << "k,H_s,P_s,P_t,P_st_product,ratio,H_status,P_status,product_status\n";
  char buf[64];
  auto num = [&](const ExtValue& v) {
    if (v.is_infinite()) return std::string("inf");
    std::snprintf(buf, sizeof buf, "%.12g", v.approx());
    return std::string(buf);
  };
  for (const auto& row : trend.rows) {
    os << row.k << ',' << num(row.H.value) << ',' << num(row.P.value) << ',' << num(row.P_t->value) << ',';
    if (row.P_product) {
      const ExtValue denom = ext_mul(row.H.value, row.P_t->value);
      os << num(row.P_product->value) << ',';
      if (!denom.is_infinite() && !row.P_product->value.is_infinite() && denom.approx() > 0) {
        std::snprintf(buf, sizeof buf, "%.12g", row.P_product->value.approx() / denom.approx());
        os << buf;
      }
    } else {
      os << ',';
    }
    os << ',' << to_string(row.H.status) << ',' << to_string(row.P.status) << ','
       << (row.P_product ? to_string(row.P_product->status) : std::string()) << '\n';
  }
  return os.str();
}

}  // namespace fracpack
