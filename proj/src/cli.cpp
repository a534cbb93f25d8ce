#include "fracpack/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fracpack/harness.hpp"
#include "json.hpp"

namespace fracpack {

namespace {

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::map<std::string, std::string> descriptor_fields(std::string_view body, std::string_view family) {
  std::map<std::string, std::string> f;
  if (trim(body).empty()) return f;
  for (const auto& item : split(body, ';')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(std::string(family) + " descriptor field '" + item + "' must be key=value");
    }
    f[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return f;
}

int to_int(const std::string& text, const std::string& what) {
  size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument(what + " must be an integer, got '" + text + "'");
  return v;
}

std::vector<long> long_list(const std::string& text, const std::string& what) {
  std::vector<long> out;
  for (const auto& item : split(text, ',')) out.push_back(to_int(item, what));
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

Rational json_rational(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  return rational_from_double(v.get<double>());
}

MeasureOracle weights_or_uniform(const nlohmann::json& j, size_t n) {
  if (!j.contains("weights")) return MeasureOracle::uniform(n);
  std::vector<Rational> w;
  for (const auto& x : j.at("weights")) w.push_back(json_rational(x));
  if (w.size() != n) throw std::invalid_argument("weights do not match the point count");
  return MeasureOracle::atomic(std::move(w));
}

FiniteMetricSpace exact_line(const std::vector<Rational>& xs) {
  const size_t n = xs.size();
  std::vector<Rational> m(n * n);
  std::vector<std::string> labels;
  Rational res(0);
  for (size_t i = 0; i < n; ++i) {
    labels.push_back(to_string(xs[i]));
    for (size_t j = 0; j < n; ++j) {
      m[i * n + j] = abs(xs[i] - xs[j]);
      if (i != j && sgn(m[i * n + j]) == 0) throw std::invalid_argument("line points must be distinct");
      if (i != j && (sgn(res) == 0 || m[i * n + j] < res)) res = m[i * n + j];
    }
  }
  if (sgn(res) == 0) res = 1;
  return FiniteMetricSpace::exact(std::move(labels), m, Rational(res / 4));
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& source) {
  std::vector<ConfigEntry> out;
  std::string section, raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    auto where = [&](const std::string& msg) { return ConfigError(source + ":" + std::to_string(line) + ": " + msg); };
    if (text.front() == '[') {
      if (text.back() != ']') throw where("unterminated section header '" + text + "'");
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      if (section.empty()) throw where("empty section name");
      continue;
    }
    auto eq = text.find('=');
    if (eq == std::string::npos) throw where("expected key = value, got '" + text + "'");
    ConfigEntry e{section, trim(std::string_view(text).substr(0, eq)), trim(std::string_view(text).substr(eq + 1)), line};
    if (e.key.empty()) throw where("missing key before '='");
    if (e.value.empty()) throw where("missing value for '" + e.key + "'");
    out.push_back(std::move(e));
  }
  return out;
}

LoadedSpace load_space(std::string_view descriptor, Rng& rng) {
  const auto colon = descriptor.find(':');
  const std::string family = trim(descriptor.substr(0, colon));
  const std::string body = colon == std::string_view::npos ? std::string() : std::string(descriptor.substr(colon + 1));
  LoadedSpace out{Instance{FiniteMetricSpace::exact({"o"}, {Rational(0)}, Rational(1)), MeasureOracle::uniform(1)},
                  family,
                  0,
                  {}};
  if (family == "line") {
    std::vector<Rational> xs;
    for (const auto& t : split(body, ',')) xs.push_back(parse_rational(t));
    if (xs.empty()) throw std::invalid_argument("line descriptor needs points");
    auto s = exact_line(xs);
    out.inst = Instance{std::move(s), MeasureOracle::uniform(xs.size())};
  } else if (family == "cantor") {
    auto f = descriptor_fields(body, family);
    if (!f.count("k")) throw std::invalid_argument("cantor descriptor needs k");
    out.inst = build_cantor(to_int(f["k"], "cantor k"));
  } else if (family == "davies") {
    auto f = descriptor_fields(body, family);
    if (!f.count("N")) throw std::invalid_argument("davies descriptor needs N");
    DaviesSpec spec;
    spec.N = long_list(f["N"], "davies N");
    spec.depth = f.count("depth") ? to_int(f["depth"], "davies depth") : static_cast<int>(spec.N.size());
    spec.q = f.count("q") ? parse_rational(f["q"]) : Rational(0);
    const std::string mode = f.count("mode") ? f["mode"] : "full";
    if (mode != "full" && mode != "peripheral") throw std::invalid_argument("davies mode must be full or peripheral");
    out.inst = build_davies(spec, mode == "full" ? DaviesMode::Full : DaviesMode::PeripheralOnly);
  } else if (family == "cloud" || family == "json") {
    auto f = descriptor_fields(body, family);
    if (!f.count("file")) throw std::invalid_argument(family + " descriptor needs file");
    const nlohmann::json j = read_json_file(f["file"]);
    if (family == "cloud") {
      const auto& pts = j.is_array() ? j : j.at("points");
      std::vector<std::vector<Rational>> coords;
      for (const auto& p : pts) {
        std::vector<Rational> c;
        for (const auto& x : p) c.push_back(json_rational(x));
        coords.push_back(std::move(c));
      }
      if (coords.empty()) throw std::invalid_argument("cloud file has no points");
      out.dimension = static_cast<int>(coords.front().size());
      auto s = build_euclidean_cloud(coords);
      const size_t n = s.size();
      out.inst = Instance{std::move(s), j.is_array() ? MeasureOracle::uniform(n) : weights_or_uniform(j, n)};
    } else {
      auto s = space_from_json(j.at("space"));
      const size_t n = s.size();
      MeasureOracle mu = j.contains("measure") ? measure_from_json(j.at("measure")) : MeasureOracle::uniform(n);
      out.inst = Instance{std::move(s), std::move(mu)};
    }
  } else if (family == "random") {
    auto f = descriptor_fields(body, family);
    const std::string kind = f.count("kind") ? f["kind"] : "exact";
    const int n = f.count("n") ? to_int(f["n"], "random n") : 6;
    if (n < 1 || n > 64) throw std::invalid_argument("random n must lie in 1..64");
    int dim = 0;
    auto draw = [&]() -> RandomInstance {
      const auto size = static_cast<size_t>(n);
      if (kind == "ultrametric") return random_ultrametric(rng, size);
      if (kind == "line") return random_line(rng, size);
      if (kind == "exact") return random_exact_instance(rng, size);
      if (kind == "cloud") {
        dim = f.count("d") ? to_int(f["d"], "random d") : 1;
        if (dim < 1 || dim > 3) throw std::invalid_argument("random cloud d must lie in 1..3");
        return random_cloud(rng, size, dim);
      }
      throw std::invalid_argument("unknown random kind '" + kind + "'");
    };
    RandomInstance ri = draw();
    out.dimension = dim;
    out.family = "random:" + ri.name;
    out.E = ri.E;
    out.inst = std::move(ri.inst);
    return out;
  } else {
    throw std::invalid_argument("unknown space family '" + family + "'");
  }
  out.E = all_points(out.inst.space);
  return out;
}

namespace {

struct Options {
  std::string space, left, right;
  std::string kind = "packing";
  std::string q = "0";
  std::string h = "power:1";
  std::string g;
  std::string delta, rmin, grid = "auto";
  std::string E, F;
  std::string out, csv, config, limits;
  uint64_t seed = 1;
  int instances = 1;
  int d = 0;
  std::string check;
  // davies
  std::string N;
  int depth = 0;
  int scale = 0;
  // cantor
  int k_lo = 1, k_hi = 3, product_max_k = 0;
  std::string cantor_scale = "1";
  bool no_cross_check = false;
};

PointSet parse_subset(const std::string& text, const PointSet& fallback, size_t n) {
  if (text.empty() || text == "all") return fallback;
  if (text == "none") return {};
  PointSet E;
  for (const auto& t : split(text, ',')) {
    const int i = to_int(t, "point index");
    if (i < 0 || static_cast<size_t>(i) >= n) throw std::invalid_argument("point index " + t + " out of range");
    E.push_back(static_cast<size_t>(i));
  }
  std::sort(E.begin(), E.end());
  E.erase(std::unique(E.begin(), E.end()), E.end());
  return E;
}

Rational subset_diameter(const FiniteMetricSpace& s, const PointSet& E) {
  Rational d(0);
  for (size_t a = 0; a < E.size(); ++a) {
    for (size_t b = a + 1; b < E.size(); ++b) d = std::max(d, s.distance(E[a], E[b]));
  }
  return d;
}

std::string default_grid(const std::string& family) {
  if (family == "cantor") return "triadic";
  if (family == "davies") return "dyadic";
  return "pairwise";
}

// Grid kinds: auto, pairwise, dyadic, triadic, list:a,b,...
Band make_band(const Options& o, const std::vector<std::pair<const LoadedSpace*, const PointSet*>>& factors) {
  Rational r_min, delta;
  bool first = true;
  for (const auto& [ls, E] : factors) {
    const Rational res = ls->inst.space.resolution();
    const Rational dia = subset_diameter(ls->inst.space, *E);
    if (first || res > r_min) r_min = res;
    if (first || dia > delta) delta = dia;
    first = false;
  }
  if (!o.rmin.empty()) r_min = parse_rational(o.rmin);
  if (!o.delta.empty()) delta = parse_rational(o.delta);
  if (delta < r_min) delta = r_min;
  std::string kind = o.grid == "auto" ? default_grid(factors.front().first->family) : o.grid;
  if (kind.rfind("list:", 0) == 0) {
    std::vector<Rational> g;
    for (const auto& t : split(std::string_view(kind).substr(5), ',')) g.push_back(parse_rational(t));
    return Band::make(r_min, delta, std::move(g));
  }
  if (kind == "dyadic") return dyadic_band(r_min, delta);
  if (kind == "triadic") return triadic_band(r_min, delta);
  if (kind != "pairwise") throw std::invalid_argument("unknown grid '" + o.grid + "'");
  std::vector<Rational> g;
  for (const auto& [ls, E] : factors) {
    const Band b = pairwise_band(ls->inst.space, *E, r_min, delta);
    g.insert(g.end(), b.grid.begin(), b.grid.end());
  }
  return Band::make(r_min, delta, std::move(g));
}

HausdorffFunction pick_h(const std::string& text, Rng& rng, int variant) {
  if (text == "random") return h_variant(rng, variant);
  return parse_hausdorff(text);
}

Rational pick_q(const std::string& text, Rng& rng) {
  if (text == "random") return random_q(rng);
  return parse_rational(text);
}

nlohmann::json band_json(const Band& b) {
  nlohmann::json g = nlohmann::json::array();
  for (const auto& r : b.grid) g.push_back(to_string(r));
  return {{"r_min", to_string(b.r_min)}, {"delta", to_string(b.delta)}, {"grid", g}};
}

nlohmann::json checks_json(std::vector<CheckReport>& checks) {
  std::stable_sort(checks.begin(), checks.end(), [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) arr.push_back(to_json(c));
  return arr;
}

void prefix(std::vector<CheckReport>& checks, const std::string& tag) {
  for (auto& c : checks) c.name = tag + c.name;
}

std::string instance_tag(int i, int count) {
  if (count <= 1) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "i%03d/", i);
  return buf;
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return kExitHolds;
    case Verdict::Fails:
      return kExitFails;
    case Verdict::Inconclusive:
      return kExitInconclusive;
  }
  return kExitError;
}

struct Run {
  nlohmann::json report;
  std::vector<CheckReport> checks;
  bool has_checks = false;
};

CheckOptions check_options(const Options& o) {
  CheckOptions c;
  c.limits = o.limits.empty() ? engine_limits() : parse_limits(o.limits);
  c.cross_check = !o.no_cross_check;
  return c;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

Run cmd_space(const Options& o) {
  require(!o.space.empty(), "space: --space is required");
  Rng rng(o.seed);
  LoadedSpace ls = load_space(o.space, rng);
  Run run;
  const MetricReport rep = validate_metric(ls.inst.space);
  run.report["family"] = ls.family;
  run.report["point_count"] = ls.inst.space.size();
  run.report["validation"] = to_json(rep);
  run.report["diameter"] = to_string(ls.inst.space.diameter());
  run.report["resolution"] = to_string(ls.inst.space.resolution());
  run.report["measure"] = to_json(ls.inst.measure);
  if (ls.inst.space.size() <= 512) {
    run.report["space"] = to_json(ls.inst.space);
  } else {
    run.report["space"] = "omitted: more than 512 points";
  }
  return run;
}

Run cmd_premeasure(const Options& o) {
  require(!o.space.empty(), "premeasure: --space is required");
  Rng rng(o.seed);
  LoadedSpace ls = load_space(o.space, rng);
  const PointSet E = parse_subset(o.E, ls.E, ls.inst.space.size());
  const Band band = make_band(o, {{&ls, &E}});
  const HausdorffFunction h = pick_h(o.h, rng, 1);
  const Objective obj{ls.inst.space, E, ls.inst.measure, pick_q(o.q, rng), h};
  const CheckOptions c = check_options(o);
  const Target t = parse_target(o.kind);
  const PremeasureResult r = premeasure(t, obj, band, c.limits);
  Run run;
  run.report["result"] = to_json(r);
  run.report["value_approx"] = r.value.is_infinite() ? nlohmann::json("inf") : nlohmann::json(r.value.approx());
  run.report["E"] = E;
  if (t != Target::Weighted) {
    const auto cands = band_candidates(E, band);
    if (c.cross_check && cands.size() <= c.limits.brute_candidates) {
      run.checks.push_back(decide("oracle:" + to_string(t), Relation::Eq, Side::of(to_string(t), r, obj),
                                  Side::exact("brute", brute_force_oracle(t, obj, cands, c.limits))));
      run.has_checks = true;
    }
  }
  return run;
}

Run cmd_verify(const Options& o) {
  const CheckOptions c = check_options(o);
  Rng rng(o.seed);
  Run run;
  run.has_checks = true;
  nlohmann::json instances = nlohmann::json::array();
  const std::string& which = o.check;
  require(o.instances >= 1, "--instances must be positive");
  const bool product = which == "theorem-a" || which == "theorem-c";
  if (!product && which != "chain" && which != "theorem-b" && which != "amenability") {
    throw std::invalid_argument("unknown check '" + which + "' (chain, theorem-a, theorem-b, theorem-c, amenability)");
  }
  for (int i = 0; i < o.instances; ++i) {
    const std::string tag = instance_tag(i, o.instances);
    nlohmann::json inst;
    std::vector<CheckReport> checks;
    if (product) {
      require(!o.left.empty() && !o.right.empty(), which + ": --left and --right are required");
      LoadedSpace L = load_space(o.left, rng);
      LoadedSpace R = load_space(o.right, rng);
      const PointSet E = parse_subset(o.E, L.E, L.inst.space.size());
      const PointSet F = parse_subset(o.F, R.E, R.inst.space.size());
      const Band band = make_band(o, {{&L, &E}, {&R, &F}});
      const HausdorffFunction h = pick_h(o.h, rng, i % 2);
      const HausdorffFunction g = pick_h(o.g.empty() ? o.h : o.g, rng, i % 2);
      const Rational q = pick_q(o.q, rng);
      const ProductSetup setup{L.inst, E, R.inst, F, q, h, g, band};
      if (which == "theorem-a") {
        checks = verify_theorem_a(setup, c);
      } else {
        checks.push_back(verify_theorem_c(setup, c));
      }
      inst = {{"left", L.family}, {"right", R.family}, {"E", E}, {"F", F}, {"q", to_string(q)},
              {"h", h.descriptor()}, {"g", g.descriptor()}, {"band", band_json(band)}};
    } else {
      require(!o.space.empty(), which + ": --space is required");
      LoadedSpace ls = load_space(o.space, rng);
      const PointSet E = parse_subset(o.E, ls.E, ls.inst.space.size());
      const Band band = make_band(o, {{&ls, &E}});
      const HausdorffFunction h = pick_h(o.h, rng, i % 2);
      const Rational q = pick_q(o.q, rng);
      const Objective obj{ls.inst.space, E, ls.inst.measure, q, h};
      if (which == "chain") {
        checks = verify_chain(obj, band, c);
      } else {
        const int d = o.d > 0 ? o.d : ls.dimension;
        require(d >= 1, which + ": --d is required for non-Euclidean spaces");
        if (which == "theorem-b") {
          checks = verify_theorem_b_bounds(obj, band, d, c);
        } else {
          checks = verify_amenability(obj, band, d, o.seed + static_cast<uint64_t>(i), c);
        }
      }
      inst = {{"space", ls.family}, {"points", ls.inst.space.size()}, {"E", E}, {"q", to_string(q)},
              {"h", h.descriptor()}, {"band", band_json(band)}};
    }
    prefix(checks, tag);
    instances.push_back(std::move(inst));
    run.checks.insert(run.checks.end(), std::make_move_iterator(checks.begin()), std::make_move_iterator(checks.end()));
  }
  run.report["check"] = which;
  run.report["instances"] = std::move(instances);
  return run;
}

Run cmd_davies(const Options& o) {
  require(!o.N.empty(), "davies: --N is required");
  DaviesSpec spec;
  spec.N = long_list(o.N, "N");
  spec.depth = o.depth > 0 ? o.depth : static_cast<int>(spec.N.size());
  spec.q = parse_rational(o.q);
  const int n = o.scale > 0 ? o.scale : spec.depth;
  DaviesSeparation sep = davies_separation(spec, n, check_options(o));
  Run run;
  run.has_checks = true;
  run.checks = std::move(sep.checks);
  run.report["davies"] = std::move(sep.details);
  return run;
}

Run cmd_cantor(const Options& o, std::string& csv_text) {
  CantorTrend t = cantor_trend(o.k_lo, o.k_hi, parse_rational(o.cantor_scale), o.product_max_k, check_options(o));
  Run run;
  run.has_checks = true;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json j{{"k", r.k}, {"H_s", to_json(r.H)}, {"P_s", to_json(r.P)}};
    if (r.P_product) j["P_st_product"] = to_json(*r.P_product);
    rows.push_back(std::move(j));
  }
  run.report["rows"] = std::move(rows);
  run.checks = std::move(t.checks);
  csv_text = cantor_csv(t);
  return run;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "Config file (key = value, [section] headers)");
  sub->add_option("--out", o.out, "Write the JSON report here instead of stdout");
  sub->add_option("--seed", o.seed, "Seed for random descriptors and experiments");
  sub->add_option("--limits", o.limits, "Size guards, e.g. bb=4000,nodes=1000000");
  sub->add_flag("--no-cross-check", o.no_cross_check, "Skip the brute-force comparisons");
}

void add_objective(CLI::App* sub, Options& o) {
  sub->add_option("--q", o.q, "Exponent q (rational, or 'random')");
  sub->add_option("--h", o.h, "Hausdorff function (power:1, power:log2/log3, table:..., random)");
  sub->add_option("--delta", o.delta, "Band top radius");
  sub->add_option("--rmin", o.rmin, "Band bottom radius (default: resolution)");
  sub->add_option("--grid", o.grid, "auto, pairwise, dyadic, triadic or list:r1,r2,...");
  sub->add_option("--E", o.E, "Comma-separated point indices, all or none (default: all)");
}

// Known option names of a subcommand, without the dashes.
bool has_option(const CLI::App* sub, const std::string& key) {
  return sub->get_option_no_throw("--" + key) != nullptr;
}

std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

int run_cli(const std::vector<std::string>& in_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"fracpack: band-level fractal premeasures and their inequalities"};
  app.require_subcommand(1);
  // "--h" names the Hausdorff function, so help is long-form only
  app.set_help_flag("--help", "Print this help message and exit");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();

  auto* sp = app.add_subcommand("space", "Build, validate and dump a space");
  sp->add_option("--space", o.space, "Space descriptor")->required(false);
  add_common(sp, o);

  auto* pm = app.add_subcommand("premeasure", "One premeasure on one instance");
  pm->add_option("--kind", o.kind, "packing, pseudo, relative, weak-pseudo, weighted or hausdorff");
  pm->add_option("--space", o.space, "Space descriptor");
  add_objective(pm, o);
  add_common(pm, o);

  auto* vf = app.add_subcommand("verify", "Check an inequality family");
  vf->add_option("check", o.check, "chain, theorem-a, theorem-b, theorem-c or amenability")->required();
  vf->add_option("--space", o.space, "Space descriptor (chain, theorem-b, amenability)");
  vf->add_option("--left", o.left, "Left factor (theorem-a, theorem-c)");
  vf->add_option("--right", o.right, "Right factor (theorem-a, theorem-c)");
  vf->add_option("--g", o.g, "Hausdorff function of the right factor (default: --h)");
  vf->add_option("--F", o.F, "Point indices of the right factor (default: all)");
  vf->add_option("--d", o.d, "Euclidean dimension for the 3^d bounds");
  vf->add_option("--instances", o.instances, "Repeat with fresh draws of the random descriptors");
  add_objective(vf, o);
  add_common(vf, o);

  auto* dv = app.add_subcommand("davies", "Packing versus pseudo-packing gap on the Davies space");
  dv->add_option("--N", o.N, "Comma-separated N_1..N_D");
  dv->add_option("--depth", o.depth, "Truncation depth (default: length of N)");
  dv->add_option("--q", o.q, "Exponent q in [0, 1)");
  dv->add_option("--scale", o.scale, "Scale index n (default: depth)");
  add_common(dv, o);

  auto* ct = app.add_subcommand("cantor", "Cantor H^s versus P^s trend");
  ct->add_option("--k-lo", o.k_lo, "First level");
  ct->add_option("--k-hi", o.k_hi, "Last level");
  ct->add_option("--scale", o.cantor_scale, "delta_k = scale * 3^-k");
  ct->add_option("--product-max-k", o.product_max_k, "Compute P^(s+t)(E x E) up to this level");
  ct->add_option("--csv", o.csv, "Write the trend table as CSV");
  add_common(ct, o);

  // the config file becomes flags placed ahead of the command line, so flags win
  std::vector<std::string> args = in_args;
  try {
    if (auto path = config_path(in_args)) {
      if (args.empty()) throw std::invalid_argument("a subcommand is required");
      const std::string cmd = args.front();
      CLI::App* sub = nullptr;
      for (auto* s : {sp, pm, vf, dv, ct}) {
        if (s->get_name() == cmd) sub = s;
      }
      if (!sub) throw std::invalid_argument("unknown subcommand '" + cmd + "'");
      std::ifstream f(*path);
      if (!f) throw ConfigError(*path + ": cannot open config file");
      std::vector<std::string> injected;
      std::optional<std::string> positional;
      for (const auto& e : parse_config(f, *path)) {
        if (!e.section.empty() && e.section != cmd) continue;
        const std::string where = *path + ":" + std::to_string(e.line) + ": ";
        if (e.key == "config") throw ConfigError(where + "config files cannot include others");
        if (sub == vf && e.key == "check") {
          positional = e.value;
          continue;
        }
        if (!has_option(sub, e.key)) throw ConfigError(where + "unknown key '" + e.key + "' for '" + cmd + "'");
        if (e.key == "no-cross-check") {
          if (e.value == "true" || e.value == "1") injected.push_back("--no-cross-check");
          else if (e.value != "false" && e.value != "0") throw ConfigError(where + "no-cross-check takes true or false");
          continue;
        }
        injected.push_back("--" + e.key + "=" + e.value);
      }
      std::vector<std::string> rebuilt{cmd};
      const bool user_positional =
          sub == vf && args.size() > 1 && args[1].rfind("--", 0) != 0;
      if (positional && !user_positional) rebuilt.push_back(*positional);
      if (user_positional) rebuilt.push_back(args[1]);
      rebuilt.insert(rebuilt.end(), injected.begin(), injected.end());
      rebuilt.insert(rebuilt.end(), args.begin() + (user_positional ? 2 : 1), args.end());
      args = std::move(rebuilt);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitHolds : kExitError;
  }

  try {
    Run run;
    std::string csv_text;
    CLI::App* used = app.get_subcommands().front();
    const std::string cmd = used->get_name();
    if (cmd == "space") {
      run = cmd_space(o);
    } else if (cmd == "premeasure") {
      run = cmd_premeasure(o);
    } else if (cmd == "verify") {
      run = cmd_verify(o);
    } else if (cmd == "davies") {
      run = cmd_davies(o);
    } else {
      run = cmd_cantor(o, csv_text);
    }

    // resolved settings, minus output locations
    nlohmann::json cfg;
    for (const CLI::Option* opt : used->get_options()) {
      const std::string name = opt->get_name();
      if (name.empty() || name == "--help" || name == "-h" || name == "--out" || name == "--csv" ||
          name == "--config") {
        continue;
      }
      std::string key = name.rfind("--", 0) == 0 ? name.substr(2) : name;
      if (key == "no-cross-check") {
        cfg[key] = o.no_cross_check;
      } else {
        const auto res = opt->results();
        cfg[key] = res.empty() ? opt->get_default_str() : res.back();
      }
    }

    nlohmann::json report = std::move(run.report);
    report["schema"] = "fracpack-report/1";
    report["command"] = cmd;
    report["config"] = std::move(cfg);
    Verdict v = Verdict::Holds;
    if (run.has_checks) {
      v = overall(run.checks);
      report["checks"] = checks_json(run.checks);
      report["verdict"] = to_string(v);
    }
    const std::string text = report.dump(2) + "\n";
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream f(o.out, std::ios::binary);
      if (!f) throw std::invalid_argument("cannot write " + o.out);
      f << text;
      if (run.has_checks) {
        size_t counts[3] = {0, 0, 0};
        for (const auto& c : run.checks) ++counts[static_cast<int>(c.verdict)];
        out << cmd << ": " << to_string(v) << " (" << counts[0] << " hold, " << counts[1] << " fail, " << counts[2]
            << " inconclusive)\n";
      }
    }
    if (!o.csv.empty()) {
      std::ofstream f(o.csv, std::ios::binary);
      if (!f) throw std::invalid_argument("cannot write " + o.csv);
      f << csv_text;
    }
    return exit_for(v);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace fracpack
