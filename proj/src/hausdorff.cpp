#include "fracpack/hausdorff.hpp"

#include <algorithm>
#include <stdexcept>

namespace fracpack {

namespace {

bool parse_log_ratio(std::string_view text, unsigned long& a, unsigned long& b) {
  // "log2/log3" or "log(2)/log(3)"
  std::string s;
  for (char c : text) {
    if (c != '(' && c != ')' && c != ' ') s.push_back(c);
  }
  if (s.rfind("log", 0) != 0) return false;
  auto slash = s.find("/log");
  if (slash == std::string::npos) return false;
  try {
    size_t used = 0;
    std::string left = s.substr(3, slash - 3);
    std::string right = s.substr(slash + 4);
    a = std::stoul(left, &used);
    if (used != left.size()) return false;
    b = std::stoul(right, &used);
    if (used != right.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  return a >= 1 && b >= 2;
}

Real eval_table(const HausdorffFunction::Table& t, const Rational& r) {
  const auto& radii = t.radii;
  const auto& values = t.values;
  auto it = std::lower_bound(radii.begin(), radii.end(), r);
  if (it != radii.end() && *it == r) return values[static_cast<size_t>(it - radii.begin())];
  if (radii.size() == 1) return values[0] * Real(Rational(r / radii[0]));
  // segment k: [radii[k], radii[k+1]]; clamp to the first/last segment outside.
  size_t idx = static_cast<size_t>(it - radii.begin());
  size_t k = idx == 0 ? 0 : std::min(idx - 1, radii.size() - 2);
  Real slope = ln_real(values[k + 1] / values[k]) / ln_real(Real(Rational(radii[k + 1] / radii[k])));
  return values[k] * pow_real(Real(Rational(r / radii[k])), slope);
}

}  // namespace

HausdorffFunction HausdorffFunction::power(const Rational& exponent) {
  if (sgn(exponent) < 0) throw std::invalid_argument("power-law exponent must be >= 0");
  return HausdorffFunction(PowerLaw{Real(exponent), to_string(exponent)});
}

HausdorffFunction HausdorffFunction::power(const Real& exponent, std::string label) {
  if (sgn(exponent.lower()) < 0) throw std::invalid_argument("power-law exponent must be >= 0");
  return HausdorffFunction(PowerLaw{exponent, std::move(label)});
}

HausdorffFunction HausdorffFunction::power_log_ratio(unsigned long a, unsigned long b) {
  Real t = ln_real(Real(Rational(a))) / ln_real(Real(Rational(b)));
  return power(t, "log" + std::to_string(a) + "/log" + std::to_string(b));
}

HausdorffFunction HausdorffFunction::table(std::vector<std::pair<Rational, Real>> points) {
  if (points.empty()) throw std::invalid_argument("table needs at least one breakpoint");
  Table t;
  for (size_t i = 0; i < points.size(); ++i) {
    if (sgn(points[i].first) <= 0) throw std::invalid_argument("table radii must be positive");
    if (sgn(points[i].second.lower()) <= 0) throw std::invalid_argument("table values must be positive");
    if (i > 0) {
      if (!(points[i].first > points[i - 1].first)) {
        throw std::invalid_argument("table radii must be strictly increasing");
      }
      if (!certainly_less(points[i - 1].second, points[i].second)) {
        throw std::invalid_argument("table values must be strictly increasing");
      }
    }
    t.radii.push_back(points[i].first);
    t.values.push_back(points[i].second);
  }
  return HausdorffFunction(std::move(t));
}

HausdorffFunction HausdorffFunction::product(const HausdorffFunction& left, const HausdorffFunction& right) {
  return HausdorffFunction(Product{std::make_shared<const HausdorffFunction>(left),
                                   std::make_shared<const HausdorffFunction>(right)});
}

std::string HausdorffFunction::descriptor() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return "power:" + v.label;
        } else if constexpr (std::is_same_v<T, Table>) {
          std::string out = "table:";
          for (size_t i = 0; i < v.radii.size(); ++i) {
            if (i) out += ",";
            out += to_string(v.radii[i]) + "=" + describe(v.values[i]);
          }
          return out;
        } else {
          return "product(" + v.left->descriptor() + "," + v.right->descriptor() + ")";
        }
      },
      rep_);
}

Real eval_h(const HausdorffFunction& h, const Rational& r) {
  if (sgn(r) < 0) throw std::invalid_argument("eval_h: radius must be >= 0");
  if (sgn(r) == 0) return Real(0);
  return std::visit(
      [&](const auto& v) -> Real {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, HausdorffFunction::PowerLaw>) {
          if (v.exponent.is_zero()) return Real(1);
          return pow_real(Real(r), v.exponent);
        } else if constexpr (std::is_same_v<T, HausdorffFunction::Table>) {
          return eval_table(v, r);
        } else {
          return eval_h(*v.left, r) * eval_h(*v.right, r);
        }
      },
      h.variant());
}

Real finite_order_estimate(const HausdorffFunction& h, std::span<const Rational> radius_grid) {
  if (radius_grid.empty()) throw std::invalid_argument("finite_order_estimate: empty grid");
  Real best;
  bool first = true;
  for (const Rational& r : radius_grid) {
    if (sgn(r) <= 0) throw std::invalid_argument("finite_order_estimate: radii must be positive");
    Real ratio = eval_h(h, Rational(2 * r)) / eval_h(h, r);
    best = first ? ratio : hull_max(best, ratio);
    first = false;
  }
  return best;
}

nlohmann::json to_json(const Real& value) {
  if (value.is_exact()) return to_string(value.lower());
  return nlohmann::json{{"lo", to_string(value.lower())}, {"hi", to_string(value.upper())}};
}

Real real_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Real(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return Real(Rational(j.get<long>()));
  if (j.is_number()) return Real(parse_rational(j.dump()));
  if (j.is_object() && j.contains("lo") && j.contains("hi")) {
    return Real::enclosure(parse_rational(j.at("lo").get<std::string>()),
                           parse_rational(j.at("hi").get<std::string>()));
  }
  throw std::invalid_argument("cannot read a number from JSON: " + j.dump());
}

nlohmann::json to_json(const HausdorffFunction& h) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, HausdorffFunction::PowerLaw>) {
          return {{"kind", "power"}, {"t", v.label}};
        } else if constexpr (std::is_same_v<T, HausdorffFunction::Table>) {
          nlohmann::json pts = nlohmann::json::array();
          for (size_t i = 0; i < v.radii.size(); ++i) pts.push_back({to_string(v.radii[i]), to_json(v.values[i])});
          return {{"kind", "table"}, {"points", pts}};
        } else {
          return {{"kind", "product"}, {"left", to_json(*v.left)}, {"right", to_json(*v.right)}};
        }
      },
      h.variant());
}

HausdorffFunction hausdorff_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") {
    const auto& t = j.at("t");
    if (t.is_string()) {
      unsigned long a = 0, b = 0;
      if (parse_log_ratio(t.get<std::string>(), a, b)) return HausdorffFunction::power_log_ratio(a, b);
    }
    Real e = real_from_json(t);
    return e.is_exact() ? HausdorffFunction::power(e.lower()) : HausdorffFunction::power(e, t.dump());
  }
  if (kind == "table") {
    std::vector<std::pair<Rational, Real>> pts;
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) throw std::invalid_argument("table point must be [r, v]");
      pts.emplace_back(real_from_json(p[0]).exact(), real_from_json(p[1]));
    }
    return HausdorffFunction::table(std::move(pts));
  }
  if (kind == "product") {
    return HausdorffFunction::product(hausdorff_from_json(j.at("left")), hausdorff_from_json(j.at("right")));
  }
  throw std::invalid_argument("unknown Hausdorff function kind '" + kind + "'");
}

HausdorffFunction parse_hausdorff(std::string_view descriptor) {
  auto colon = descriptor.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("h descriptor needs 'kind:args'");
  std::string_view kind = descriptor.substr(0, colon);
  std::string_view args = descriptor.substr(colon + 1);
  if (kind == "power") {
    unsigned long a = 0, b = 0;
    if (parse_log_ratio(args, a, b)) return HausdorffFunction::power_log_ratio(a, b);
    return HausdorffFunction::power(parse_rational(args));
  }
  if (kind == "table") {
    std::vector<std::pair<Rational, Real>> pts;
    size_t start = 0;
    std::string s(args);
    while (start <= s.size()) {
      size_t comma = s.find(',', start);
      std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("table entry must be r=v: '" + item + "'");
      pts.emplace_back(parse_rational(item.substr(0, eq)), Real(parse_rational(item.substr(eq + 1))));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return HausdorffFunction::table(std::move(pts));
  }
  if (kind == "json") return hausdorff_from_json(nlohmann::json::parse(args));
  throw std::invalid_argument("unknown h descriptor kind '" + std::string(kind) + "'");
}

}  // namespace fracpack
