#include "fracpack/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "fracpack/kernels.hpp"

namespace fracpack {

namespace {

constexpr int64_t kScaledCeiling = int64_t{1} << 62;
constexpr size_t kMaterializeLimit = 4096;

double float_threshold(const Rational& r) {
  double t = r.get_d();
  return t + kFloatTolerance * std::max(1.0, std::fabs(t));
}

bool fits_int64(const mpz_class& z) { return z >= 0 && z < kScaledCeiling; }

void set_bit(uint64_t* out, size_t j) { out[j >> 6] |= uint64_t{1} << (j & 63); }

Rational over(int64_t numerator, const mpz_class& denominator) {
  Rational q(mpz_class(numerator), denominator);
  q.canonicalize();
  return q;
}

}  // namespace

FiniteMetricSpace FiniteMetricSpace::exact(std::vector<std::string> labels, const std::vector<Rational>& matrix,
                                           Rational resolution) {
  const size_t n = labels.size();
  if (n == 0) throw std::invalid_argument("metric space needs at least one point");
  if (matrix.size() != n * n) throw std::invalid_argument("distance matrix must be n x n");
  if (sgn(resolution) <= 0) throw std::invalid_argument("resolution must be positive");
  std::vector<Rational> m(matrix);
  for (auto& d : m) {
    d.canonicalize();
    if (sgn(d) < 0) throw std::invalid_argument("distances must be non-negative");
  }
  resolution.canonicalize();
  FiniteMetricSpace s;
  s.n_ = n;
  s.mode_ = NumberMode::Exact;
  s.labels_ = std::move(labels);
  s.resolution_ = std::move(resolution);
  s.build_scaled(m);
  return s;
}

void FiniteMetricSpace::build_scaled(const std::vector<Rational>& matrix) {
  mpz_class lcm = 1;
  for (const auto& d : matrix) {
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.get_den_mpz_t());
    if (mpz_sizeinbase(lcm.get_mpz_t(), 2) > 62) break;
  }
  bool ok = mpz_sizeinbase(lcm.get_mpz_t(), 2) <= 62;
  std::vector<int64_t> scaled;
  if (ok) {
    scaled.resize(matrix.size());
    for (size_t k = 0; k < matrix.size(); ++k) {
      mpz_class v = matrix[k].get_num() * (lcm / matrix[k].get_den());
      if (!fits_int64(v)) {
        ok = false;
        break;
      }
      scaled[k] = v.get_si();
    }
  }
  if (ok) {
    integral_ = true;
    scaled_ = std::move(scaled);
    denominator_ = lcm;
  } else {
    rationals_ = matrix;
  }
}

FiniteMetricSpace FiniteMetricSpace::floating(std::vector<std::string> labels, std::vector<double> matrix,
                                              Rational resolution) {
  const size_t n = labels.size();
  if (n == 0) throw std::invalid_argument("metric space needs at least one point");
  if (matrix.size() != n * n) throw std::invalid_argument("distance matrix must be n x n");
  if (sgn(resolution) <= 0) throw std::invalid_argument("resolution must be positive");
  for (double d : matrix) {
    if (!(d >= 0) || !std::isfinite(d)) throw std::invalid_argument("distances must be finite and non-negative");
  }
  FiniteMetricSpace s;
  s.n_ = n;
  s.mode_ = NumberMode::Floating;
  s.labels_ = std::move(labels);
  s.resolution_ = std::move(resolution);
  s.floats_ = std::move(matrix);
  return s;
}

const int64_t* FiniteMetricSpace::scaled_row(size_t i, std::vector<int64_t>& buf) const {
  if (!scaled_.empty()) return scaled_.data() + i * n_;
  // lazy product
  const size_t ny = right_->size();
  std::vector<int64_t> bx, by;
  const int64_t* rx = left_->scaled_row(i / ny, bx);
  const int64_t* ry = right_->scaled_row(i % ny, by);
  const int64_t mx = mpz_class(denominator_ / left_->denominator_).get_si();
  const int64_t my = mpz_class(denominator_ / right_->denominator_).get_si();
  buf.resize(n_);
  for (size_t a = 0; a < left_->size(); ++a) {
    const int64_t dx = rx[a] * mx;
    for (size_t b = 0; b < ny; ++b) buf[a * ny + b] = std::max(dx, ry[b] * my);
  }
  return buf.data();
}

const double* FiniteMetricSpace::float_row(size_t i, std::vector<double>& buf) const {
  if (!floats_.empty()) return floats_.data() + i * n_;
  if (mode_ == NumberMode::Floating && has_factors()) {
    const size_t ny = right_->size();
    buf.resize(n_);
    for (size_t a = 0; a < left_->size(); ++a) {
      const double dx = left_->distance_approx(i / ny, a);
      for (size_t b = 0; b < ny; ++b) buf[a * ny + b] = std::max(dx, right_->distance_approx(i % ny, b));
    }
    return buf.data();
  }
  buf.resize(n_);
  for (size_t j = 0; j < n_; ++j) buf[j] = distance_approx(i, j);
  return buf.data();
}

Rational FiniteMetricSpace::distance(size_t i, size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("point index out of range");
  if (mode_ == NumberMode::Floating) return rational_from_double(distance_approx(i, j));
  if (!scaled_.empty()) return over(scaled_[i * n_ + j], denominator_);
  if (!rationals_.empty()) return rationals_[i * n_ + j];
  const size_t ny = right_->size();
  return std::max(left_->distance(i / ny, j / ny), right_->distance(i % ny, j % ny));
}

double FiniteMetricSpace::distance_approx(size_t i, size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("point index out of range");
  if (!floats_.empty()) return floats_[i * n_ + j];
  if (!scaled_.empty()) return over(scaled_[i * n_ + j], denominator_).get_d();
  if (!rationals_.empty()) return rationals_[i * n_ + j].get_d();
  const size_t ny = right_->size();
  return std::max(left_->distance_approx(i / ny, j / ny), right_->distance_approx(i % ny, j % ny));
}

int64_t FiniteMetricSpace::scaled_threshold(const Rational& r) const {
  if (sgn(r) < 0) return -1;
  mpz_class scaled = r.get_num() * denominator_;
  mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), r.get_den_mpz_t());
  if (scaled >= kScaledCeiling) return std::numeric_limits<int64_t>::max();
  return scaled.get_si();
}

bool FiniteMetricSpace::within(size_t i, size_t j, const Rational& r) const {
  if (mode_ == NumberMode::Floating) return distance_approx(i, j) <= float_threshold(r);
  if (!scaled_.empty()) return scaled_[i * n_ + j] <= scaled_threshold(r);
  return distance(i, j) <= r;
}

bool FiniteMetricSpace::separated(size_t i, size_t j, const Rational& t) const {
  if (mode_ == NumberMode::Floating) return distance_approx(i, j) > float_threshold(t);
  if (!scaled_.empty()) return scaled_[i * n_ + j] > scaled_threshold(t);
  return distance(i, j) > t;
}

void FiniteMetricSpace::rational_mask(size_t center, const Rational& r, uint64_t* out) const {
  std::fill(out, out + kernels::words_for(n_), uint64_t{0});
  for (size_t j = 0; j < n_; ++j) {
    if (distance(center, j) <= r) set_bit(out, j);
  }
}

void FiniteMetricSpace::ball_mask(size_t center, const Rational& r, uint64_t* out) const {
  if (center >= n_) throw std::out_of_range("ball center out of range");
  const auto& k = kernels::active();
  if (mode_ == NumberMode::Floating) {
    std::vector<double> buf;
    k.mask_le_f64(float_row(center, buf), n_, float_threshold(r), out);
  } else if (integral_) {
    std::vector<int64_t> buf;
    k.mask_le_i64(scaled_row(center, buf), n_, scaled_threshold(r), out);
  } else {
    rational_mask(center, r, out);
  }
}

void FiniteMetricSpace::not_separated_mask(size_t center, const Rational& t, uint64_t* out) const {
  // !(rho > t) is rho <= t in exact mode and rho <= t + tol in floating mode:
  // the same threshold test as ball membership.
  ball_mask(center, t, out);
}

Rational FiniteMetricSpace::diameter() const {
  Rational best = 0;
  if (!scaled_.empty()) {
    int64_t m = *std::max_element(scaled_.begin(), scaled_.end());
    return over(m, denominator_);
  }
  if (has_factors()) return std::max(left_->diameter(), right_->diameter());
  for (size_t i = 0; i < n_; ++i) {
    for (size_t j = i + 1; j < n_; ++j) best = std::max(best, distance(i, j));
  }
  return best;
}

std::vector<Rational> FiniteMetricSpace::distinct_distances() const {
  std::vector<Rational> out;
  if (!scaled_.empty()) {
    std::set<int64_t> seen;
    for (size_t i = 0; i < n_; ++i) {
      for (size_t j = i + 1; j < n_; ++j) seen.insert(scaled_[i * n_ + j]);
    }
    for (int64_t v : seen) out.emplace_back(mpz_class(v), denominator_);
    for (auto& v : out) v.canonicalize();
    return out;
  }
  if (has_factors() && mode_ == NumberMode::Exact) {
    std::set<Rational> seen;
    for (const auto& d : left_->distinct_distances()) seen.insert(d);
    for (const auto& d : right_->distinct_distances()) seen.insert(d);
    return {seen.begin(), seen.end()};
  }
  std::set<Rational> seen;
  for (size_t i = 0; i < n_; ++i) {
    for (size_t j = i + 1; j < n_; ++j) seen.insert(distance(i, j));
  }
  return {seen.begin(), seen.end()};
}

MetricReport validate_metric(FiniteMetricSpace& space) {
  MetricReport rep;
  const size_t n = space.size();
  if (space.mode() == NumberMode::Floating) {
    for (size_t i = 0; i < n; ++i) {
      if (space.distance_approx(i, i) != 0) rep.identity = false;
      for (size_t j = 0; j < n; ++j) {
        double dij = space.distance_approx(i, j);
        if (i != j && !(dij > 0)) rep.identity = false;
        if (std::fabs(dij - space.distance_approx(j, i)) > kFloatTolerance) rep.symmetric = false;
        for (size_t k = 0; k < n; ++k) {
          double dik = space.distance_approx(i, k), djk = space.distance_approx(j, k);
          if (dik > dij + djk + kFloatTolerance) rep.triangle = false;
          if (dik > std::max(dij, djk) + kFloatTolerance) rep.ultrametric = false;
        }
      }
    }
  } else {
    std::vector<int64_t> row_i, row_j;
    std::vector<std::vector<int64_t>> rows;
    if (space.integral_) {
      rows.resize(n);
      for (size_t i = 0; i < n; ++i) {
        const int64_t* r = space.scaled_row(i, row_i);
        rows[i].assign(r, r + n);
      }
      for (size_t i = 0; i < n; ++i) {
        if (rows[i][i] != 0) rep.identity = false;
        for (size_t j = 0; j < n; ++j) {
          const int64_t dij = rows[i][j];
          if (i != j && dij <= 0) rep.identity = false;
          if (dij != rows[j][i]) rep.symmetric = false;
          if (!rep.triangle && !rep.ultrametric) continue;
          const auto& rj = rows[j];
          const auto& ri = rows[i];
          for (size_t k = 0; k < n; ++k) {
            if (ri[k] > dij + rj[k]) rep.triangle = false;
            if (ri[k] > std::max(dij, rj[k])) rep.ultrametric = false;
          }
        }
      }
    } else {
      for (size_t i = 0; i < n; ++i) {
        if (sgn(space.distance(i, i)) != 0) rep.identity = false;
        for (size_t j = 0; j < n; ++j) {
          Rational dij = space.distance(i, j);
          if (i != j && sgn(dij) <= 0) rep.identity = false;
          if (dij != space.distance(j, i)) rep.symmetric = false;
          for (size_t k = 0; k < n; ++k) {
            Rational dik = space.distance(i, k), djk = space.distance(j, k);
            if (dik > dij + djk) rep.triangle = false;
            if (dik > std::max(dij, djk)) rep.ultrametric = false;
          }
        }
      }
    }
  }
  space.triangle_checked_ = rep.triangle;
  space.ultrametric_ = rep.ultrametric;
  return rep;
}

std::vector<size_t> ball_members(const FiniteMetricSpace& space, size_t center, const Rational& r) {
  if (sgn(r) < 0) throw std::invalid_argument("ball radius must be >= 0");
  std::vector<uint64_t> mask(kernels::words_for(space.size()));
  space.ball_mask(center, r, mask.data());
  std::vector<size_t> out;
  for (size_t w = 0; w < mask.size(); ++w) {
    uint64_t bits = mask[w];
    while (bits) {
      out.push_back(w * 64 + static_cast<size_t>(__builtin_ctzll(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

FiniteMetricSpace product_space(const FiniteMetricSpace& x, const FiniteMetricSpace& y, size_t point_limit) {
  const size_t nx = x.size(), ny = y.size();
  if (nx != 0 && ny > point_limit / nx) {
    throw std::length_error("product space has " + std::to_string(nx) + " x " + std::to_string(ny) +
                            " points, above the limit of " + std::to_string(point_limit));
  }
  FiniteMetricSpace s;
  s.n_ = nx * ny;
  s.resolution_ = std::max(x.resolution(), y.resolution());
  s.labels_.reserve(s.n_);
  for (size_t i = 0; i < nx; ++i) {
    for (size_t j = 0; j < ny; ++j) s.labels_.push_back("(" + x.labels()[i] + "," + y.labels()[j] + ")");
  }
  s.left_ = std::make_shared<const FiniteMetricSpace>(x);
  s.right_ = std::make_shared<const FiniteMetricSpace>(y);
  const bool floating = x.mode() == NumberMode::Floating || y.mode() == NumberMode::Floating;
  s.mode_ = floating ? NumberMode::Floating : NumberMode::Exact;
  const bool integral = !floating && x.integral_ && y.integral_;
  if (integral) {
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), x.denominator_.get_mpz_t(), y.denominator_.get_mpz_t());
    // the largest scaled distance must still fit after rescaling
    mpz_class top = std::max(mpz_class(x.diameter() * l), mpz_class(y.diameter() * l));
    if (mpz_sizeinbase(l.get_mpz_t(), 2) <= 62 && fits_int64(top)) {
      s.integral_ = true;
      s.denominator_ = l;
      if (s.n_ <= kMaterializeLimit) {
        std::vector<int64_t> full(s.n_ * s.n_), buf;
        for (size_t i = 0; i < s.n_; ++i) {
          const int64_t* row = s.scaled_row(i, buf);
          std::copy(row, row + s.n_, full.begin() + static_cast<std::ptrdiff_t>(i * s.n_));
        }
        s.scaled_ = std::move(full);
      }
      return s;
    }
  }
  if (s.n_ > kMaterializeLimit) {
    if (floating) return s;  // rows generated from the factors
    throw std::length_error("product of rational-matrix spaces too large to materialize");
  }
  if (floating) {
    s.floats_.resize(s.n_ * s.n_);
    for (size_t i = 0; i < s.n_; ++i) {
      for (size_t j = 0; j < s.n_; ++j) {
        s.floats_[i * s.n_ + j] = std::max(x.distance_approx(i / ny, j / ny), y.distance_approx(i % ny, j % ny));
      }
    }
  } else {
    std::vector<Rational> m(s.n_ * s.n_);
    for (size_t i = 0; i < s.n_; ++i) {
      for (size_t j = 0; j < s.n_; ++j) m[i * s.n_ + j] = std::max(x.distance(i / ny, j / ny), y.distance(i % ny, j % ny));
    }
    s.build_scaled(m);
  }
  return s;
}

Gauge Gauge::constant(size_t points, const Rational& value) {
  Gauge g;
  g.cap.assign(points, value);
  g.check(points);
  return g;
}

void Gauge::check(size_t points) const {
  if (cap.size() != points) throw std::invalid_argument("gauge must give one cap per point");
  for (const auto& c : cap) {
    if (sgn(c) <= 0) throw std::invalid_argument("gauge caps must be positive");
  }
}

nlohmann::json to_json(const FiniteMetricSpace& space) {
  nlohmann::json j;
  j["mode"] = space.mode() == NumberMode::Exact ? "exact" : "floating";
  j["labels"] = space.labels();
  j["resolution"] = to_string(space.resolution());
  j["flags"] = {{"is_ultrametric", space.is_ultrametric()}, {"triangle_checked", space.triangle_checked()}};
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < space.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t k = 0; k < space.size(); ++k) {
      if (space.mode() == NumberMode::Exact) {
        row.push_back(to_string(space.distance(i, k)));
      } else {
        row.push_back(space.distance_approx(i, k));
      }
    }
    rows.push_back(std::move(row));
  }
  j["distances"] = std::move(rows);
  return j;
}

FiniteMetricSpace space_from_json(const nlohmann::json& j) {
  const auto& rows = j.at("distances");
  const size_t n = rows.size();
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    labels = j.at("labels").get<std::vector<std::string>>();
  } else {
    for (size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw std::invalid_argument("labels and distance rows differ in count");
  const std::string mode = j.value("mode", "exact");
  Rational resolution;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) throw std::invalid_argument("distance matrix must be square");
  }
  if (mode == "floating") {
    std::vector<double> m;
    m.reserve(n * n);
    for (const auto& row : rows) {
      for (const auto& v : row) m.push_back(v.get<double>());
    }
    if (j.contains("resolution")) {
      resolution = parse_rational(j.at("resolution").get<std::string>());
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < n; ++i) {
        for (size_t k = i + 1; k < n; ++k) best = std::min(best, m[i * n + k]);
      }
      resolution = std::isfinite(best) ? rational_from_double(best / 4) : Rational(1);
    }
    return FiniteMetricSpace::floating(std::move(labels), std::move(m), resolution);
  }
  if (mode != "exact") throw std::invalid_argument("space mode must be 'exact' or 'floating'");
  std::vector<Rational> m;
  m.reserve(n * n);
  for (const auto& row : rows) {
    for (const auto& v : row) {
      if (v.is_string()) {
        m.push_back(parse_rational(v.get<std::string>()));
      } else if (v.is_number_integer()) {
        m.emplace_back(v.get<long>());
      } else {
        throw std::invalid_argument("exact distances must be \"p/q\" strings or integers");
      }
    }
  }
  if (j.contains("resolution")) {
    resolution = parse_rational(j.at("resolution").get<std::string>());
  } else {
    Rational best = 0;
    for (size_t i = 0; i < n; ++i) {
      for (size_t k = i + 1; k < n; ++k) {
        if (sgn(best) == 0 || (sgn(m[i * n + k]) > 0 && m[i * n + k] < best)) best = m[i * n + k];
      }
    }
    resolution = sgn(best) > 0 ? Rational(best / 4) : Rational(1);
  }
  return FiniteMetricSpace::exact(std::move(labels), m, resolution);
}

nlohmann::json to_json(const MetricReport& report) {
  return {{"identity", report.identity},
          {"symmetric", report.symmetric},
          {"triangle", report.triangle},
          {"ultrametric", report.ultrametric}};
}

}  // namespace fracpack
