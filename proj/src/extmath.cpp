#include "fracpack/extmath.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fracpack {

namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec = Real::kEnclosureBits + 32) { mpfr_init2(v_, prec); }
  Mpfr(const Rational& q, mpfr_rnd_t rnd) : Mpfr() { mpfr_set_q(v_, q.get_mpq_t(), rnd); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  Rational to_rational() const {
    Rational out;
    mpfr_get_q(out.get_mpq_t(), v_);
    return out;
  }

 private:
  mpfr_t v_;
};

Rational round_to_dyadic(const Rational& q, mpfr_rnd_t rnd) {
  Mpfr m(Real::kEnclosureBits);
  mpfr_set_q(m.get(), q.get_mpq_t(), rnd);
  return m.to_rational();
}

size_t bit_size(const Rational& q) {
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Rational exact_int_power(const Rational& base, long e) {
  mpz_class num = base.get_num();
  mpz_class den = base.get_den();
  unsigned long ue = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_class pn, pd;
  mpz_pow_ui(pn.get_mpz_t(), num.get_mpz_t(), ue);
  mpz_pow_ui(pd.get_mpz_t(), den.get_mpz_t(), ue);
  Rational out = e < 0 ? Rational(pd, pn) : Rational(pn, pd);
  out.canonicalize();
  return out;
}

// base^(a/b) when base's numerator and denominator are perfect b-th powers.
bool try_exact_root_power(const Rational& base, const Rational& e, Rational& out) {
  mpz_class a = e.get_num();
  mpz_class b = e.get_den();
  if (!b.fits_ulong_p() || !a.fits_slong_p()) return false;
  unsigned long ub = b.get_ui();
  if (ub > 64) return false;
  mpz_class rn, rd;
  if (mpz_root(rn.get_mpz_t(), base.get_num_mpz_t(), ub) == 0) return false;
  if (mpz_root(rd.get_mpz_t(), base.get_den_mpz_t(), ub) == 0) return false;
  Rational root(rn, rd);
  root.canonicalize();
  out = exact_int_power(root, a.get_si());
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::string s(text);
  auto bad = [&]() { return std::invalid_argument("malformed rational literal '" + s + "'"); };
  if (s.find('/') != std::string::npos) {
    auto slash = s.find('/');
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (sgn(den) == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return num / den;
  }
  bool negative = false;
  size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  mpz_class mantissa = 0;
  long scale = 0;
  bool seen_digit = false;
  bool seen_dot = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_dot) ++scale;
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c == 'e' || c == 'E') {
      break;
    } else {
      throw bad();
    }
  }
  if (!seen_digit) throw bad();
  long exponent = 0;
  if (pos < s.size()) {
    std::string tail = s.substr(pos + 1);
    if (tail.empty()) throw bad();
    size_t used = 0;
    try {
      exponent = std::stol(tail, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != tail.size()) throw bad();
  }
  exponent -= scale;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational out = exponent < 0 ? Rational(mantissa, pow10) : Rational(mantissa * pow10);
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& value) { return value.get_str(); }

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite double has no rational image");
  Rational out;
  mpq_set_d(out.get_mpq_t(), value);
  return out;
}

// Real

Real Real::enclosure(Rational lo, Rational hi) {
  if (lo > hi) throw std::invalid_argument("enclosure with lower > upper");
  Real r;
  r.lo_ = std::move(lo);
  r.hi_ = std::move(hi);
  r.round_outward();
  return r;
}

const Rational& Real::exact() const {
  if (!is_exact()) throw std::logic_error("value is only known as an enclosure");
  return lo_;
}

double Real::approx() const {
  if (is_exact()) return lo_.get_d();
  Rational mid = (lo_ + hi_) / 2;
  return mid.get_d();
}

void Real::round_outward() {
  if (is_exact()) return;
  const size_t limit = 3 * kEnclosureBits;
  if (bit_size(lo_) > limit) lo_ = round_to_dyadic(lo_, MPFR_RNDD);
  if (bit_size(hi_) > limit) hi_ = round_to_dyadic(hi_, MPFR_RNDU);
}

Real& Real::operator+=(const Real& other) {
  lo_ += other.lo_;
  hi_ += other.hi_;
  round_outward();
  return *this;
}

Real operator-(const Real& a, const Real& b) {
  return Real::enclosure(a.lo_ - b.hi_, a.hi_ - b.lo_);
}

Real operator*(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact()) return Real(a.lo_ * b.lo_);
  std::array<Rational, 4> p = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  auto [mn, mx] = std::minmax_element(p.begin(), p.end());
  return Real::enclosure(*mn, *mx);
}

Real operator/(const Real& a, const Real& b) {
  if (sgn(b.lo_) <= 0 && sgn(b.hi_) >= 0) throw std::domain_error("division by an enclosure containing zero");
  if (a.is_exact() && b.is_exact()) return Real(Rational(a.lo_ / b.lo_));
  std::array<Rational, 4> p = {a.lo_ / b.lo_, a.lo_ / b.hi_, a.hi_ / b.lo_, a.hi_ / b.hi_};
  auto [mn, mx] = std::minmax_element(p.begin(), p.end());
  return Real::enclosure(*mn, *mx);
}

Order compare(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact()) {
    int c = cmp(a.lower(), b.lower());
    return c < 0 ? Order::Less : (c > 0 ? Order::Greater : Order::Equal);
  }
  if (a.upper() < b.lower()) return Order::Less;
  if (a.lower() > b.upper()) return Order::Greater;
  return Order::Overlap;
}

bool certainly_less(const Real& a, const Real& b) { return a.upper() < b.lower(); }
bool certainly_le(const Real& a, const Real& b) { return a.upper() <= b.lower(); }
bool le_or_tied(const Real& a, const Real& b) { return a.lower() <= b.upper(); }

const Real& max_by_upper(const Real& a, const Real& b) { return b.upper() > a.upper() ? b : a; }

Real hull_max(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact()) return a.lower() >= b.lower() ? a : b;
  return Real::enclosure(std::max(a.lower(), b.lower()), std::max(a.upper(), b.upper()));
}

Real pow_real(const Real& base, const Real& exponent) {
  if (sgn(base.lower()) < 0) throw std::domain_error("pow_real of a negative base");
  if (exponent.is_exact()) {
    const Rational& e = exponent.lower();
    if (sgn(e) == 0) {
      if (base.is_zero()) throw std::domain_error("0^0 is handled by pow_q");
      if (sgn(base.lower()) == 0) throw std::domain_error("base enclosure touches zero with exponent 0");
      return Real(1);
    }
    if (base.is_exact()) {
      const Rational& b = base.lower();
      if (sgn(b) == 0) {
        if (sgn(e) < 0) throw std::domain_error("0^q for q < 0 is handled by pow_q");
        return Real(0);
      }
      if (b == 1) return Real(1);
      if (is_integer(e) && e.get_num().fits_slong_p()) return Real(exact_int_power(b, e.get_num().get_si()));
      Rational root;
      if (try_exact_root_power(b, e, root)) return Real(root);
    }
  }
  if (sgn(base.lower()) == 0 && sgn(exponent.lower()) <= 0) {
    throw std::domain_error("base enclosure touches zero with a non-positive exponent");
  }
  Mpfr b_lo(base.lower(), MPFR_RNDD), b_hi(base.upper(), MPFR_RNDU);
  Mpfr e_lo(exponent.lower(), MPFR_RNDD), e_hi(exponent.upper(), MPFR_RNDU);
  Mpfr lo_acc, hi_acc, tmp;
  bool first = true;
  for (Mpfr* bb : {&b_lo, &b_hi}) {
    for (Mpfr* ee : {&e_lo, &e_hi}) {
      mpfr_pow(tmp.get(), bb->get(), ee->get(), MPFR_RNDD);
      if (first || mpfr_less_p(tmp.get(), lo_acc.get())) mpfr_set(lo_acc.get(), tmp.get(), MPFR_RNDD);
      mpfr_pow(tmp.get(), bb->get(), ee->get(), MPFR_RNDU);
      if (first || mpfr_greater_p(tmp.get(), hi_acc.get())) mpfr_set(hi_acc.get(), tmp.get(), MPFR_RNDU);
      first = false;
    }
  }
  return Real::enclosure(lo_acc.to_rational(), hi_acc.to_rational());
}

Real ln_real(const Real& x) {
  if (sgn(x.lower()) <= 0) throw std::domain_error("ln of a non-positive enclosure");
  if (x.is_exact() && x.lower() == 1) return Real(0);
  Mpfr lo(x.lower(), MPFR_RNDD), hi(x.upper(), MPFR_RNDU);
  mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
  return Real::enclosure(lo.to_rational(), hi.to_rational());
}

// ExtValue

ExtValue::ExtValue(const Real& value) : value_(value) {
  if (sgn(value.lower()) < 0) {
    if (sgn(value.upper()) < 0) throw std::domain_error("ExtValue magnitude must be non-negative");
    value_ = Real::enclosure(0, value.upper());
  }
}

ExtValue ExtValue::infinity() {
  ExtValue v;
  v.infinite_ = true;
  return v;
}

const Real& ExtValue::finite() const {
  if (infinite_) throw std::logic_error("ExtValue is infinite");
  return value_;
}

double ExtValue::approx() const { return infinite_ ? HUGE_VAL : value_.approx(); }

ExtValue ext_add(const ExtValue& a, const ExtValue& b) {
  if (a.is_infinite() || b.is_infinite()) return ExtValue::infinity();
  return ExtValue(a.finite() + b.finite());
}

ExtValue ext_mul(const ExtValue& a, const ExtValue& b) {
  if (a.is_zero() || b.is_zero()) return ExtValue(Real(0));
  if (a.is_infinite() || b.is_infinite()) return ExtValue::infinity();
  return ExtValue(a.finite() * b.finite());
}

Order compare(const ExtValue& a, const ExtValue& b) {
  if (a.is_infinite() && b.is_infinite()) return Order::Equal;
  if (a.is_infinite()) return Order::Greater;
  if (b.is_infinite()) return Order::Less;
  return compare(a.finite(), b.finite());
}

bool le_or_tied(const ExtValue& a, const ExtValue& b) {
  Order o = compare(a, b);
  return o != Order::Greater;
}

bool certainly_greater(const ExtValue& a, const ExtValue& b) { return compare(a, b) == Order::Greater; }

ExtValue pow_q(const Rational& base, const Rational& q) {
  if (sgn(base) < 0) throw std::domain_error("pow_q of a negative base");
  if (sgn(base) == 0) return sgn(q) <= 0 ? ExtValue::infinity() : ExtValue(Real(0));
  return ExtValue(pow_real(Real(base), Real(q)));
}

std::string describe(const Real& value) {
  if (value.is_exact()) return to_string(value.lower());
  char buf[64];
  std::snprintf(buf, sizeof buf, "~%.17g", value.approx());
  return buf;
}

std::string describe(const ExtValue& value) {
  if (value.is_infinite()) return "inf";
  return describe(value.finite());
}

}  // namespace fracpack
