#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracpack/solvers.hpp"

namespace fracpack {

namespace {

// Dense exact tableau for max w.c, A c + s = 1. Columns 0..m-1 are the
// structural variables, m..m+R-1 the slacks; the slack block of the tableau
// is B^{-1}, which yields the duals.
class Tableau {
 public:
  Tableau(const LpInput& in) : rows_(in.rows), m_(in.column_rows.size()), cols_(m_ + rows_) {
    t_.assign(rows_ * cols_, Rational(0));
    approx_.assign(rows_ * cols_, 0.0);
    b_.assign(rows_, Rational(1));
    basis_.resize(rows_);
    for (size_t j = 0; j < m_; ++j) {
      for (size_t r : in.column_rows[j]) {
        if (r >= rows_) throw std::invalid_argument("LP column touches a row out of range");
        at(r, j) = 1;
        approx_[r * cols_ + j] = 1.0;
      }
    }
    for (size_t k = 0; k < rows_; ++k) {
      at(k, m_ + k) = 1;
      approx_[k * cols_ + m_ + k] = 1.0;
      basis_[k] = m_ + k;
    }
    cost_.resize(cols_, Real(0));
    for (size_t j = 0; j < m_; ++j) cost_[j] = in.objective[j];
  }

  Rational& at(size_t r, size_t c) { return t_[r * cols_ + c]; }
  const Rational& at(size_t r, size_t c) const { return t_[r * cols_ + c]; }

  // Smallest-index column with certainly positive reduced cost, or npos.
  size_t entering() const {
    std::vector<double> cb(rows_);
    for (size_t k = 0; k < rows_; ++k) cb[k] = cost_[basis_[k]].approx();
    std::vector<bool> is_basic(cols_, false);
    for (size_t k = 0; k < rows_; ++k) is_basic[basis_[k]] = true;
    for (size_t j = 0; j < cols_; ++j) {
      if (is_basic[j]) continue;
      double d = cost_[j].approx();
      double scale = std::fabs(d);
      for (size_t k = 0; k < rows_; ++k) {
        const double term = cb[k] * approx_[k * cols_ + j];
        d -= term;
        scale += std::fabs(term);
      }
      if (d < -1e-9 * (1.0 + scale)) continue;
      Real exact = cost_[j];
      for (size_t k = 0; k < rows_; ++k) {
        if (sgn(at(k, j)) == 0) continue;
        exact = exact - cost_[basis_[k]] * Real(at(k, j));
      }
      if (sgn(exact.lower()) > 0) return j;
    }
    return static_cast<size_t>(-1);
  }

  // Bland ratio test; npos means unbounded (impossible here since b = 1 bounds every column).
  size_t leaving(size_t q) const {
    size_t pick = static_cast<size_t>(-1);
    Rational best;
    for (size_t k = 0; k < rows_; ++k) {
      if (sgn(at(k, q)) <= 0) continue;
      Rational ratio = b_[k] / at(k, q);
      if (pick == static_cast<size_t>(-1) || ratio < best || (ratio == best && basis_[k] < basis_[pick])) {
        pick = k;
        best = ratio;
      }
    }
    return pick;
  }

  void pivot(size_t p, size_t q) {
    const Rational piv = at(p, q);
    std::vector<size_t> nz;
    for (size_t c = 0; c < cols_; ++c) {
      if (sgn(at(p, c)) != 0) {
        at(p, c) /= piv;
        nz.push_back(c);
      }
    }
    b_[p] /= piv;
    for (size_t c : nz) approx_[p * cols_ + c] = at(p, c).get_d();
    for (size_t k = 0; k < rows_; ++k) {
      if (k == p || sgn(at(k, q)) == 0) continue;
      const Rational f = at(k, q);
      for (size_t c : nz) {
        at(k, c) -= f * at(p, c);
        approx_[k * cols_ + c] = at(k, c).get_d();
      }
      b_[k] -= f * b_[p];
    }
    basis_[p] = q;
  }

  LpOutput result(bool optimal, size_t pivots) const {
    LpOutput out;
    out.primal.assign(m_, Rational(0));
    out.primal_value = Real(0);
    for (size_t k = 0; k < rows_; ++k) {
      if (basis_[k] < m_) {
        out.primal[basis_[k]] = b_[k];
        out.primal_value += cost_[basis_[k]] * Real(b_[k]);
      }
    }
    out.dual.assign(rows_, Real(0));
    out.dual_value = Real(0);
    for (size_t x = 0; x < rows_; ++x) {
      Real y(0);
      for (size_t k = 0; k < rows_; ++k) {
        if (sgn(at(k, m_ + x)) != 0) y += cost_[basis_[k]] * Real(at(k, m_ + x));
      }
      out.dual_value += y;
      out.dual[x] = std::move(y);
    }
    out.optimal = optimal;
    out.pivots = pivots;
    return out;
  }

 private:
  size_t rows_, m_, cols_;
  std::vector<Rational> t_;
  std::vector<double> approx_;
  std::vector<Rational> b_;
  std::vector<size_t> basis_;
  std::vector<Real> cost_;
};

}  // namespace

LpOutput solve_packing_lp(const LpInput& in) {
  if (in.objective.size() != in.column_rows.size()) throw std::invalid_argument("LP objective size mismatch");
  for (const auto& w : in.objective) {
    if (sgn(w.lower()) < 0) throw std::invalid_argument("LP objective must be non-negative");
  }
  Tableau tab(in);
  size_t pivots = 0;
  while (true) {
    const size_t q = tab.entering();
    if (q == static_cast<size_t>(-1)) return tab.result(true, pivots);
    if (pivots >= in.pivot_limit) return tab.result(false, pivots);
    const size_t p = tab.leaving(q);
    if (p == static_cast<size_t>(-1)) throw std::logic_error("packing LP reported unbounded");
    tab.pivot(p, q);
    ++pivots;
  }
}

}  // namespace fracpack
