#include "support/lp_simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace testsupport {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

// Tableau rows 0..m-1 are constraints, row m is the reduced-cost row; the
// last column is the right-hand side.
struct Tableau {
  std::size_t m = 0;
  std::size_t cols = 0;  // total variable columns
  std::vector<double> t;  // (m+1) x (cols+1)

  double& at(std::size_t r, std::size_t c) { return t[r * (cols + 1) + c]; }
  double val(std::size_t r, std::size_t c) const { return t[r * (cols + 1) + c]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }
};

// Bland's rule: entering = lowest-index improving column, leaving = lowest
// basis index among ratio-test ties. Terminates without anti-cycling hacks.
bool simplex(Tableau& tb, std::vector<std::size_t>& basis, std::size_t enter_limit) {
  const std::size_t max_pivots = 50000;
  for (std::size_t it = 0; it < max_pivots; ++it) {
    std::size_t pc = enter_limit;
    for (std::size_t c = 0; c < enter_limit; ++c) {
      if (tb.val(tb.m, c) < -kCostTol) {
        pc = c;
        break;
      }
    }
    if (pc == enter_limit) return true;  // optimal

    std::size_t pr = tb.m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < tb.m; ++r) {
      const double coef = tb.val(r, pc);
      if (coef <= kPivotTol) continue;
      const double ratio = tb.val(r, tb.cols) / coef;
      if (ratio < best_ratio - kCostTol ||
          (ratio < best_ratio + kCostTol && (pr == tb.m || basis[r] < basis[pr]))) {
        best_ratio = ratio;
        pr = r;
      }
    }
    if (pr == tb.m) return false;  // unbounded; cannot happen with l1 costs
    tb.pivot(pr, pc);
    basis[pr] = pc;
  }
  return false;
}

}  // namespace

LpResult l1_min_equality(const std::vector<double>& a, std::size_t m, std::size_t n,
                         const std::vector<double>& y) {
  LpResult out;
  const std::size_t structural = 2 * n;  // u then v
  Tableau tb;
  tb.m = m;
  tb.cols = structural + m;  // artificials after the split variables
  tb.t.assign((m + 1) * (tb.cols + 1), 0.0);

  for (std::size_t r = 0; r < m; ++r) {
    const double flip = y[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) {
      const double e = flip * a[r * n + c];
      tb.at(r, c) = e;
      tb.at(r, n + c) = -e;
    }
    tb.at(r, structural + r) = 1.0;
    tb.at(r, tb.cols) = flip * y[r];
  }

  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) basis[r] = structural + r;

  // phase 1: minimize the artificial sum; its cost row is minus the sum of
  // the constraint rows so the basic columns start reduced
  for (std::size_t c = 0; c <= tb.cols; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += tb.val(r, c);
    tb.at(m, c) = c < structural || c == tb.cols ? -s : 0.0;
  }
  if (!simplex(tb, basis, structural)) return out;
  if (-tb.val(m, tb.cols) > 1e-7) return out;  // infeasible

  // drive leftover zero-level artificials out when a structural pivot exists;
  // rows without one are dependent and stay inert
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < structural) continue;
    for (std::size_t c = 0; c < structural; ++c) {
      if (std::fabs(tb.val(r, c)) > kPivotTol) {
        tb.pivot(r, c);
        basis[r] = c;
        break;
      }
    }
  }

  // phase 2: unit costs on both halves of the split
  for (std::size_t c = 0; c <= tb.cols; ++c) tb.at(m, c) = c < structural ? 1.0 : 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] >= structural) continue;
    const double f = tb.val(m, basis[r]);
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= tb.cols; ++c) tb.at(m, c) -= f * tb.val(r, c);
  }
  if (!simplex(tb, basis, structural)) return out;

  std::vector<double> v(structural, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < structural) v[basis[r]] = tb.val(r, tb.cols);
  out.x.assign(n, 0.0);
  double obj = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    out.x[c] = v[c] - v[n + c];
    obj += std::fabs(out.x[c]);
  }
  out.objective = obj;
  out.feasible = true;
  return out;
}

}  // namespace testsupport
