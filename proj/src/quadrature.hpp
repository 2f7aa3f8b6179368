#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

namespace emd::detail {

// Adaptive Gauss-Kronrod bisection. Boost's own recursion compares an error measured on
// [-1, 1] with a tolerance measured on [a, b]; here each panel error is rescaled by (b-a)/2.
template <unsigned N, class F>
double gk_adaptive(F&& f, double a, double b, double rel_tol, unsigned max_depth,
                   double* error = nullptr) {
  using GK = boost::math::quadrature::gauss_kronrod<double, N>;
  struct Panel {
    double value, error;
  };
  auto panel = [&](double lo, double hi) {
    double e = 0.0;
    const double v = GK::integrate(f, lo, hi, 0, 0.0, &e);
    return Panel{v, e * 0.5 * (hi - lo)};
  };
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double total_error = 0.0;
  auto recurse = [&](auto&& self, double lo, double hi, Panel p, unsigned depth, double abs_tol) -> double {
    if (depth == 0 || p.error <= abs_tol || p.error <= 50 * eps * std::abs(p.value)) {
      total_error += p.error;
      return p.value;
    }
    const double mid = 0.5 * (lo + hi);
    const Panel left = panel(lo, mid), right = panel(mid, hi);
    return self(self, lo, mid, left, depth - 1, 0.5 * abs_tol) +
           self(self, mid, hi, right, depth - 1, 0.5 * abs_tol);
  };
  const Panel top = panel(a, b);
  const double value = recurse(recurse, a, b, top, max_depth, rel_tol * std::abs(top.value));
  if (error) *error = total_error;
  return value;
}

}  // namespace emd::detail
