#include "emdephase/specfun.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "emdephase/core.hpp"

namespace emd {

namespace {

void check_order(int twice) {
  if (twice < 0 || twice > 5) invalid("Bessel order out of range: 2nu = " + std::to_string(twice));
}

void check_arg(double u) {
  if (!(u > 0)) invalid("Bessel argument must be positive");
  if (!std::isfinite(u)) invalid("Bessel argument must be finite");
}

}  // namespace

double bessel_k(BesselOrder order, double u, bool* underflow) {
  check_order(order.twice);
  check_arg(u);
  if (u > kBesselUnderflowArg) {
    if (underflow) *underflow = true;
    return 0.0;
  }
  if (order.twice % 2 == 1) {
    double base = std::sqrt(std::numbers::pi / (2.0 * u)) * std::exp(-u);
    switch (order.twice) {
      case 1: return base;
      case 3: return base * (1.0 + 1.0 / u);
      default: return base * (1.0 + 3.0 / u + 3.0 / (u * u));
    }
  }
  double k0 = boost::math::cyl_bessel_k(0, u);
  if (order.twice == 0) return k0;
  double k1 = boost::math::cyl_bessel_k(1, u);
  if (order.twice == 2) return k1;
  return k0 + (2.0 / u) * k1;
}

double bessel_k_signed(int twice, double u, bool* underflow) {
  return bessel_k(BesselOrder{twice < 0 ? -twice : twice}, u, underflow);
}

double bessel_k_small(BesselOrder order, double u) {
  check_order(order.twice);
  double n = order.nu();
  if (n <= 0) invalid("small-argument Bessel form needs n > 0");
  if (!(u > 0) || u > std::sqrt(n + 1.0))
    invalid("small-argument Bessel form used outside 0 < u <= sqrt(n+1)");
  return 0.5 * std::tgamma(n) * std::pow(2.0 / u, n);
}

double bessel_k_large(BesselOrder order, double u) {
  check_order(order.twice);
  if (!(u >= 1.0)) invalid("large-argument Bessel form used below u = 1");
  if (u > kBesselUnderflowArg) return 0.0;
  return std::exp(-u) * std::sqrt(std::numbers::pi / (2.0 * u));
}

const char* bessel_mode_name(BesselMode m) {
  switch (m) {
    case BesselMode::Exact: return "exact";
    case BesselMode::Small: return "small";
    case BesselMode::Large: return "large";
  }
  return "?";
}

double bessel_k_mode(BesselMode mode, int twice, double u, bool* underflow) {
  int t = twice < 0 ? -twice : twice;
  switch (mode) {
    case BesselMode::Exact: return bessel_k(BesselOrder{t}, u, underflow);
    case BesselMode::Small: return bessel_k_small(BesselOrder{t}, u);
    case BesselMode::Large: return bessel_k_large(BesselOrder{t}, u);
  }
  return 0.0;
}

}  // namespace emd
