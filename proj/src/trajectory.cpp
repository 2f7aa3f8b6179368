#include "emdephase/trajectory.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>

namespace emd {

namespace {

template <class Real>
Real separation_local(int piece, Real s, Real lambda, Real t_a, Real dx) {
  switch (piece) {
    case 0: return lambda * s * s / 2;
    case 1: return lambda * t_a * t_a / 2 + lambda * t_a * s - lambda * s * s / 2;
    case 2: return dx;
    case 3: return dx - lambda * s * s / 2;
    default: return lambda * (t_a - s) * (t_a - s) / 2;
  }
}

std::array<double, 6> boundaries(const InterferometerConfig& c) {
  return {0.0, c.t_a, 2 * c.t_a, 2 * c.t_a + c.t_e, 3 * c.t_a + c.t_e, 4 * c.t_a + c.t_e};
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace

double relative_acceleration(const InterferometerConfig& cfg) { return cfg.dx / (cfg.t_a * cfg.t_a); }

double spin_acceleration(double g_factor, double grad_b, double mass, double spin) {
  constexpr double mu_b = 9.2740100783e-24;
  if (mass <= 0) invalid("mass must be positive");
  return spin * g_factor * mu_b * std::abs(grad_b) / mass;
}

int trajectory_piece(const InterferometerConfig& cfg, double t) {
  auto bd = boundaries(cfg);
  if (!(t >= 0.0 && t <= bd[5])) invalid("time outside [0, tau]");
  for (int i = 0; i < 4; ++i)
    if (t < bd[i + 1]) return i;
  return 4;
}

double arm_separation(const InterferometerConfig& cfg, double t) {
  cfg.validate();
  int p = trajectory_piece(cfg, t);
  auto bd = boundaries(cfg);
  if (p == 2) return cfg.dx;
  return separation_local<double>(p, t - bd[p], relative_acceleration(cfg), cfg.t_a, cfg.dx);
}

double arm_separation_rate(const InterferometerConfig& cfg, double t) {
  cfg.validate();
  int p = trajectory_piece(cfg, t);
  double s = t - boundaries(cfg)[p];
  double lam = relative_acceleration(cfg);
  switch (p) {
    case 0: return lam * s;
    case 1: return lam * (cfg.t_a - s);
    case 2: return 0.0;
    case 3: return -lam * s;
    default: return -lam * (cfg.t_a - s);
  }
}

double transfer_function(const InterferometerConfig& cfg, double omega) {
  cfg.validate();
  if (!(omega > 0)) invalid("transfer function needs omega > 0");
  double c = 2 * cfg.t_a + cfg.t_e;
  if (omega * cfg.tau() < 1e-4) {
    // 32 dx^2/(w^6 t_a^4) sin^4 sin^2 = (dx^2 c^2 / 2) sinc^4(t_a w/2) sinc^2(c w/2)
    double s1 = sinc(0.5 * cfg.t_a * omega);
    double s2 = sinc(0.5 * c * omega);
    return 0.5 * cfg.dx * cfg.dx * c * c * s1 * s1 * s1 * s1 * s2 * s2;
  }
  double sa = std::sin(0.5 * cfg.t_a * omega);
  double sc = std::sin(0.5 * c * omega);
  double w3 = omega * omega * omega;
  double ta2 = cfg.t_a * cfg.t_a;
  return 32.0 * cfg.dx * cfg.dx / (w3 * w3 * ta2 * ta2) * (sa * sa * sa * sa) * (sc * sc);
}

NumericTransfer transfer_function_numeric(const InterferometerConfig& cfg, double omega) {
  cfg.validate();
  if (!(omega > 0)) invalid("transfer function needs omega > 0");
  using R = long double;
  using GL = boost::math::quadrature::gauss<R, 20>;
  auto bd = boundaries(cfg);
  const R lam = static_cast<R>(cfg.dx) / (static_cast<R>(cfg.t_a) * cfg.t_a);
  const R w = omega;

  auto integrate = [&](int refine) {
    std::complex<R> total = 0;
    for (int p = 0; p < 5; ++p) {
      R len = static_cast<R>(bd[p + 1]) - bd[p];
      if (len <= 0) continue;
      // panels no wider than half an oscillation period
      long n = std::max<long>(1, static_cast<long>(std::ceil(len * w / 3.14159265358979323846L)));
      n *= refine;
      R h = len / n;
      const R t0 = bd[p];
      for (long j = 0; j < n; ++j) {
        auto f = [&](R s) {
          R d = separation_local<R>(p, s, lam, static_cast<R>(cfg.t_a), static_cast<R>(cfg.dx));
          R ph = w * (t0 + s);
          return std::complex<R>(d * std::cos(ph), d * std::sin(ph));
        };
        total += GL::integrate(f, h * j, h * (j + 1));
      }
    }
    return total;
  };

  std::complex<R> coarse = integrate(1);
  std::complex<R> fine = integrate(2);
  R value = std::norm(fine);
  R err = std::abs(std::norm(fine) - std::norm(coarse));
  return {static_cast<double>(value), static_cast<double>(err)};
}

}  // namespace emd
