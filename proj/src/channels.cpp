#include "emdephase/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"

namespace emd {

using constants::kappa;

void ChannelParams::validate() const {
  interferometer.validate();
  particle.validate();
  encounter.validate();
  check_compatible(channel, interferometer, particle);
}

double channel_amplitude(Channel c, const InterferometerConfig& cfg, const EnvironmentParticle& p,
                         double b) {
  const double m = cfg.mass;
  const double b2 = b * b, b3 = b2 * b;
  switch (c) {
    case Channel::CC: return kappa * cfg.q_int * p.q_ext / (m * b2);
    case Channel::CDp: return 2 * kappa * cfg.q_int * p.d_ext / (m * b3);
    case Channel::CDi: return 2 * kappa * kappa * cfg.q_int * cfg.q_int * p.alpha_pol / (m * b3 * b2);
    case Channel::DpC: return 2 * kappa * p.q_ext * cfg.d_int / (m * b3);
    case Channel::DiC: {
      double r3 = cfg.radius * cfg.radius * cfg.radius;
      return 2 * kappa * clausius_mossotti(cfg.eps_r) * p.q_ext * p.q_ext * r3 / (m * b3 * b2);
    }
    case Channel::DD: return 6 * kappa * p.d_ext * cfg.d_int / (m * b2 * b2);
  }
  return 0.0;
}

int channel_bessel_twice(Channel c) {
  switch (c) {
    case Channel::CC: return 2;
    case Channel::CDp: return 3;
    case Channel::CDi: return 5;
    case Channel::DpC: return 4;
    case Channel::DiC: return 5;
    case Channel::DD: return 4;
  }
  return 0;
}

AccelerationProfile::AccelerationProfile(const ChannelParams& p) {
  p.validate();
  const auto& e = p.encounter;
  channel_ = p.channel;
  amp_ = channel_amplitude(p.channel, p.interferometer, p.particle, e.b);
  rate_ = e.v / e.b;
  ca_ = projection(e.alpha);
  cb_ = projection(e.beta);
  ct_ = projection(e.theta0);
  cg_ = projection(e.gamma);
}

double AccelerationProfile::operator()(double t) const {
  const double s = rate_ * t;
  const double one = 1.0 + s * s;
  const double lin = ca_ + s * cb_;
  switch (channel_) {
    case Channel::CC: return amp_ * lin / (one * std::sqrt(one));
    case Channel::CDp: return amp_ * lin / (one * one);
    case Channel::CDi:
    case Channel::DiC: return amp_ * lin / (one * one * one);
    case Channel::DpC: return amp_ * lin * (ct_ + s * cg_) / (one * one * std::sqrt(one));
    case Channel::DD: return amp_ * ct_ * lin / (one * one * std::sqrt(one));
  }
  return 0.0;
}

double acceleration_time(const ChannelParams& p, double t) {
  if (!std::isfinite(t)) invalid("time must be finite");
  return AccelerationProfile(p)(t);
}

namespace {

// A (b/v) 2 sqrt(pi) (k/2)^nu / Gamma(nu + 1/2): the full-line transform of A/(1+s^2)^{nu+1/2}
// divided by K_nu(k).
double spectral_prefactor(Channel c, const InterferometerConfig& cfg, const EnvironmentParticle& p,
                          double b, double v, double k) {
  const int tw = channel_bessel_twice(c);
  const double nu = 0.5 * tw;
  const double g = std::tgamma(nu + 0.5);
  return channel_amplitude(c, cfg, p, b) * (b / v) * 2.0 * std::sqrt(std::numbers::pi) *
         std::pow(0.5 * k, nu) / g;
}

struct Bessels {
  double hi;   // K_nu
  double lo;   // K_{nu-1}
  double dpc;  // K_1/k - K_0, only for dpc
};

Bessels bessels(Channel c, double k, BesselMode mode, bool* underflow) {
  const int tw = channel_bessel_twice(c);
  Bessels r{};
  r.hi = bessel_k_mode(mode, tw, k, underflow);
  r.lo = bessel_k_mode(mode, tw - 2, k, underflow);
  if (c == Channel::DpC) {
    if (mode == BesselMode::Small) invalid("small-argument form is not defined for K0 (dpc channel)");
    double k0 = bessel_k_mode(mode, 0, k, underflow);
    r.dpc = r.lo / k - k0;
  }
  if (c == Channel::CC && mode == BesselMode::Small)
    invalid("small-argument form is not defined for K0 (cc channel)");
  return r;
}

}  // namespace

SpectrumValue acceleration_spectrum(const ChannelParams& p, double omega, BesselMode mode) {
  p.validate();
  if (!(omega > 0)) invalid("spectrum needs omega > 0");
  const auto& e = p.encounter;
  const double k = e.b * omega / e.v;
  SpectrumValue out;
  Bessels kb = bessels(p.channel, k, mode, &out.underflow);
  const double pref = spectral_prefactor(p.channel, p.interferometer, p.particle, e.b, e.v, k);
  const double ca = projection(e.alpha), cb = projection(e.beta);
  if (p.channel == Channel::DpC) {
    const double ct = projection(e.theta0), cg = projection(e.gamma);
    out.real_part = pref * (ca * ct * kb.hi + cb * cg * kb.dpc);
    out.imag_part = -pref * (ca * cg + cb * ct) * kb.lo;
    return out;
  }
  const double scale = p.channel == Channel::DD ? pref * projection(e.theta0) : pref;
  out.real_part = scale * ca * kb.hi;
  out.imag_part = -scale * cb * kb.lo;
  return out;
}

double encounter_psd(const ChannelParams& p, double omega, BesselMode mode) {
  return acceleration_spectrum(p, omega, mode).norm() / p.encounter.T;
}

AngleModel default_angle_model(Channel c) {
  return c == Channel::DD ? AngleModel::Coupled : AngleModel::Independent;
}

double angle_averaged_spectrum_sq(Channel c, const InterferometerConfig& cfg,
                                  const EnvironmentParticle& p, double b, double v, double omega,
                                  AngleModel model, double theta0, BesselMode mode,
                                  bool* underflow) {
  const double k = b * omega / v;
  Bessels kb = bessels(c, k, mode, underflow);
  const double pref = spectral_prefactor(c, cfg, p, b, v, k);
  const double p2 = pref * pref;
  const double hi2 = kb.hi * kb.hi, lo2 = kb.lo * kb.lo;
  if (c == Channel::DpC) return p2 * 0.25 * (hi2 + 2.0 * lo2 + kb.dpc * kb.dpc);
  if (c == Channel::DD) {
    switch (model) {
      case AngleModel::Coupled: return p2 * (hi2 / 8.0 + lo2 / 4.0);
      case AngleModel::FixedTheta0: {
        double ct = projection(theta0);
        return p2 * ct * ct * 0.5 * (hi2 + lo2);
      }
      case AngleModel::Independent: return p2 * 0.25 * (hi2 + lo2);
    }
  }
  return p2 * 0.5 * (hi2 + lo2);
}

double angle_objective(Channel c, double u, double alpha, double beta) {
  const double ca = std::cos(alpha), cb = std::cos(beta);
  const double lin = ca + u * cb;
  switch (c) {
    case Channel::DpC: {
      const double ct = std::sqrt(std::max(0.0, 1.0 - ca * ca));
      const double cg = std::sqrt(std::max(0.0, 1.0 - cb * cb));
      return std::abs(lin * (ct + u * cg));
    }
    case Channel::DD: return std::abs(lin * std::sqrt(std::max(0.0, 1.0 - ca * ca)));
    default: return std::abs(lin);
  }
}

AngleArgmax optimal_angles(Channel c, double u, int threads) {
  if (!(u > 0) || !std::isfinite(u)) invalid("angle optimiser needs u > 0");
  constexpr int n = 181;
  const double step = std::numbers::pi / (n - 1);
  std::vector<AngleArgmax> rows(n);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    AngleArgmax best{};
    best.value = -1.0;
    const double a = step * static_cast<double>(i);
    for (int j = 0; j < n; ++j) {
      const double bta = step * j;
      const double f = angle_objective(c, u, a, bta);
      if (f > best.value * (1.0 + 1e-12)) best = {a, bta, 0.0, 0.0, f};
    }
    rows[i] = best;
  });
  AngleArgmax best = rows[0];
  for (int i = 1; i < n; ++i)
    if (rows[i].value > best.value * (1.0 + 1e-12)) best = rows[i];

  // one local refinement pass, clipped to [0, pi]
  constexpr int m = 41;
  const double a0 = best.alpha, b0 = best.beta;
  for (int i = 0; i < m; ++i) {
    const double a = std::clamp(a0 - step + 2.0 * step * i / (m - 1), 0.0, std::numbers::pi);
    for (int j = 0; j < m; ++j) {
      const double bta = std::clamp(b0 - step + 2.0 * step * j / (m - 1), 0.0, std::numbers::pi);
      const double f = angle_objective(c, u, a, bta);
      if (f > best.value * (1.0 + 1e-12)) best = {a, bta, 0.0, 0.0, f};
    }
  }
  if (c == Channel::DpC || c == Channel::DD) {
    const double ca = std::cos(best.alpha), cb = std::cos(best.beta);
    best.theta0 = std::acos(std::sqrt(std::max(0.0, 1.0 - ca * ca)));
    if (c == Channel::DpC) best.gamma = std::acos(std::sqrt(std::max(0.0, 1.0 - cb * cb)));
  }
  return best;
}

std::vector<double> angle_map(Channel c, double u, int grid, int threads) {
  if (!(u > 0) || !std::isfinite(u)) invalid("angle map needs u > 0");
  if (grid < 2) invalid("angle map grid must be at least 2");
  std::vector<double> out(static_cast<std::size_t>(grid) * grid);
  const double step = std::numbers::pi / (grid - 1);
  detail::parallel_for(grid, threads, [&](std::size_t i) {
    for (int j = 0; j < grid; ++j)
      out[i * grid + j] = angle_objective(c, u, step * static_cast<double>(i), step * j);
  });
  double mx = 0.0;
  for (double x : out) mx = std::max(mx, x);
  if (mx > 0)
    for (double& x : out) x /= mx;
  return out;
}

}  // namespace emd
