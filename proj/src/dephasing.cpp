#include "emdephase/dephasing.hpp"

#include <cmath>
#include <numbers>

#include "emdephase/trajectory.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace emd {

void QuadratureSettings::validate() const {
  if (!(relative_tolerance > 0 && relative_tolerance <= 1e-2))
    invalid("tolerance must lie in (0, 1e-2]");
  if (max_subdivisions == 0) invalid("max_subdivisions must be positive");
  if (!(cutoff_k > 0)) invalid("cutoff_k must be positive");
  if (!(panel_fraction > 0 && panel_fraction <= 1.0)) invalid("panel_fraction must lie in (0, 1]");
}

DephasingResult integrate_phase_variance(const InterferometerConfig& cfg, const SpectralDensity& psd,
                                         double decay_time, const QuadratureSettings& q,
                                         const std::function<double(double)>& transfer) {
  cfg.validate();
  q.validate();
  if (!(decay_time > 0)) invalid("decay time must be positive");

  const double pref = (cfg.mass / constants::hbar) * (cfg.mass / constants::hbar) /
                      (2.0 * std::numbers::pi);
  auto F = [&](double w) { return transfer ? transfer(w) : transfer_function(cfg, w); };
  auto integrand = [&](double w) { return pref * psd(w) * F(w); };
  const double ta4 = std::pow(cfg.t_a, 4);
  auto envelope = [&](double w) {
    return pref * psd(w) * 32.0 * cfg.dx * cfg.dx / (std::pow(w, 6) * ta4);
  };

  DephasingResult r;
  r.omega_min = cfg.omega_min();
  const double h = q.panel_fraction * std::numbers::pi / (2.0 * cfg.t_a + cfg.t_e);
  double target = std::max(r.omega_min + h, q.cutoff_k / decay_time);
  if ((target - r.omega_min) / h > static_cast<double>(q.max_subdivisions))
    throw Error(Status::NonConvergence,
                "dephasing quadrature needs more than max_subdivisions panels to reach the spectral cutoff");

  double sum = 0.0, err = 0.0;
  double w = r.omega_min;
  for (;;) {
    while (w < target) {
      if (r.panels >= q.max_subdivisions)
        throw Error(Status::NonConvergence,
                    "dephasing quadrature exceeded max_subdivisions panels", sum, err);
      double e = 0.0;
      double a = w, b = w + h;
      sum += detail::gk_adaptive<31>(integrand, a, b, 0.1 * q.relative_tolerance, 12, &e);
      err += e;
      w = b;
      ++r.panels;
    }
    // Exponential tail bound beyond w.
    double tail = envelope(w) / (2.0 / decay_time);
    if (!(tail > 0.1 * q.relative_tolerance * sum) || !std::isfinite(tail)) break;
    target = w + std::max(h, 0.5 * (w - r.omega_min));
  }
  r.omega_max = w;
  r.gamma_n = sum;
  r.estimated_error = err;
  if (err > q.relative_tolerance * sum && sum > 0)
    throw Error(Status::NonConvergence, "dephasing quadrature did not reach the tolerance", sum, err);
  return r;
}

namespace {
unsigned encounter_warnings(const ChannelParams& p) {
  unsigned w = 0;
  const double tau = p.interferometer.tau();
  if (p.encounter.T < tau) w |= kWarnShortAveraging;
  if (p.encounter.b / p.encounter.v <= tau) w |= kWarnOutsideValidity;
  return w;
}
}  // namespace

DephasingResult dephasing(const ChannelParams& p, const QuadratureSettings& q) {
  p.validate();
  bool underflow = false;
  auto psd = [&](double w) {
    auto s = acceleration_spectrum(p, w);
    underflow = underflow || s.underflow;
    return s.norm() / p.encounter.T;
  };
  auto r = integrate_phase_variance(p.interferometer, psd, p.encounter.b / p.encounter.v, q);
  r.warnings |= encounter_warnings(p);
  if (underflow) r.warnings |= kWarnBesselUnderflow;
  return r;
}

double dominant_mode_dephasing(const ChannelParams& p) {
  p.validate();
  const auto& c = p.interferometer;
  const double w = c.omega_min();
  const double mh = c.mass / constants::hbar;
  return mh * mh / (2.0 * std::numbers::pi) * encounter_psd(p, w) * transfer_function(c, w) * w;
}

SweepVar parse_sweep_var(const std::string& name) {
  if (name == "v") return SweepVar::V;
  if (name == "b") return SweepVar::B;
  if (name == "dx") return SweepVar::Dx;
  if (name == "q_int" || name == "qint") return SweepVar::QInt;
  invalid("unknown sweep variable '" + name + "' (expected v, b, dx, q_int, n_v)");
}

const char* sweep_var_name(SweepVar v) {
  switch (v) {
    case SweepVar::V: return "v";
    case SweepVar::B: return "b";
    case SweepVar::Dx: return "dx";
    case SweepVar::QInt: return "q_int";
  }
  return "?";
}

ChannelParams with_sweep_value(ChannelParams p, SweepVar var, double value, bool t_auto) {
  switch (var) {
    case SweepVar::V: p.encounter.v = value; break;
    case SweepVar::B: p.encounter.b = value; break;
    case SweepVar::Dx: p.interferometer.dx = value; break;
    case SweepVar::QInt: p.interferometer.q_int = value; break;
  }
  if (t_auto && p.encounter.v > 0) p.encounter.T = p.encounter.b / p.encounter.v;
  return p;
}

std::vector<std::pair<double, DephasingResult>> dephasing_trend(const ChannelParams& p, SweepVar var,
                                                                 const std::vector<double>& grid,
                                                                 bool t_auto,
                                                                 const QuadratureSettings& q,
                                                                 int threads) {
  if (grid.empty()) invalid("sweep grid is empty");
  std::vector<std::pair<double, DephasingResult>> out(grid.size());
  detail::parallel_for(grid.size(), threads, [&](std::size_t i) {
    out[i] = {grid[i], dephasing(with_sweep_value(p, var, grid[i], t_auto), q)};
  });
  return out;
}

}  // namespace emd
