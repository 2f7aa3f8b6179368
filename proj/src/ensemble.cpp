#include "emdephase/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "emdephase/trajectory.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace emd {

namespace {

// Panels [b_min, b_min + w], then doubling widths up to b_max. The integrand carries
// exp(-2 b/scale); panels stop once that factor is negligible against the running sum.
template <class F>
double integrate_impact(F&& f, double b_min, double b_max, double scale, double tol) {
  double sum = 0.0;
  double a = b_min, w = std::min({scale, b_min, b_max - b_min});
  while (a < b_max && a / scale < 350.0) {
    double b = std::min(a + w, b_max);
    const double part = detail::gk_adaptive<15>(f, a, b, tol, 15);
    sum += part;
    if (a / scale > 20.0 && std::abs(part) <= 1e-17 * std::abs(sum)) break;
    a = b;
    w *= 2.0;
  }
  return sum;
}

double averaging_time(const EnsembleOptions& o, const InterferometerConfig& cfg) {
  return o.averaging_time > 0 ? o.averaging_time : 10.0 * cfg.tau();
}

AngleModel model_for(Channel c, const EnsembleOptions& o) {
  return o.angles_from_channel ? default_angle_model(c) : o.angles;
}

void validate_inputs(Channel c, const GasEnsemble& gas, const InterferometerConfig& cfg,
                     const EnvironmentParticle& p, double omega) {
  gas.validate();
  cfg.validate();
  p.validate();
  check_compatible(c, cfg, p);
  if (!(omega > 0)) invalid("averaged PSD needs omega > 0");
}

}  // namespace

GasEnsemble GasEnsemble::from_density(double n_v, double L) {
  GasEnsemble g;
  g.chamber_size = L;
  g.b_max = L;
  g.particle_count = n_v * L * L * L;
  return g;
}

double GasEnsemble::impact_mass() const {
  const double L3 = chamber_size * chamber_size * chamber_size;
  return (b_max * b_max * b_max - b_min * b_min * b_min) / L3;
}

void GasEnsemble::validate() const {
  if (!(particle_count >= 0) || !std::isfinite(particle_count))
    invalid("particle count must be finite and non-negative");
  if (!(chamber_size > 0)) invalid("chamber size L must be positive");
  if (!(temperature > 0)) invalid("gas temperature must be positive");
  if (!(gas_mass > 0)) invalid("gas mass must be positive");
  if (!(b_min > 0 && b_min < b_max)) invalid("impact range needs 0 < b_min < b_max");
  if (b_max > chamber_size * (1 + 1e-12)) invalid("b_max cannot exceed the chamber size L");
}

double density_from_pressure(double pressure, double T_gas) {
  if (!(T_gas > 0)) invalid("gas temperature must be positive");
  return pressure / (constants::k_B * T_gas);
}

VelocityKind parse_velocity_kind(const std::string& s) {
  if (s == "mb" || s == "maxwell" || s == "maxwell-boltzmann") return VelocityKind::MaxwellBoltzmann;
  if (s == "dirac" || s == "delta") return VelocityKind::DiracDelta;
  invalid("unknown velocity model '" + s + "' (expected mb or dirac)");
}

const char* velocity_kind_name(VelocityKind k) {
  return k == VelocityKind::DiracDelta ? "dirac" : "mb";
}

double most_probable_speed(double T_gas, double m_gas) {
  if (!(T_gas > 0) || !(m_gas > 0)) invalid("temperature and gas mass must be positive");
  return std::sqrt(2.0 * constants::k_B * T_gas / m_gas);
}

double maxwell_boltzmann_pdf(double v, double T_gas, double m_gas) {
  if (v < 0) return 0.0;
  const double a = m_gas / (2.0 * std::numbers::pi * constants::k_B * T_gas);
  return a * std::sqrt(a) * 4.0 * std::numbers::pi * v * v *
         std::exp(-m_gas * v * v / (2.0 * constants::k_B * T_gas));
}

double impact_pdf(double b, double L) { return 3.0 * b * b / (L * L * L); }

PsdEstimate averaged_psd(Channel c, const GasEnsemble& gas, const InterferometerConfig& cfg,
                         const EnvironmentParticle& p, double omega, const EnsembleOptions& o) {
  validate_inputs(c, gas, cfg, p, omega);
  const double T = averaging_time(o, cfg);
  const AngleModel model = model_for(c, o);
  const double vbar = most_probable_speed(gas.temperature, gas.gas_mass);
  PsdEstimate out;
  bool underflow = false;

  auto over_b = [&](double v) {
    auto f = [&](double b) {
      return impact_pdf(b, gas.chamber_size) *
             angle_averaged_spectrum_sq(c, cfg, p, b, v, omega, model, o.theta0, o.bessel, &underflow);
    };
    return integrate_impact(f, gas.b_min, gas.b_max, v / omega,
                            o.inner_tolerance);
  };

  double mean;
  if (o.velocity == VelocityKind::DiracDelta) {
    mean = over_b(vbar);
    if (gas.temperature > 1e-4 * (1 + 1e-12)) out.warnings |= kWarnDiracRegime;
  } else {
    // x = v / v_bar with density (4/sqrt(pi)) x^2 exp(-x^2)
    auto g = [&](double x) {
      if (x <= 0) return 0.0;
      return 4.0 / std::sqrt(std::numbers::pi) * x * x * std::exp(-x * x) * over_b(x * vbar);
    };
    mean = 0.0;
    for (int i = 0; i < 16; ++i) mean += detail::gk_adaptive<15>(g, 0.5 * i, 0.5 * (i + 1), o.inner_tolerance, 10);
  }
  if (underflow) out.warnings |= kWarnBesselUnderflow;
  out.value = gas.particle_count * mean / T;
  return out;
}

PsdEstimate averaged_psd_montecarlo(Channel c, const GasEnsemble& gas,
                                    const InterferometerConfig& cfg, const EnvironmentParticle& p,
                                    double omega, const EnsembleOptions& o, std::uint64_t seed,
                                    std::size_t samples, int threads) {
  validate_inputs(c, gas, cfg, p, omega);
  if (samples < 100) invalid("Monte Carlo needs at least 100 samples");
  const double T = averaging_time(o, cfg);
  const AngleModel model = model_for(c, o);
  const double vbar = most_probable_speed(gas.temperature, gas.gas_mass);
  const double sigma = std::sqrt(constants::k_B * gas.temperature / gas.gas_mass);
  const double log_range = std::log(gas.b_max / gas.b_min);

  constexpr std::size_t block = 1024;
  const std::size_t nblocks = (samples + block - 1) / block;
  std::vector<double> sums(nblocks), sqs(nblocks);
  detail::parallel_for(nblocks, threads, [&](std::size_t ib) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(ib), 0x5eedu};
    std::mt19937_64 rng(ss);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N(0.0, sigma);
    ChannelParams cp;
    cp.channel = c;
    cp.interferometer = cfg;
    cp.particle = p;
    cp.encounter.T = T;
    double s = 0.0, s2 = 0.0;
    const std::size_t end = std::min(samples, (ib + 1) * block);
    for (std::size_t i = ib * block; i < end; ++i) {
      const double b = gas.b_min * std::exp(log_range * U(rng));
      const double weight = impact_pdf(b, gas.chamber_size) * b * log_range;
      double v = vbar;
      if (o.velocity == VelocityKind::MaxwellBoltzmann) {
        const double x = N(rng), y = N(rng), z = N(rng);
        v = std::sqrt(x * x + y * y + z * z);
      }
      const double alpha = 2.0 * std::numbers::pi * U(rng);
      const double beta = 2.0 * std::numbers::pi * U(rng);
      double theta0 = 2.0 * std::numbers::pi * U(rng);
      const double gamma = 2.0 * std::numbers::pi * U(rng);
      if (model == AngleModel::Coupled) {
        const double ca = std::cos(alpha);
        theta0 = std::acos(std::sqrt(std::max(0.0, 1.0 - ca * ca)));
      } else if (model == AngleModel::FixedTheta0) {
        theta0 = o.theta0;
      }
      cp.encounter.b = b;
      cp.encounter.v = v > 0 ? v : vbar;
      cp.encounter.alpha = alpha;
      cp.encounter.beta = beta;
      cp.encounter.theta0 = theta0;
      cp.encounter.gamma = gamma;
      const double val = weight * acceleration_spectrum(cp, omega, o.bessel).norm() / T;
      s += val;
      s2 += val * val;
    }
    sums[ib] = s;
    sqs[ib] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < nblocks; ++i) {
    s += sums[i];
    s2 += sqs[i];
  }
  const double n = static_cast<double>(samples);
  const double mean = s / n;
  const double var = std::max(0.0, (s2 / n - mean * mean) * n / (n - 1.0));
  PsdEstimate out;
  out.value = gas.particle_count * mean;
  out.std_error = gas.particle_count * std::sqrt(var / n);
  return out;
}

EnsembleResult ensemble_dephasing(Channel c, const GasEnsemble& gas, const InterferometerConfig& cfg,
                                  const EnvironmentParticle& p, const EnsembleOptions& o,
                                  bool dominant_mode, const QuadratureSettings& q) {
  validate_inputs(c, gas, cfg, p, cfg.omega_min());
  EnsembleResult r;
  const double vbar = most_probable_speed(gas.temperature, gas.gas_mass);
  r.omega_min = cfg.omega_min();
  r.u_min = gas.b_min * r.omega_min / vbar;
  r.u_max = gas.b_max * r.omega_min / vbar;
  const double L3 = gas.chamber_size * gas.chamber_size * gas.chamber_size;
  r.impact_deficit = 1.0 - gas.impact_mass() + (L3 - gas.b_max * gas.b_max * gas.b_max) / L3;
  if (averaging_time(o, cfg) < cfg.tau()) r.warnings |= kWarnShortAveraging;

  if (dominant_mode) {
    auto s = averaged_psd(c, gas, cfg, p, r.omega_min, o);
    const double mh = cfg.mass / constants::hbar;
    r.gamma_n = mh * mh / (2.0 * std::numbers::pi) * s.value *
                transfer_function(cfg, r.omega_min) * r.omega_min;
    r.omega_max = r.omega_min;
    r.warnings |= s.warnings;
    return r;
  }
  unsigned warn = 0;
  auto psd = [&](double w) {
    auto s = averaged_psd(c, gas, cfg, p, w, o);
    warn |= s.warnings;
    return s.value;
  };
  const double decay = gas.b_min / (o.velocity == VelocityKind::DiracDelta ? vbar : 4.0 * vbar);
  auto d = integrate_phase_variance(cfg, psd, decay, q);
  r.gamma_n = d.gamma_n;
  r.estimated_error = d.estimated_error;
  r.omega_max = d.omega_max;
  r.warnings |= warn;
  return r;
}

EnsembleResult qgem_ensemble_dephasing(const GasEnsemble& gas, const InterferometerConfig& cfg,
                                       const EnvironmentParticle& p, bool exact_bessel, Channel c) {
  if (c != Channel::DD && c != Channel::DiC) invalid("QGEM pipeline supports channels dd and dic");
  gas.validate();
  EnsembleOptions o;
  o.velocity = VelocityKind::DiracDelta;
  o.bessel = exact_bessel ? BesselMode::Exact : BesselMode::Small;
  const double vbar = most_probable_speed(gas.temperature, gas.gas_mass);
  const double u_max = gas.b_max * cfg.omega_min() / vbar;
  if (!exact_bessel && u_max >= 1.0)
    invalid("QGEM regime violated: b*omega_min/v_bar = " + std::to_string(u_max) +
            " >= 1 at b_max; rerun with exact Bessel evaluation");
  return ensemble_dephasing(c, gas, cfg, p, o, true);
}

EnsembleResult cnot_ensemble_dephasing(const GasEnsemble& gas, const InterferometerConfig& cfg,
                                       const EnvironmentParticle& p, bool exact_bessel,
                                       const QuadratureSettings& q) {
  gas.validate();
  EnsembleOptions o;
  o.velocity = VelocityKind::DiracDelta;
  o.bessel = exact_bessel ? BesselMode::Exact : BesselMode::Large;
  const double vbar = most_probable_speed(gas.temperature, gas.gas_mass);
  const double u_min = gas.b_min * cfg.omega_min() / vbar;
  if (!exact_bessel && u_min < 1.0)
    invalid("CNOT regime violated: b_min*omega_min/v_bar = " + std::to_string(u_min) +
            " < 1; rerun with exact Bessel evaluation");
  return ensemble_dephasing(Channel::CC, gas, cfg, p, o, false, q);
}

}  // namespace emd
