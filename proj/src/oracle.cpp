#include "emdephase/oracle.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <vector>

#include "emdephase/trajectory.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace emd {

namespace {

double max_dt(const InterferometerConfig& cfg, const Encounter& e) {
  return std::min(cfg.t_a / 100.0, e.b / (100.0 * e.v));
}

double trapezoid(const AccelerationProfile& acc, const InterferometerConfig& cfg, double t0,
                 double lo, double hi, double dt) {
  const double bd[] = {0.0, cfg.t_a, 2 * cfg.t_a, 2 * cfg.t_a + cfg.t_e, 3 * cfg.t_a + cfg.t_e, cfg.tau()};
  auto f = [&](double t) { return acc(t - t0) * arm_separation(cfg, std::min(t, cfg.tau())); };
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double a = std::max(lo, bd[i]), b = std::min(hi, bd[i + 1]);
    if (!(b > a)) continue;
    const auto n = static_cast<std::size_t>(std::ceil((b - a) / dt));
    const double h = (b - a) / static_cast<double>(n);
    double s = 0.5 * (f(a) + f(b));
    for (std::size_t j = 1; j < n; ++j) s += f(a + h * static_cast<double>(j));
    sum += s * h;
  }
  return sum;
}

double encounter_phase(const AccelerationProfile& acc, const InterferometerConfig& cfg,
                       const Encounter& e, double t0, const OracleSettings& s) {
  const double half = s.window_factor * e.b / e.v;
  const double lo = std::max(0.0, t0 - half), hi = std::min(cfg.tau(), t0 + half);
  if (!(hi > lo)) return 0.0;
  double dt = s.dt > 0 ? s.dt : max_dt(cfg, e);
  double prev = trapezoid(acc, cfg, t0, lo, hi, dt);
  for (int k = 0; k < s.max_refinements; ++k) {
    dt *= 0.5;
    const double cur = trapezoid(acc, cfg, t0, lo, hi, dt);
    if (std::abs(cur - prev) <= s.refine_tolerance * std::abs(cur)) return cur * cfg.mass / constants::hbar;
    prev = cur;
  }
  throw Error(Status::NonConvergence, "phase trapezoid did not settle under dt refinement",
              prev * cfg.mass / constants::hbar);
}

void check_dt(const ChannelParams& p, const OracleSettings& s) {
  s.validate();
  if (s.dt > 0 && s.dt > max_dt(p.interferometer, p.encounter) * (1 + 1e-12))
    invalid("undersampled dt: need dt <= min(t_a/100, b/(100 v))");
}

std::mt19937_64 block_rng(std::uint64_t seed, std::size_t block) {
  std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(ss);
}

MonteCarloVariance reduce(const std::vector<double>& x, double scale) {
  MonteCarloVariance r;
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0;
  for (double v : x) m2 += (v - mean) * (v - mean);
  const double var = m2 / (n - 1.0);
  double q = 0.0;
  for (double v : x) {
    const double y = (v - mean) * (v - mean) - var;
    q += y * y;
  }
  r.variance = scale * var;
  r.std_error = scale * std::sqrt(q / (n - 1.0) / n);
  r.mean = mean;
  r.mean_std_error = std::sqrt(var / n);
  r.realizations = x.size();
  return r;
}

constexpr std::size_t kBlock = 256;

}  // namespace

void OracleSettings::validate() const {
  if (!(dt >= 0)) invalid("dt must be non-negative");
  if (!(window_factor > 0)) invalid("window factor must be positive");
  if (!(t0_window >= 0)) invalid("t0 window must be non-negative");
  if (!(refine_tolerance > 0)) invalid("refine tolerance must be positive");
  if (max_refinements < 1) invalid("max_refinements must be at least 1");
}

double phase_of_encounter(const ChannelParams& p, double t0, const OracleSettings& s) {
  check_dt(p, s);
  AccelerationProfile acc(p);
  return encounter_phase(acc, p.interferometer, p.encounter, t0, s);
}

MonteCarloVariance phase_noise_mc(const ChannelParams& p, std::size_t realizations,
                                  std::uint64_t seed, int threads, const OracleSettings& s) {
  if (realizations < 100) invalid("Monte Carlo needs at least 100 realizations");
  check_dt(p, s);
  AccelerationProfile acc(p);
  const double W = s.t0_window > 0 ? s.t0_window : p.encounter.T;
  std::vector<double> phases(realizations);
  const std::size_t nblocks = (realizations + kBlock - 1) / kBlock;
  detail::parallel_for(nblocks, threads, [&](std::size_t ib) {
    auto rng = block_rng(seed, ib);
    std::uniform_real_distribution<double> U(-0.5 * W, 0.5 * W);
    const std::size_t end = std::min(realizations, (ib + 1) * kBlock);
    for (std::size_t i = ib * kBlock; i < end; ++i)
      phases[i] = encounter_phase(acc, p.interferometer, p.encounter, U(rng), s);
  });
  auto r = reduce(phases, 1.0);
  r.dt = s.dt > 0 ? s.dt : max_dt(p.interferometer, p.encounter);
  return r;
}

MonteCarloVariance phase_noise_mc_gas(Channel c, const GasEnsemble& gas,
                                      const InterferometerConfig& cfg, const EnvironmentParticle& p,
                                      const EnsembleOptions& o, std::size_t realizations,
                                      std::uint64_t seed, int threads, const OracleSettings& s) {
  if (realizations < 100) invalid("Monte Carlo needs at least 100 realizations");
  gas.validate();
  cfg.validate();
  p.validate();
  check_compatible(c, cfg, p);
  s.validate();
  if (s.dt > 0) invalid("gas Monte Carlo picks dt per encounter; leave dt at 0");
  const double W = s.t0_window > 0 ? s.t0_window : (o.averaging_time > 0 ? o.averaging_time : 10 * cfg.tau());
  const double vbar = most_probable_speed(gas.temperature, gas.gas_mass);
  const double sigma = std::sqrt(constants::k_B * gas.temperature / gas.gas_mass);
  const double log_range = std::log(gas.b_max / gas.b_min);
  const AngleModel model = o.angles_from_channel ? default_angle_model(c) : o.angles;

  // Each entry is sqrt(weight) * phase so that the sample second moment is the weighted one.
  std::vector<double> phases(realizations);
  const std::size_t nblocks = (realizations + kBlock - 1) / kBlock;
  detail::parallel_for(nblocks, threads, [&](std::size_t ib) {
    auto rng = block_rng(seed, ib);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N(0.0, sigma);
    ChannelParams cp;
    cp.channel = c;
    cp.interferometer = cfg;
    cp.particle = p;
    const std::size_t end = std::min(realizations, (ib + 1) * kBlock);
    for (std::size_t i = ib * kBlock; i < end; ++i) {
      const double b = gas.b_min * std::exp(log_range * U(rng));
      const double weight = impact_pdf(b, gas.chamber_size) * b * log_range;
      double v = vbar;
      if (o.velocity == VelocityKind::MaxwellBoltzmann) {
        const double x = N(rng), y = N(rng), z = N(rng);
        v = std::sqrt(x * x + y * y + z * z);
      }
      auto& e = cp.encounter;
      e.b = b;
      e.v = v > 0 ? v : vbar;
      e.alpha = 2 * std::numbers::pi * U(rng);
      e.beta = 2 * std::numbers::pi * U(rng);
      e.theta0 = 2 * std::numbers::pi * U(rng);
      e.gamma = 2 * std::numbers::pi * U(rng);
      if (model == AngleModel::Coupled) {
        const double ca = std::cos(e.alpha);
        e.theta0 = std::acos(std::sqrt(std::max(0.0, 1.0 - ca * ca)));
      } else if (model == AngleModel::FixedTheta0) {
        e.theta0 = o.theta0;
      }
      e.T = W;
      const double t0 = W * (U(rng) - 0.5);
      AccelerationProfile acc(cp);
      phases[i] = std::sqrt(weight) * encounter_phase(acc, cfg, e, t0, s);
    }
  });
  return reduce(phases, gas.particle_count);
}

double periodogram_check(const ChannelParams& p, double record_length, double dt) {
  p.validate();
  const auto& e = p.encounter;
  if (!(record_length >= 20 * e.b / e.v)) invalid("record too short: need record_length >= 20 b/v");
  if (!(dt > 0)) invalid("dt must be positive");
  const auto n = static_cast<std::size_t>(std::llround(record_length / dt));
  if (n < 16) invalid("record has too few samples");
  AccelerationProfile acc(p);

  std::vector<double> in(n);
  std::vector<fftw_complex> out(n / 2 + 1);
  const double t_start = -0.5 * dt * static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) in[j] = acc(t_start + dt * static_cast<double>(j));
  {
    static std::mutex plan_mutex;
    fftw_plan plan;
    {
      std::lock_guard lock(plan_mutex);
      plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(plan_mutex);
    fftw_destroy_plan(plan);
  }

  const double unit = e.v / e.b;
  const double dw = 2 * std::numbers::pi / (dt * static_cast<double>(n));
  double worst = 0.0;
  for (std::size_t k = 1; k < out.size(); ++k) {
    const double w = dw * static_cast<double>(k);
    if (w < 0.2 * unit || w > 5.0 * unit) continue;
    const double fft = dt * dt * (out[k][0] * out[k][0] + out[k][1] * out[k][1]);
    const double exact = acceleration_spectrum(p, w).norm();
    double dev;
    if (exact == 0.0) dev = fft == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    else dev = std::abs(fft - exact) / exact;
    worst = std::max(worst, dev);
  }
  return worst;
}

double full_band_variance(const ChannelParams& p, double t0_window) {
  p.validate();
  if (!(t0_window > 0)) invalid("t0 window must be positive");
  const auto& cfg = p.interferometer;
  const double unit = p.encounter.v / p.encounter.b;
  const double h = std::numbers::pi / (2 * cfg.t_a + cfg.t_e);
  const double top = 60.0 * unit;
  auto f = [&](double w) {
    if (w <= 0) return 0.0;
    return acceleration_spectrum(p, w).norm() * transfer_function_numeric(cfg, w).value;
  };
  double sum = 0.0;
  for (double a = 0.0; a < top; a += h) sum += detail::gk_adaptive<31>(f, a, std::min(a + h, top), 1e-10, 10);
  const double mh = cfg.mass / constants::hbar;
  return mh * mh * sum / (std::numbers::pi * t0_window);
}

}  // namespace emd
