#pragma once

#include <cstddef>
#include <cstdint>

#include "emdephase/channels.hpp"
#include "emdephase/ensemble.hpp"

namespace emd {

struct OracleSettings {
  double dt = 0.0;               // 0 picks min(t_a/100, b/(100 v))
  double window_factor = 50.0;   // acceleration kept for |t - t0| <= window_factor * b/v
  double t0_window = 0.0;        // t0 uniform in [-W/2, W/2]; 0 selects encounter.T
  double refine_tolerance = 1e-3;
  int max_refinements = 12;

  void validate() const;
};

// (m/hbar) int_0^tau a_x(t - t0) D(t) dt by trapezoid with piece-aligned nodes,
// halving dt until the relative change drops below refine_tolerance.
double phase_of_encounter(const ChannelParams& p, double t0, const OracleSettings& s = {});

struct MonteCarloVariance {
  double variance = 0.0;
  double std_error = 0.0;
  double mean = 0.0;
  double mean_std_error = 0.0;
  std::size_t realizations = 0;
  double dt = 0.0;
};

// Variance of the phase over random arrival times t0 for a fixed encounter geometry.
MonteCarloVariance phase_noise_mc(const ChannelParams& p, std::size_t realizations,
                                  std::uint64_t seed, int threads = 1, const OracleSettings& s = {});

// Gas ensemble: each realization draws (b, v, angles, t0); variance scales with the particle count.
MonteCarloVariance phase_noise_mc_gas(Channel c, const GasEnsemble& gas,
                                      const InterferometerConfig& cfg, const EnvironmentParticle& p,
                                      const EnsembleOptions& o, std::size_t realizations,
                                      std::uint64_t seed, int threads = 1,
                                      const OracleSettings& s = {});

// Worst relative deviation between |dt FFT(a)|^2 and |a(omega)|^2 over [0.2, 5] v/b.
double periodogram_check(const ChannelParams& p, double record_length, double dt);

// (m/hbar)^2 (1/(pi W)) int_0^inf |a(omega)|^2 |FT D|^2 d omega with the numeric transfer function.
// Equals the t0-averaged phase variance when W covers the whole encounter.
double full_band_variance(const ChannelParams& p, double t0_window);

}  // namespace emd
