#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "emdephase/channels.hpp"

namespace emd {

struct QuadratureSettings {
  double relative_tolerance = 1e-6;
  std::size_t max_subdivisions = 2'000'000;
  double cutoff_k = 40.0;       // first guess for omega_max, in units of v/b
  double panel_fraction = 1.0;  // panel width as a fraction of pi/(2t_a+t_e)

  void validate() const;
};

struct DephasingResult {
  double gamma_n = 0.0;
  double estimated_error = 0.0;
  double omega_min = 0.0;
  double omega_max = 0.0;
  std::size_t panels = 0;
  unsigned warnings = 0;
};

using SpectralDensity = std::function<double(double)>;

// (1/2pi)(m/hbar)^2 int_{omega_min}^inf S(w) F(w) dw with oscillation-aligned panels.
// decay_time sets the exponential scale of S: S(w) <~ exp(-2 w decay_time).
DephasingResult integrate_phase_variance(const InterferometerConfig& cfg, const SpectralDensity& psd,
                                         double decay_time, const QuadratureSettings& q,
                                         const std::function<double(double)>& transfer = {});

DephasingResult dephasing(const ChannelParams& p, const QuadratureSettings& q = {});
double dominant_mode_dephasing(const ChannelParams& p);

enum class SweepVar { V, B, Dx, QInt };
SweepVar parse_sweep_var(const std::string& name);
const char* sweep_var_name(SweepVar v);

// Applies value to a copy of p; when t_auto is set T follows b/v.
ChannelParams with_sweep_value(ChannelParams p, SweepVar var, double value, bool t_auto);

std::vector<std::pair<double, DephasingResult>> dephasing_trend(const ChannelParams& p, SweepVar var,
                                                                 const std::vector<double>& grid,
                                                                 bool t_auto,
                                                                 const QuadratureSettings& q = {},
                                                                 int threads = 1);

}  // namespace emd
