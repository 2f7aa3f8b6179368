#pragma once

#include <cstdint>
#include <string>

#include "emdephase/channels.hpp"
#include "emdephase/dephasing.hpp"

namespace emd {

struct GasEnsemble {
  double particle_count = 1.0;  // N
  double chamber_size = 0.01;   // L
  double temperature = 1e-4;    // T_gas
  double gas_mass = 4.8e-26;    // m_gas
  double b_min = 1e-6;
  double b_max = 0.01;

  static GasEnsemble from_density(double n_v, double L);
  double number_density() const { return particle_count / (chamber_size * chamber_size * chamber_size); }
  double pressure() const { return number_density() * constants::k_B * temperature; }
  // Mass of p_b on [b_min, b_max]: (b_max^3 - b_min^3)/L^3.
  double impact_mass() const;
  void validate() const;
};

double density_from_pressure(double pressure, double T_gas);

enum class VelocityKind { MaxwellBoltzmann, DiracDelta };
VelocityKind parse_velocity_kind(const std::string& s);
const char* velocity_kind_name(VelocityKind k);

double most_probable_speed(double T_gas, double m_gas);
double maxwell_boltzmann_pdf(double v, double T_gas, double m_gas);
double impact_pdf(double b, double L);

struct EnsembleOptions {
  VelocityKind velocity = VelocityKind::DiracDelta;
  AngleModel angles = AngleModel::Independent;
  bool angles_from_channel = true;  // use default_angle_model(channel)
  double theta0 = 0.0;              // for AngleModel::FixedTheta0
  BesselMode bessel = BesselMode::Exact;
  double averaging_time = 0.0;      // 0 selects 10 tau
  double inner_tolerance = 1e-9;
};

struct PsdEstimate {
  double value = 0.0;
  double std_error = 0.0;
  unsigned warnings = 0;
};

PsdEstimate averaged_psd(Channel c, const GasEnsemble& gas, const InterferometerConfig& cfg,
                         const EnvironmentParticle& p, double omega, const EnsembleOptions& o);

PsdEstimate averaged_psd_montecarlo(Channel c, const GasEnsemble& gas,
                                    const InterferometerConfig& cfg, const EnvironmentParticle& p,
                                    double omega, const EnsembleOptions& o, std::uint64_t seed,
                                    std::size_t samples, int threads = 1);

struct EnsembleResult {
  double gamma_n = 0.0;
  double estimated_error = 0.0;
  double omega_min = 0.0;
  double omega_max = 0.0;
  double u_min = 0.0;  // smallest b*omega_min/v_bar on the b-range
  double u_max = 0.0;  // largest
  double impact_deficit = 0.0;
  unsigned warnings = 0;
};

EnsembleResult ensemble_dephasing(Channel c, const GasEnsemble& gas, const InterferometerConfig& cfg,
                                  const EnvironmentParticle& p, const EnsembleOptions& o,
                                  bool dominant_mode, const QuadratureSettings& q = {});

// DD (or DiC) with the small-argument Bessel form and the dominant mode; T = 10 tau.
EnsembleResult qgem_ensemble_dephasing(const GasEnsemble& gas, const InterferometerConfig& cfg,
                                       const EnvironmentParticle& p, bool exact_bessel = false,
                                       Channel c = Channel::DD);

// CC with the large-argument Bessel form and full omega integration; T = 10 tau.
EnsembleResult cnot_ensemble_dephasing(const GasEnsemble& gas, const InterferometerConfig& cfg,
                                       const EnvironmentParticle& p, bool exact_bessel = false,
                                       const QuadratureSettings& q = {});

}  // namespace emd
