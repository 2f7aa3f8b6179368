#pragma once

#include <complex>
#include <vector>

#include "emdephase/core.hpp"
#include "emdephase/specfun.hpp"

namespace emd {

struct ChannelParams {
  Channel channel = Channel::CC;
  InterferometerConfig interferometer;
  EnvironmentParticle particle;
  Encounter encounter;

  void validate() const;
};

struct SpectrumValue {
  double real_part = 0.0;
  double imag_part = 0.0;
  bool underflow = false;

  std::complex<double> value() const { return {real_part, imag_part}; }
  double norm() const { return real_part * real_part + imag_part * imag_part; }
};

// Time-domain prefactor A such that a_x(t) = A * shape(vt/b); DD excludes cos(theta0).
double channel_amplitude(Channel c, const InterferometerConfig& cfg, const EnvironmentParticle& p,
                         double b);
// Twice the order nu of the leading Bessel function in the channel's transform.
int channel_bessel_twice(Channel c);

double acceleration_time(const ChannelParams& p, double t);

// a_x(t) with validation and projections done once; for sampling loops.
class AccelerationProfile {
 public:
  explicit AccelerationProfile(const ChannelParams& p);
  double operator()(double t) const;

 private:
  Channel channel_;
  double amp_, rate_, ca_, cb_, ct_, cg_;
};
SpectrumValue acceleration_spectrum(const ChannelParams& p, double omega,
                                    BesselMode mode = BesselMode::Exact);
double encounter_psd(const ChannelParams& p, double omega, BesselMode mode = BesselMode::Exact);

// How the dipole angles are treated under ensemble averaging.
enum class AngleModel {
  Independent,  // alpha, beta, theta0, gamma uniform and independent
  Coupled,      // dd: cos(theta0) = sqrt(1 - cos^2 alpha)
  FixedTheta0,  // dd: theta0 held at the encounter value
};

// |a_x(omega)|^2 averaged over the projection angles (not divided by T).
double angle_averaged_spectrum_sq(Channel c, const InterferometerConfig& cfg,
                                  const EnvironmentParticle& p, double b, double v, double omega,
                                  AngleModel model, double theta0, BesselMode mode,
                                  bool* underflow = nullptr);

AngleModel default_angle_model(Channel c);

struct AngleArgmax {
  double alpha = 0.0;
  double beta = 0.0;
  double theta0 = 0.0;
  double gamma = 0.0;
  double value = 0.0;
};

// |shape(u)| with the maximisation coupling for dpc/dd.
double angle_objective(Channel c, double u, double alpha, double beta);
AngleArgmax optimal_angles(Channel c, double u, int threads = 1);
// grid x grid samples over [0, pi]^2, row-major in alpha, normalised to max 1.
std::vector<double> angle_map(Channel c, double u, int grid, int threads = 1);

}  // namespace emd
