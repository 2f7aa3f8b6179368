#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace emd {

// CODATA 2018 exact or recommended values.
namespace constants {
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double e = 1.602176634e-19;           // C
inline constexpr double k_B = 1.380649e-23;            // J/K
inline constexpr double G = 6.67430e-11;               // m^3/(kg s^2)
inline constexpr double kappa = 1.0 / (4.0 * std::numbers::pi * epsilon0);
inline constexpr double e_um = e * 1e-6;               // 1 e*um in C*m
}  // namespace constants

enum class Status : int {
  Ok = 0,
  InvalidInput = 2,
  NonConvergence = 3,
  Io = 4,
  Internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(Status code, const std::string& what,
        double partial = std::numeric_limits<double>::quiet_NaN(),
        double achieved_error = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), code_(code), partial_(partial), achieved_(achieved_error) {}
  Status code() const noexcept { return code_; }
  double partial() const noexcept { return partial_; }
  double achieved_error() const noexcept { return achieved_; }

 private:
  Status code_;
  double partial_;
  double achieved_;
};

[[noreturn]] inline void invalid(const std::string& msg) { throw Error(Status::InvalidInput, msg); }

// Warning bits carried on results.
enum Warning : unsigned {
  kWarnShortAveraging = 1u << 0,   // T < tau
  kWarnBesselUnderflow = 1u << 1,  // some K_nu returned 0 past the underflow threshold
  kWarnDiracRegime = 1u << 2,      // Dirac-delta velocity model used above 1e-4 K
  kWarnOutsideValidity = 1u << 3,  // T = b/v <= tau
};

struct InterferometerConfig {
  double mass = 1e-15;
  double dx = 20e-6;
  double t_a = 0.5;
  double t_e = 1.0;
  double q_int = 0.0;
  double d_int = 0.0;
  double radius = 1e-6;
  double eps_r = 5.7;

  double tau() const { return 4.0 * t_a + t_e; }
  double omega_min() const { return 2.0 * std::numbers::pi / tau(); }
  void validate() const;
};

struct EnvironmentParticle {
  double q_ext = 0.0;
  double d_ext = 0.0;
  double alpha_pol = 0.0;
  double m_gas = 4.8e-26;

  void validate() const;
};

struct Encounter {
  double b = 1e-4;
  double v = 1e-5;
  double alpha = 0.0;
  double beta = 0.0;
  double theta0 = 0.0;
  double gamma = 0.0;
  double T = 10.0;

  void validate() const;
};

enum class Channel { CC, CDp, CDi, DpC, DiC, DD };

const char* channel_tag(Channel c);
Channel parse_channel(const std::string& tag);
// Throws InvalidInput naming the missing property.
void check_compatible(Channel c, const InterferometerConfig& cfg, const EnvironmentParticle& p);

double distance(double b, double v, double t);
double tau(const InterferometerConfig& cfg);

// cos with the rounding residue of multiples of pi/2 removed.
inline double projection(double angle) {
  double c = std::cos(angle);
  return std::abs(c) < 1e-15 ? 0.0 : c;
}

inline double clausius_mossotti(double eps_r) { return (eps_r - 1.0) / (eps_r + 2.0); }

}  // namespace emd
