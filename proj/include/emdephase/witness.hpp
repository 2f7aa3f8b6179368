#pragma once

#include <array>
#include <complex>
#include <string>

#include "emdephase/core.hpp"

namespace emd {

enum class Coupling { Gravitational, Coulomb };
const char* coupling_name(Coupling c);
Coupling parse_coupling(const std::string& s);

struct EntanglementPhases {
  double phi = 0.0;        // static phase tau*V(d)/hbar with the sign of the coupling
  double delta_phi = 0.0;  // time-dependent correction from the arm separation
  Coupling coupling = Coupling::Gravitational;
  double separation = 0.0;
};

// int_0^tau (1/sqrt(d^2 + D(t)^2) - 1/d) dt, always <= 0.
double separation_integral(const InterferometerConfig& cfg, double d);
// int_0^tau D(t)^2 dt / tau.
double mean_square_separation(const InterferometerConfig& cfg);

EntanglementPhases gravitational_phases(double mass, double d, const InterferometerConfig& cfg);
EntanglementPhases coulomb_phases(double q1, double q2, double d, const InterferometerConfig& cfg);

using Matrix4 = std::array<std::array<std::complex<double>, 4>, 4>;

// Basis order up-up, up-down, down-up, down-down.
Matrix4 averaged_density_matrix(double delta_phi, double gamma_n);
// (1/4)(II - XX - s(ZY + YZ)) with s = sign(delta_phi), s = +1 at delta_phi = 0.
Matrix4 witness_operator(double delta_phi);
Matrix4 partial_transpose(const Matrix4& rho);
std::complex<double> trace_product(const Matrix4& a, const Matrix4& b);
// Ascending eigenvalues of a Hermitian 4x4 matrix.
std::array<double, 4> hermitian_eigenvalues(const Matrix4& m);

// (1/8)(1 - e^{-2G}) - (1/2) sin|dphi| e^{-G/2}
double witness_expectation(double delta_phi, double gamma_n);
double witness_trace(double delta_phi, double gamma_n);
double partial_transpose_min_eigenvalue(double delta_phi, double gamma_n);

struct Detectability {
  bool detectable = false;    // <W> < 0
  double witness = 0.0;
  double margin = 0.0;        // |dphi|/4 - G
  bool threshold_rule = false;  // G < |dphi|/4
};
Detectability detectable(double delta_phi, double gamma_n);

// Gamma_n at which <W> crosses zero; 0 when sin|dphi| = 0.
double witness_root(double delta_phi);

}  // namespace emd
