#pragma once

#include "emdephase/core.hpp"

namespace emd {

// Relative acceleration magnitude Dx/t_a^2 of the arm separation.
double relative_acceleration(const InterferometerConfig& cfg);

// Convenience: per-arm acceleration s*g*muB*|grad B|/m from a field gradient.
double spin_acceleration(double g_factor, double grad_b, double mass, double spin = 0.5);

// Piece index 0..4 for t in [0, tau].
int trajectory_piece(const InterferometerConfig& cfg, double t);

// x_R(t) - x_L(t): piecewise quadratic, plateau dx on [2t_a, 2t_a+t_e].
double arm_separation(const InterferometerConfig& cfg, double t);
double arm_separation_rate(const InterferometerConfig& cfg, double t);

// 32 dx^2/(w^6 t_a^4) sin^4(t_a w/2) sin^2(w(2t_a+t_e)/2); series form below w*tau < 1e-4.
double transfer_function(const InterferometerConfig& cfg, double omega);

struct NumericTransfer {
  double value;
  double estimated_error;
};

// |int_0^tau (x_L - x_R) e^{i w t} dt|^2 by Gauss-Legendre quadrature of arm_separation.
NumericTransfer transfer_function_numeric(const InterferometerConfig& cfg, double omega);

}  // namespace emd
