#pragma once

namespace emd {

// Order nu = twice / 2, twice in 0..5.
struct BesselOrder {
  int twice;
  constexpr double nu() const { return 0.5 * twice; }
};

inline constexpr BesselOrder K0{0}, Khalf{1}, K1{2}, K3half{3}, K2{4}, K5half{5};

inline constexpr double kBesselUnderflowArg = 700.0;

// K_nu(u) for u > 0. Returns exact 0 past u = 700 and sets *underflow.
// Negative orders map through K_{-nu} = K_nu.
double bessel_k(BesselOrder order, double u, bool* underflow = nullptr);
double bessel_k_signed(int twice, double u, bool* underflow = nullptr);

// (Gamma(n)/2)(2/u)^n, valid for n > 0 and 0 < u <= sqrt(n+1).
double bessel_k_small(BesselOrder order, double u);

// e^{-u} sqrt(pi/(2u)) for u >= 1, independent of order.
double bessel_k_large(BesselOrder order, double u);

enum class BesselMode { Exact, Small, Large };
const char* bessel_mode_name(BesselMode m);

// Dispatch used by the ensemble integrands.
double bessel_k_mode(BesselMode mode, int twice, double u, bool* underflow = nullptr);

}  // namespace emd
