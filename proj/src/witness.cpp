#include "emdephase/witness.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "emdephase/trajectory.hpp"
#include "quadrature.hpp"

namespace emd {

namespace {

using cd = std::complex<double>;

std::array<double, 6> piece_bounds(const InterferometerConfig& c) {
  return {0.0, c.t_a, 2 * c.t_a, 2 * c.t_a + c.t_e, 3 * c.t_a + c.t_e, c.tau()};
}

template <class F>
double integrate_pieces(const InterferometerConfig& cfg, F&& f) {
  auto bd = piece_bounds(cfg);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) sum += detail::gk_adaptive<31>(f, bd[i], bd[i + 1], 1e-13, 15);
  return sum;
}

void check_separation(const InterferometerConfig& cfg, double d) {
  cfg.validate();
  if (!(d > cfg.dx)) invalid("trap separation d must exceed dx");
}

Matrix4 kron(const std::array<std::array<cd, 2>, 2>& a, const std::array<std::array<cd, 2>, 2>& b) {
  Matrix4 m{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) m[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
  return m;
}

}  // namespace

const char* coupling_name(Coupling c) { return c == Coupling::Coulomb ? "coulomb" : "gravitational"; }

Coupling parse_coupling(const std::string& s) {
  if (s == "gravity" || s == "gravitational") return Coupling::Gravitational;
  if (s == "coulomb") return Coupling::Coulomb;
  invalid("unknown coupling '" + s + "' (expected gravitational or coulomb)");
}

double separation_integral(const InterferometerConfig& cfg, double d) {
  check_separation(cfg, d);
  // 1/r - 1/d = -D^2/(d r (d + r)) avoids cancellation for small D.
  return integrate_pieces(cfg, [&](double t) {
    const double D = arm_separation(cfg, t);
    const double r = std::hypot(d, D);
    return -D * D / (d * r * (d + r));
  });
}

double mean_square_separation(const InterferometerConfig& cfg) {
  cfg.validate();
  return integrate_pieces(cfg, [&](double t) {
           const double D = arm_separation(cfg, t);
           return D * D;
         }) /
         cfg.tau();
}

EntanglementPhases gravitational_phases(double mass, double d, const InterferometerConfig& cfg) {
  if (!(mass > 0)) invalid("mass must be positive");
  check_separation(cfg, d);
  const double c = constants::G * mass * mass / constants::hbar;
  return {cfg.tau() * c / d, c * separation_integral(cfg, d), Coupling::Gravitational, d};
}

EntanglementPhases coulomb_phases(double q1, double q2, double d, const InterferometerConfig& cfg) {
  check_separation(cfg, d);
  const double c = constants::kappa * q1 * q2 / constants::hbar;
  return {-cfg.tau() * c / d, -c * separation_integral(cfg, d), Coupling::Coulomb, d};
}

Matrix4 averaged_density_matrix(double delta_phi, double gamma_n) {
  if (!(gamma_n >= 0)) invalid("Gamma_n must be non-negative");
  const cd c = std::exp(cd(-gamma_n / 2, delta_phi));
  const cd cc = std::conj(c);
  const cd g = std::exp(-2 * gamma_n);
  Matrix4 r = {{{1.0, cc, cc, g}, {c, 1.0, 1.0, c}, {c, 1.0, 1.0, c}, {g, cc, cc, 1.0}}};
  for (auto& row : r)
    for (auto& x : row) x *= 0.25;
  return r;
}

Matrix4 witness_operator(double delta_phi) {
  using P = std::array<std::array<cd, 2>, 2>;
  const P I{{{1.0, 0.0}, {0.0, 1.0}}};
  const P X{{{0.0, 1.0}, {1.0, 0.0}}};
  const P Y{{{0.0, cd(0, -1)}, {cd(0, 1), 0.0}}};
  const P Z{{{1.0, 0.0}, {0.0, -1.0}}};
  const double s = delta_phi < 0 ? -1.0 : 1.0;
  Matrix4 ii = kron(I, I), xx = kron(X, X), zy = kron(Z, Y), yz = kron(Y, Z), w{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) w[i][j] = 0.25 * (ii[i][j] - xx[i][j] - s * (zy[i][j] + yz[i][j]));
  return w;
}

Matrix4 partial_transpose(const Matrix4& rho) {
  Matrix4 out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) out[2 * a + b][2 * c + d] = rho[2 * a + d][2 * c + b];
  return out;
}

std::complex<double> trace_product(const Matrix4& a, const Matrix4& b) {
  cd t = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) t += a[i][k] * b[k][i];
  return t;
}

std::array<double, 4> hermitian_eigenvalues(const Matrix4& m) {
  Eigen::Matrix4cd e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e(i, j) = m[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(e, Eigen::EigenvaluesOnly);
  auto v = es.eigenvalues();
  return {v(0), v(1), v(2), v(3)};
}

double witness_expectation(double delta_phi, double gamma_n) {
  if (!(gamma_n >= 0)) invalid("Gamma_n must be non-negative");
  return 0.125 * -std::expm1(-2 * gamma_n) - 0.5 * std::sin(std::abs(delta_phi)) * std::exp(-gamma_n / 2);
}

double witness_trace(double delta_phi, double gamma_n) {
  return trace_product(witness_operator(delta_phi), averaged_density_matrix(delta_phi, gamma_n)).real();
}

double partial_transpose_min_eigenvalue(double delta_phi, double gamma_n) {
  return hermitian_eigenvalues(partial_transpose(averaged_density_matrix(delta_phi, gamma_n)))[0];
}

Detectability detectable(double delta_phi, double gamma_n) {
  Detectability d;
  d.witness = witness_expectation(delta_phi, gamma_n);
  d.detectable = d.witness < 0;
  d.margin = std::abs(delta_phi) / 4 - gamma_n;
  d.threshold_rule = d.margin > 0;
  return d;
}

double witness_root(double delta_phi) {
  const double s = std::sin(std::abs(delta_phi));
  if (!(s > 0)) return 0.0;
  auto f = [&](double g) { return witness_expectation(delta_phi, g); };
  double hi = 1.0;
  while (f(hi) < 0) hi *= 2;
  boost::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, 0.0, hi, boost::math::tools::eps_tolerance<double>(52),
                                             iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace emd
