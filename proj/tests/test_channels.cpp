#include <doctest.h>

#include <cmath>
#include <numbers>

#include "emdephase/channels.hpp"
#include "emdephase/oracle.hpp"

using namespace emd;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;
const Channel kAll[] = {Channel::CC, Channel::CDp, Channel::CDi, Channel::DpC, Channel::DiC, Channel::DD};

ChannelParams full(Channel c, double angle = pi / 4) {
  ChannelParams p;
  p.channel = c;
  p.interferometer.q_int = constants::e;
  p.interferometer.d_int = 0.1 * constants::e_um;
  p.particle.q_ext = constants::e;
  p.particle.d_ext = 6.17e-30;
  p.particle.alpha_pol = 1.903e-40;
  p.encounter.b = 1e-4;
  p.encounter.v = 1e-5;
  p.encounter.alpha = p.encounter.beta = p.encounter.theta0 = p.encounter.gamma = angle;
  p.encounter.T = 10.0;
  return p;
}

}  // namespace

TEST_SUITE("channels") {
  TEST_CASE("cc peak acceleration") {
    auto p = full(Channel::CC, 0.0);
    const double expect = constants::kappa * constants::e * constants::e / (1e-15 * 1e-8);
    CHECK(acceleration_time(p, 0.0) == Approx(expect).epsilon(1e-14));
    CHECK(acceleration_time(p, 0.0) == Approx(2.31e-5).epsilon(1e-2));
  }

  TEST_CASE("vanishing projections") {
    for (auto c : kAll) {
      auto p = full(c, pi / 2);
      CHECK(acceleration_time(p, 0.0) == 0.0);
      CHECK(acceleration_spectrum(p, 0.1).norm() == 0.0);
    }
  }

  TEST_CASE("cc parity") {
    auto p = full(Channel::CC);
    p.encounter.beta = pi / 2;
    for (double t : {0.3, 5.0, 40.0}) CHECK(acceleration_time(p, t) == acceleration_time(p, -t));
    p = full(Channel::CC);
    p.encounter.alpha = pi / 2;
    for (double t : {0.3, 5.0, 40.0}) CHECK(acceleration_time(p, t) == -acceleration_time(p, -t));
  }

  TEST_CASE("real and imaginary parts follow the projections") {
    for (auto c : kAll) {
      auto p = full(c);
      p.encounter.beta = pi / 2;
      if (c == Channel::DpC) p.encounter.gamma = pi / 2;
      CHECK(acceleration_spectrum(p, 0.1).imag_part == 0.0);
      CHECK(acceleration_spectrum(p, 0.1).real_part != 0.0);
      p = full(c);
      // dpc: the cos(beta)cos(gamma) term is even in time and lands in the real part
      p.encounter.alpha = pi / 2;
      if (c == Channel::DpC) p.encounter.gamma = pi / 2;
      CHECK(acceleration_spectrum(p, 0.1).real_part == 0.0);
      CHECK(acceleration_spectrum(p, 0.1).imag_part != 0.0);
    }
  }

  TEST_CASE("cc spectrum shape") {
    auto p = full(Channel::CC, 0.0);
    p.encounter.beta = pi / 2;
    const auto& e = p.encounter;
    const double r0 = acceleration_spectrum(p, 0.01).real_part / (0.01 * bessel_k(K1, e.b * 0.01 / e.v));
    for (double w : {0.03, 0.1, 0.5, 2.0})
      CHECK(acceleration_spectrum(p, w).real_part / (w * bessel_k(K1, e.b * w / e.v)) == Approx(r0).epsilon(1e-13));
  }

  TEST_CASE("dd with theta0 = pi/2 vanishes") {
    auto p = full(Channel::DD);
    p.encounter.theta0 = pi / 2;
    for (double w : {0.01, 0.1, 1.0}) CHECK(acceleration_spectrum(p, w).norm() == 0.0);
    CHECK(periodogram_check(p, 4000 * p.encounter.b / p.encounter.v, 1.0) == 0.0);
  }

  TEST_CASE("cc psd against composed Bessel values") {
    // the full-line transform is twice the half-line cosine integral, so the PSD carries a factor 4
    auto p = full(Channel::CC, 0.0);
    p.encounter.v = 1e-6;
    p.encounter.T = 100.0;
    const double w = 2 * pi / 3.0, q = constants::e, m = 1e-15, v = 1e-6, eps0 = constants::epsilon0;
    const double k = 1e-4 * w / v;
    const double k1 = bessel_k(K1, k), k0 = bessel_k(K0, k);
    const double formula = q * q * q * q * w * w / (16 * pi * pi * 100.0 * m * m * v * v * v * v * eps0 * eps0) *
                           (k1 * k1 + k0 * k0);
    CHECK(encounter_psd(p, w) == Approx(4 * formula).epsilon(1e-12));
  }

  TEST_CASE("psd scaling and decay") {
    auto p = full(Channel::CC);
    auto p2 = p;
    p2.interferometer.q_int *= 2;
    CHECK(encounter_psd(p2, 0.1) == Approx(4 * encounter_psd(p, 0.1)).epsilon(1e-14));
    CHECK(encounter_psd(p, 50 * 0.1) < 1e-30 * encounter_psd(p, 0.1));
  }

  TEST_CASE("fft of sampled acceleration") {
    auto p = full(Channel::CC, 0.0);
    p.encounter.beta = pi / 2;
    CHECK(periodogram_check(p, 100 * p.encounter.b / p.encounter.v, 0.05) <= 1e-3);
    for (auto c : kAll) {
      auto q = full(c, pi / 5);
      CHECK(periodogram_check(q, 4000 * q.encounter.b / q.encounter.v, 0.5) <= 1e-3);
    }
  }

  TEST_CASE("angle-averaged spectra against a grid average") {
    const int n = 16;
    const double h = 2 * pi / n;
    for (auto c : kAll) {
      auto p = full(c);
      const auto& e = p.encounter;
      const double w = 0.07;
      double sum = 0.0;
      long count = 0;
      const bool four = c == Channel::DpC;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < (four ? n : 1); ++k)
            for (int l = 0; l < (four ? n : 1); ++l) {
              p.encounter.alpha = h * (i + 0.5);
              p.encounter.beta = h * (j + 0.5);
              if (four) {
                p.encounter.theta0 = h * (k + 0.5);
                p.encounter.gamma = h * (l + 0.5);
              }
              if (c == Channel::DD) p.encounter.theta0 = std::acos(std::abs(std::sin(p.encounter.alpha)));
              sum += acceleration_spectrum(p, w).norm();
              ++count;
            }
      const double avg = angle_averaged_spectrum_sq(c, p.interferometer, p.particle, e.b, e.v, w,
                                                    default_angle_model(c), 0.0, BesselMode::Exact);
      CHECK(avg == Approx(sum / count).epsilon(1e-10));
    }
  }

  TEST_CASE("dd angle models") {
    auto p = full(Channel::DD);
    const auto& e = p.encounter;
    const double w = 0.07;
    const double ind = angle_averaged_spectrum_sq(Channel::DD, p.interferometer, p.particle, e.b, e.v, w,
                                                  AngleModel::Independent, 0.0, BesselMode::Exact);
    const double fixed = angle_averaged_spectrum_sq(Channel::DD, p.interferometer, p.particle, e.b, e.v, w,
                                                    AngleModel::FixedTheta0, pi / 3, BesselMode::Exact);
    // <cos^2 theta0> = 1/2 for independent angles; fixed theta0 gives cos^2 = 1/4
    CHECK(fixed == Approx(0.5 * ind).epsilon(1e-14));
  }

  TEST_CASE("optimal projection angles") {
    auto near = [](double x, double y) { return std::abs(x - y) < 1e-6; };
    auto a = optimal_angles(Channel::CC, 10.0);
    CHECK((near(a.beta, 0.0) || near(a.beta, pi)));
    a = optimal_angles(Channel::CC, 0.1);
    CHECK((near(a.alpha, 0.0) || near(a.alpha, pi)));
    a = optimal_angles(Channel::CC, 1.0);
    CHECK(((near(a.alpha, 0.0) && near(a.beta, 0.0)) || (near(a.alpha, pi) && near(a.beta, pi))));
    a = optimal_angles(Channel::DD, 0.1);
    CHECK(std::abs(a.alpha - pi / 4) < 0.05);
    CHECK((near(a.beta, 0.0) || near(a.beta, pi)));
    CHECK_THROWS(optimal_angles(Channel::CC, 0.0));
  }

  TEST_CASE("angle map") {
    auto m = angle_map(Channel::CC, 1.0, 11, 2);
    REQUIRE(m.size() == 121);
    double mx = 0.0;
    for (double x : m) mx = std::max(mx, x);
    CHECK(mx == 1.0);
    CHECK(m[0] == 1.0);
    CHECK(angle_map(Channel::CC, 1.0, 11, 1) == m);
    CHECK_THROWS(angle_map(Channel::CC, 1.0, 1));
  }
}
