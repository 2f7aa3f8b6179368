#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <numbers>

#include "emdephase/oracle.hpp"
#include "emdephase/trajectory.hpp"

using namespace emd;
using doctest::Approx;

namespace {

ChannelParams fig3a() {
  ChannelParams p;
  p.channel = Channel::CC;
  p.interferometer.q_int = constants::e;
  p.particle.q_ext = constants::e;
  p.encounter.b = 1e-4;
  p.encounter.v = 1e-5;
  p.encounter.T = 10.0;
  return p;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("phase of one encounter against adaptive quadrature") {
    auto p = fig3a();
    p.encounter.beta = 0.4;
    const auto& c = p.interferometer;
    for (double t0 : {-4.0, 1.3, 7.0}) {
      const double bd[] = {0.0, c.t_a, 2 * c.t_a, 2 * c.t_a + c.t_e, 3 * c.t_a + c.t_e, c.tau()};
      double s = 0;
      for (int i = 0; i < 5; ++i)
        s += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double t) { return acceleration_time(p, t - t0) * arm_separation(c, t); }, bd[i], bd[i + 1], 10, 1e-12);
      CHECK(phase_of_encounter(p, t0) == Approx(s * c.mass / constants::hbar).epsilon(2e-3));
    }
  }

  TEST_CASE("zero projections give zero variance") {
    auto p = fig3a();
    p.encounter.alpha = p.encounter.beta = std::numbers::pi / 2;
    const auto r = phase_noise_mc(p, 500, 3, 2);
    CHECK(r.variance == 0.0);
    CHECK(r.mean == 0.0);
  }

  TEST_CASE("variance scales with the coupling squared at fixed seed") {
    auto p = fig3a();
    auto q = p;
    q.interferometer.q_int *= 2;
    const auto a = phase_noise_mc(p, 1000, 11, 4);
    const auto b = phase_noise_mc(q, 1000, 11, 4);
    CHECK(b.variance == Approx(4 * a.variance).epsilon(1e-12));
  }

  TEST_CASE("worker count does not change the result") {
    auto p = fig3a();
    const auto a = phase_noise_mc(p, 1000, 5, 1);
    const auto b = phase_noise_mc(p, 1000, 5, 8);
    CHECK(a.variance == b.variance);
    CHECK(a.std_error == b.std_error);
    CHECK(a.mean == b.mean);
    const auto c = phase_noise_mc(p, 1000, 6, 1);
    CHECK(c.variance != a.variance);
  }

  TEST_CASE("monte carlo second moment against the full-band integral") {
    auto p = fig3a();
    OracleSettings s;
    s.t0_window = 10 * p.encounter.b / p.encounter.v;
    const auto r = phase_noise_mc(p, 4000, 1, 8, s);
    const double m2 = r.variance + r.mean * r.mean;
    CHECK(std::abs(m2 - full_band_variance(p, s.t0_window)) <= 3 * r.std_error);
  }

  TEST_CASE("input checks") {
    auto p = fig3a();
    OracleSettings s;
    s.dt = 0.1;
    CHECK_THROWS_WITH_AS(phase_noise_mc(p, 200, 1, 1, s), "undersampled dt: need dt <= min(t_a/100, b/(100 v))", Error);
    CHECK_THROWS(phase_noise_mc(p, 10, 1, 1));
    CHECK_THROWS_WITH_AS(periodogram_check(p, 10 * p.encounter.b / p.encounter.v, 0.1),
                         doctest::Contains("record too short"), Error);
    s = {};
    s.max_refinements = 1;
    s.refine_tolerance = 1e-15;
    CHECK_THROWS_AS(phase_of_encounter(p, 1.0, s), Error);
  }

  TEST_CASE("periodogram converges with the record length") {
    auto p = fig3a();
    p.encounter.beta = 0.5;
    const double unit = p.encounter.b / p.encounter.v;
    double prev = periodogram_check(p, 100 * unit, 0.2 * unit);
    for (double rec : {200.0, 400.0, 800.0, 1600.0}) {
      const double cur = periodogram_check(p, rec * unit, 0.2 * unit);
      CHECK(cur < prev);
      prev = cur;
    }
    CHECK(prev <= 1e-3);
  }

  TEST_CASE("gas monte carlo") {
    GasEnsemble g = GasEnsemble::from_density(1e10, 0.01);
    g.temperature = 1e-4;
    g.b_min = 1e-6;
    InterferometerConfig c;
    c.dx = 10e-6;
    c.t_a = 1.0 / 6;
    c.t_e = 1.0 / 3;
    c.d_int = 0.1 * constants::e_um;
    EnvironmentParticle part;
    part.d_ext = 6.17e-30;
    EnsembleOptions o;
    const auto a = phase_noise_mc_gas(Channel::DD, g, c, part, o, 300, 2, 1);
    const auto b = phase_noise_mc_gas(Channel::DD, g, c, part, o, 300, 2, 4);
    CHECK(a.variance == b.variance);
    CHECK(a.variance > 0);
    OracleSettings s;
    s.dt = 1e-3;
    CHECK_THROWS(phase_noise_mc_gas(Channel::DD, g, c, part, o, 300, 2, 1, s));
  }
}
