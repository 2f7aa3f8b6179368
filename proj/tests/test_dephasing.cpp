#include <doctest.h>

#include <cmath>
#include <numbers>

#include "emdephase/dephasing.hpp"
#include "emdephase/trajectory.hpp"

using namespace emd;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

ChannelParams fig3a(double v = 1e-5) {
  ChannelParams p;
  p.channel = Channel::CC;
  p.interferometer.q_int = constants::e;
  p.particle.q_ext = constants::e;
  p.encounter.b = 1e-4;
  p.encounter.v = v;
  p.encounter.T = p.encounter.b / v;
  return p;
}

}  // namespace

TEST_SUITE("dephasing") {
  TEST_CASE("zero projections give zero") {
    auto p = fig3a();
    p.encounter.alpha = p.encounter.beta = pi / 2;
    CHECK(dephasing(p).gamma_n == 0.0);
    CHECK(dominant_mode_dephasing(p) == 0.0);
  }

  TEST_CASE("coupling and width scaling") {
    auto p = fig3a();
    auto q = p;
    q.interferometer.q_int *= 2;
    CHECK(dephasing(q).gamma_n == Approx(4 * dephasing(p).gamma_n).epsilon(1e-6));
    auto r = p;
    r.interferometer.dx *= 2;
    CHECK(dephasing(r).gamma_n == Approx(4 * dephasing(p).gamma_n).epsilon(1e-6));
    CHECK(dominant_mode_dephasing(r) == Approx(4 * dominant_mode_dephasing(p)).epsilon(1e-13));
  }

  TEST_CASE("fig3a point against a brute trapezoid") {
    auto p = fig3a();
    const auto r = dephasing(p);
    CHECK(r.gamma_n > 0);
    CHECK(r.estimated_error <= 1e-6 * r.gamma_n);
    const auto& c = p.interferometer;
    const double mh = c.mass / constants::hbar;
    const double lo = c.omega_min(), hi = 60 * p.encounter.v / p.encounter.b;
    const long n = 1000000;
    const double h = (hi - lo) / n;
    double s = 0.0;
    for (long j = 0; j <= n; ++j) {
      const double w = lo + h * j;
      const double f = encounter_psd(p, w) * transfer_function(c, w);
      s += (j == 0 || j == n) ? 0.5 * f : f;
    }
    const double brute = mh * mh / (2 * pi) * s * h;
    CHECK(r.gamma_n == Approx(brute).epsilon(1e-4));
  }

  TEST_CASE("dominant mode follows the Laplace estimate for a sharply peaked psd") {
    // S ~ exp(-2 b w / v) so int_{w_min} S F dw ~ S F v/(2b) and the ratio tends to 2 b w_min / v
    auto p = fig3a(1e-6);
    const double full = dephasing(p).gamma_n;
    const double k = p.encounter.b * p.interferometer.omega_min() / p.encounter.v;
    CHECK(dominant_mode_dephasing(p) / full == Approx(2 * k).epsilon(0.05));
  }

  TEST_CASE("warnings") {
    auto p = fig3a();
    CHECK(dephasing(p).warnings == 0);
    p.encounter.T = 1.0;
    CHECK((dephasing(p).warnings & kWarnShortAveraging));
    p = fig3a(1e-4);
    CHECK((dephasing(p).warnings & kWarnOutsideValidity));
  }

  TEST_CASE("settings validation and non-convergence") {
    QuadratureSettings q;
    q.relative_tolerance = 0.5;
    CHECK_THROWS_AS(dephasing(fig3a(), q), Error);
    q = {};
    q.max_subdivisions = 1;
    try {
      dephasing(fig3a(), q);
      FAIL("expected non-convergence");
    } catch (const Error& e) {
      CHECK(e.code() == Status::NonConvergence);
    }
    // a wide spectrum (b/v < tau) keeps the tail bound open past the panel budget
    q.cutoff_k = 1.0;
    q.max_subdivisions = 2;
    try {
      dephasing(fig3a(1e-4), q);
      FAIL("expected non-convergence");
    } catch (const Error& e) {
      CHECK(e.code() == Status::NonConvergence);
      CHECK(e.partial() > 0);
      CHECK(e.achieved_error() >= 0);
    }
  }

  TEST_CASE("sweeps") {
    auto p = fig3a();
    const std::vector<double> grid = {1e-6, 3e-6, 1e-5, 3e-5};
    auto a = dephasing_trend(p, SweepVar::V, grid, true, {}, 1);
    auto b = dephasing_trend(p, SweepVar::V, grid, true, {}, 4);
    for (size_t i = 0; i < grid.size(); ++i) {
      CHECK(a[i].first == grid[i]);
      CHECK(a[i].second.gamma_n == b[i].second.gamma_n);
      if (i > 0) CHECK(a[i].second.gamma_n > a[i - 1].second.gamma_n);
    }
    CHECK(with_sweep_value(p, SweepVar::B, 2e-4, true).encounter.T == Approx(20.0));
    CHECK(with_sweep_value(p, SweepVar::B, 2e-4, false).encounter.T == p.encounter.T);
    CHECK_THROWS(dephasing_trend(p, SweepVar::V, {}, true));
    CHECK(parse_sweep_var("dx") == SweepVar::Dx);
    CHECK_THROWS(parse_sweep_var("w"));
  }
}
