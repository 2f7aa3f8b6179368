#include <doctest.h>

#include <numbers>

#include "emdephase/config.hpp"

using namespace emd;
using doctest::Approx;

namespace {

ParamSet preset(const std::string& name) {
  ParamSet s;
  s.load_file(std::string(EMD_PRESET_DIR) + "/" + name + ".ini");
  return s;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("quantities with units") {
    CHECK(parse_quantity("20um") == Approx(20e-6));
    CHECK(parse_quantity("1e") == constants::e);
    CHECK(parse_quantity("10e") == Approx(10 * constants::e));
    CHECK(parse_quantity("0.1 e_um") == Approx(0.1 * constants::e_um));
    CHECK(parse_quantity("0.1mK") == Approx(1e-4));
    CHECK(parse_quantity("1us") == Approx(1e-6));
    CHECK(parse_quantity("pi/2") == std::numbers::pi / 2);
    CHECK(parse_quantity("90deg") == Approx(std::numbers::pi / 2));
    CHECK(parse_quantity("1e4 cm^-3") == Approx(1e10));
    CHECK(parse_quantity("3.5") == 3.5);
    CHECK_THROWS(parse_quantity("abc"));
    CHECK_THROWS(parse_quantity("1 parsec"));
    CHECK(format_number(0.1) == "0.10000000000000001");
  }

  TEST_CASE("keys and dimensions") {
    ParamSet s;
    CHECK(s.has("encounter.b"));
    CHECK_FALSE(s.has("encounter.c"));
    CHECK_THROWS_WITH_AS(s.set("encounter.c", "1"), doctest::Contains("unknown configuration key"), Error);
    CHECK_THROWS_WITH_AS(s.set("interferometer.dx", "1 s"), doctest::Contains("is not a length"), Error);
    CHECK_THROWS(s.set("run.exact_bessel", "maybe"));
    CHECK_THROWS(s.set("sweep.points", "2.5"));
    s.set("interferometer.dx", "5 um");
    CHECK(s.number("interferometer.dx") == Approx(5e-6));
    CHECK(s.is_auto("encounter.T"));
    CHECK_THROWS(s.number("encounter.T"));
  }

  TEST_CASE("derived structures") {
    ParamSet s;
    s.set("encounter.b", "100um");
    s.set("encounter.v", "2e-5");
    CHECK(s.encounter(s.interferometer()).T == Approx(5.0));
    s.set("encounter.T", "7");
    CHECK(s.encounter(s.interferometer()).T == 7.0);
    s.set("interferometer.tau", "1us");
    CHECK(s.interferometer().t_a == Approx(1e-6 / 6));
    CHECK(s.interferometer().tau() == Approx(1e-6));
    s.set("run.tolerance", "1e-8");
    CHECK(s.quadrature().relative_tolerance == 1e-8);
    s.set("gas.angle_model", "fixed");
    s.set("gas.theta0", "pi/3");
    auto o = s.ensemble_options(Channel::DD);
    CHECK(o.angles == AngleModel::FixedTheta0);
    CHECK_FALSE(o.angles_from_channel);
    CHECK(o.theta0 == Approx(std::numbers::pi / 3));
    s.set("gas.angle_model", "bogus");
    CHECK_THROWS(s.ensemble_options(Channel::DD));
  }

  TEST_CASE("sweep grids") {
    ParamSet s;
    s.set("sweep.min", "1");
    s.set("sweep.max", "100");
    s.set("sweep.points", "3");
    auto g = s.sweep_grid();
    REQUIRE(g.size() == 3);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == Approx(10.0));
    CHECK(g[2] == Approx(100.0));
    s.set("sweep.scale", "linear");
    CHECK(s.sweep_grid()[1] == Approx(50.5));
    s.set("sweep.values", "1um, 2um,3um");
    CHECK(s.sweep_grid() == std::vector<double>{1e-6, 2e-6, 3e-6});
    s.set("sweep.values", "");
    s.set("sweep.points", "0");
    CHECK(s.sweep_grid().empty());
  }

  TEST_CASE("ini loading") {
    ParamSet s;
    s.load_string("[encounter]\nb = 30um\n; comment\n[run]\nchannel = dd\n");
    CHECK(s.number("encounter.b") == Approx(30e-6));
    CHECK(s.channel() == Channel::DD);
    CHECK_THROWS_WITH_AS(s.load_string("b = 1\n"), doctest::Contains("inside a section"), Error);
    CHECK_THROWS_WITH_AS(s.load_string("[encounter]\nq = 1\n"), doctest::Contains("unknown configuration key"), Error);
    try {
      s.load_file("/nonexistent/file.ini");
      FAIL("expected an io error");
    } catch (const Error& e) {
      CHECK(e.code() == Status::Io);
    }
  }

  TEST_CASE("dump round trip") {
    auto s = preset("fig4d");
    const std::string d = s.dump();
    CHECK(d.find("[manifest]") == std::string::npos);
    ParamSet t;
    t.load_string(d);
    CHECK(t.dump() == d);
    t.set("manifest.command", "sweep");
    CHECK(t.dump().rfind("[manifest]\ncommand = sweep\n", 0) == 0);
  }

  TEST_CASE("per-channel angle overrides") {
    auto s = preset("fig4d");
    const double q = std::numbers::pi / 4;
    auto dpc = s.channel_params(Channel::DpC).encounter;
    CHECK(dpc.alpha == q);
    CHECK(dpc.beta == q);
    CHECK(dpc.theta0 == q);
    CHECK(dpc.gamma == q);
    auto dd = s.channel_params(Channel::DD).encounter;
    CHECK(dd.alpha == q);
    CHECK(dd.beta == 0.0);
    CHECK(dd.theta0 == q);
    auto dic = s.channel_params(Channel::DiC).encounter;
    CHECK(dic.alpha == 0.0);
    CHECK(dic.beta == 0.0);
  }

  TEST_CASE("figure presets load") {
    for (const char* name : {"fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig4c", "fig4d", "fig5", "fig6"}) {
      CAPTURE(name);
      auto s = preset(name);
      CHECK_FALSE(s.sweep_grid().empty());
    }
  }

  TEST_CASE("qgem preset values") {
    auto s = preset("fig5");
    auto c = s.interferometer();
    CHECK(s.number("gas.L") == 0.01);
    CHECK(s.number("gas.T_gas") == Approx(1e-4));
    CHECK(c.tau() == Approx(1.0));
    CHECK(c.dx == Approx(10e-6));
    CHECK(c.d_int == Approx(0.1 * constants::e_um));
    CHECK(s.particle().d_ext == 6.17e-30);
    CHECK(s.sweep_grid().front() == 1e8);
    CHECK(s.sweep_grid().back() == Approx(1e14));
  }

  TEST_CASE("cnot preset values") {
    auto s = preset("fig6");
    auto c = s.interferometer();
    CHECK(c.mass == 1e-27);
    CHECK(c.q_int == constants::e);
    CHECK(s.particle().q_ext == Approx(10 * constants::e));
    CHECK(c.tau() == Approx(1e-6));
    CHECK(c.dx == Approx(0.18e-6));
    CHECK(s.number("gas.b_min") == 1e-7);
    CHECK(s.sweep_grid().front() == 1e4);
    CHECK(s.sweep_grid().back() == Approx(1e10));
  }
}
