#include <doctest.h>

#include <string>
#include <vector>

#include "emdephase/config.hpp"
#include "emdephase/emdephase.h"

namespace {

struct Handle {
  emd_params* p = nullptr;
  Handle() { REQUIRE(emd_params_create(&p) == EMD_OK); }
  ~Handle() { emd_params_destroy(p); }
};

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("status codes and messages") {
    Handle h;
    CHECK(std::string(emd_version()).size() > 0);
    CHECK(emd_params_set(h.p, "encounter.v", "0") == EMD_OK);
    emd_dephasing_result r{};
    CHECK(emd_params_set(h.p, "interferometer.q_int", "1e") == EMD_OK);
    CHECK(emd_params_set(h.p, "particle.q_ext", "1e") == EMD_OK);
    CHECK(emd_dephasing(h.p, &r) == EMD_INVALID_INPUT);
    CHECK(std::string(emd_last_error()) == "speed must be positive");
    CHECK(emd_params_set(h.p, "nope.key", "1") == EMD_INVALID_INPUT);
    CHECK(emd_params_load(h.p, "/nonexistent.ini") == EMD_IO);
    CHECK(emd_dephasing(nullptr, &r) == EMD_INVALID_INPUT);
    CHECK(emd_params_create(nullptr) == EMD_INVALID_INPUT);
    CHECK(emd_params_set(h.p, "encounter.v", "1e-5") == EMD_OK);
    CHECK(emd_dephasing(h.p, &r) == EMD_OK);
    CHECK(std::string(emd_last_error()).empty());
  }

  TEST_CASE("non-convergence reports the partial value") {
    Handle h;
    emd_params_set(h.p, "interferometer.q_int", "1e");
    emd_params_set(h.p, "particle.q_ext", "1e");
    emd_params_set(h.p, "run.tolerance", "1e-15");
    emd_dephasing_result r{};
    const auto st = emd_dephasing(h.p, &r);
    if (st == EMD_NON_CONVERGENCE) CHECK(r.gamma_n > 0);
    else CHECK(st == EMD_OK);
  }

  TEST_CASE("results match the C++ layer") {
    Handle h;
    emd_params_set(h.p, "interferometer.q_int", "1e");
    emd_params_set(h.p, "particle.q_ext", "1e");
    emd::ParamSet s;
    s.set("interferometer.q_int", "1e");
    s.set("particle.q_ext", "1e");
    emd_dephasing_result r{};
    REQUIRE(emd_dephasing(h.p, &r) == EMD_OK);
    const auto ref = emd::dephasing(s.channel_params(), s.quadrature());
    CHECK(r.gamma_n == ref.gamma_n);
    CHECK(r.panels == ref.panels);
    CHECK(r.dominant_mode == emd::dominant_mode_dephasing(s.channel_params()));

    const double grid[] = {1e-5, 2e-5};
    emd_dephasing_result rows[2];
    REQUIRE(emd_sweep(h.p, "cc", "v", grid, 2, 2, rows) == EMD_OK);
    CHECK(rows[0].gamma_n == ref.gamma_n);
    CHECK(rows[1].gamma_n > rows[0].gamma_n);
    CHECK(emd_sweep(h.p, "cc", "v", grid, 0, 1, rows) == EMD_INVALID_INPUT);
    CHECK(emd_sweep(h.p, "cc", "w", grid, 2, 1, rows) == EMD_INVALID_INPUT);
  }

  TEST_CASE("string and list accessors") {
    Handle h;
    emd_params_set(h.p, "run.channel", "dd");
    size_t need = 0;
    REQUIRE(emd_params_get_string(h.p, "run.channel", nullptr, 0, &need) == EMD_OK);
    CHECK(need == 3);
    char buf[8];
    REQUIRE(emd_params_get_string(h.p, "run.channel", buf, sizeof buf, nullptr) == EMD_OK);
    CHECK(std::string(buf) == "dd");
    char tiny[2];
    emd_params_get_string(h.p, "run.channel", tiny, sizeof tiny, nullptr);
    CHECK(std::string(tiny) == "d");

    REQUIRE(emd_params_dump(h.p, nullptr, 0, &need) == EMD_OK);
    std::vector<char> d(need);
    REQUIRE(emd_params_dump(h.p, d.data(), d.size(), nullptr) == EMD_OK);
    CHECK(std::string(d.data()).find("channel = dd") != std::string::npos);

    emd_params_set(h.p, "sweep.values", "1,2,3");
    double g[3];
    REQUIRE(emd_params_sweep_grid(h.p, g, 3, &need) == EMD_OK);
    CHECK(need == 3);
    CHECK(g[2] == 3.0);
    double x = 0;
    REQUIRE(emd_params_get_number(h.p, "encounter.b", &x) == EMD_OK);
    CHECK(x == 1e-4);
    CHECK(emd_params_get_number(h.p, "encounter.T", &x) == EMD_INVALID_INPUT);
  }

  TEST_CASE("pipelines and witness") {
    Handle h;
    REQUIRE(emd_params_load(h.p, EMD_PRESET_DIR "/fig5.ini") == EMD_OK);
    emd_ensemble_result a{}, b{};
    REQUIRE(emd_ensemble(h.p, "qgem", 1e10, &a) == EMD_OK);
    REQUIRE(emd_ensemble(h.p, "qgem", 2e10, &b) == EMD_OK);
    CHECK(b.gamma_n / a.gamma_n == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(emd_ensemble(h.p, "nonsense", 1e10, &a) == EMD_INVALID_INPUT);
    emd_phases ph{};
    REQUIRE(emd_entangling_phases(h.p, &ph) == EMD_OK);
    CHECK(ph.phi > 0);
    CHECK(ph.delta_phi < 0);
    emd_witness_result w{};
    REQUIRE(emd_witness(0.1, 0.0, &w) == EMD_OK);
    CHECK(w.detectable == 1);
    CHECK(emd_witness(0.1, -1.0, &w) == EMD_INVALID_INPUT);
    emd_angles ang{};
    REQUIRE(emd_optimal_angles("cc", 10.0, &ang) == EMD_OK);
    CHECK(ang.beta == doctest::Approx(0.0).scale(1.0));
    std::vector<double> map(9);
    CHECK(emd_angle_map("cc", 1.0, 3, 1, map.data()) == EMD_OK);
  }

  TEST_CASE("oracle entry points") {
    Handle h;
    emd_params_set(h.p, "interferometer.q_int", "1e");
    emd_params_set(h.p, "particle.q_ext", "1e");
    emd_mc_result r{};
    REQUIRE(emd_oracle_mc(h.p, 256, 1, 2, &r) == EMD_OK);
    CHECK(r.realizations == 256);
    CHECK(r.variance > 0);
    double dev = -1;
    REQUIRE(emd_periodogram_check(h.p, 4000 * 10.0, 1.0, &dev) == EMD_OK);
    CHECK(dev <= 1e-3);
    CHECK(emd_periodogram_check(h.p, 10.0, 1.0, &dev) == EMD_INVALID_INPUT);
  }
}
