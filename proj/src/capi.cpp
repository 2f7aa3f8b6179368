#include "emdephase/emdephase.h"

#include <cstring>
#include <new>
#include <string>

#include "emdephase/config.hpp"

struct emd_params {
  emd::ParamSet set;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
emd_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return EMD_OK;
  } catch (const emd::Error& e) {
    g_last_error = e.what();
    return static_cast<emd_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EMD_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EMD_INTERNAL;
  }
}

void need(const void* ptr, const char* what) {
  if (!ptr) emd::invalid(std::string(what) + " must not be null");
}

void copy_out(const std::string& s, char* buf, size_t len, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf && len > 0) {
    const size_t n = std::min(len - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
}

void copy_list(const std::vector<double>& v, double* buf, size_t len, size_t* needed) {
  if (needed) *needed = v.size();
  if (buf)
    for (size_t i = 0; i < std::min(len, v.size()); ++i) buf[i] = v[i];
}

void fill(const emd::DephasingResult& r, double dominant, emd_dephasing_result* out) {
  out->gamma_n = r.gamma_n;
  out->estimated_error = r.estimated_error;
  out->omega_min = r.omega_min;
  out->omega_max = r.omega_max;
  out->dominant_mode = dominant;
  out->panels = r.panels;
  out->warnings = r.warnings;
}

// Records the partial value of a non-converged integral before rethrowing.
template <class Fn>
void with_partial(double* gamma, double* err, Fn&& fn) {
  try {
    fn();
  } catch (const emd::Error& e) {
    if (e.code() == emd::Status::NonConvergence) {
      *gamma = e.partial();
      *err = e.achieved_error();
    }
    throw;
  }
}

}  // namespace

extern "C" {

const char* emd_version(void) { return "1.0.0"; }

const char* emd_last_error(void) { return g_last_error.c_str(); }

emd_status emd_params_create(emd_params** out) {
  return guarded([&] {
    need(out, "out");
    *out = new emd_params();
  });
}

void emd_params_destroy(emd_params* p) { delete p; }

emd_status emd_params_load(emd_params* p, const char* path) {
  return guarded([&] {
    need(p, "params");
    need(path, "path");
    p->set.load_file(path);
  });
}

emd_status emd_params_load_string(emd_params* p, const char* ini) {
  return guarded([&] {
    need(p, "params");
    need(ini, "ini");
    p->set.load_string(ini);
  });
}

emd_status emd_params_set(emd_params* p, const char* key, const char* value) {
  return guarded([&] {
    need(p, "params");
    need(key, "key");
    need(value, "value");
    p->set.set(key, value);
  });
}

emd_status emd_params_get_number(const emd_params* p, const char* key, double* out) {
  return guarded([&] {
    need(p, "params");
    need(key, "key");
    need(out, "out");
    *out = p->set.number(key);
  });
}

emd_status emd_params_get_string(const emd_params* p, const char* key, char* buf, size_t len,
                                 size_t* needed) {
  return guarded([&] {
    need(p, "params");
    need(key, "key");
    copy_out(p->set.raw(key), buf, len, needed);
  });
}

emd_status emd_params_dump(const emd_params* p, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    need(p, "params");
    copy_out(p->set.dump(), buf, len, needed);
  });
}

emd_status emd_params_sweep_grid(const emd_params* p, double* buf, size_t len, size_t* needed) {
  return guarded([&] {
    need(p, "params");
    copy_list(p->set.sweep_grid(), buf, len, needed);
  });
}

emd_status emd_params_number_list(const emd_params* p, const char* key, double* buf, size_t len,
                                  size_t* needed) {
  return guarded([&] {
    need(p, "params");
    need(key, "key");
    copy_list(p->set.number_list(key), buf, len, needed);
  });
}

emd_status emd_dephasing(const emd_params* p, emd_dephasing_result* out) {
  return guarded([&] {
    need(p, "params");
    need(out, "out");
    *out = {};
    const auto cp = p->set.channel_params();
    with_partial(&out->gamma_n, &out->estimated_error, [&] {
      auto r = emd::dephasing(cp, p->set.quadrature());
      fill(r, emd::dominant_mode_dephasing(cp), out);
    });
  });
}

emd_status emd_sweep(const emd_params* p, const char* channel, const char* var, const double* grid,
                     size_t n, int threads, emd_dephasing_result* out) {
  return guarded([&] {
    need(p, "params");
    need(var, "var");
    if (n == 0) emd::invalid("sweep grid is empty");
    need(grid, "grid");
    need(out, "out");
    auto cp = channel ? p->set.channel_params(emd::parse_channel(channel)) : p->set.channel_params();
    const auto v = emd::parse_sweep_var(var);
    const bool t_auto = p->set.encounter_t_auto();
    const std::vector<double> g(grid, grid + n);
    auto rows = emd::dephasing_trend(cp, v, g, t_auto, p->set.quadrature(), threads);
    for (size_t i = 0; i < n; ++i)
      fill(rows[i].second, emd::dominant_mode_dephasing(emd::with_sweep_value(cp, v, g[i], t_auto)),
           &out[i]);
  });
}

emd_status emd_ensemble(const emd_params* p, const char* pipeline, double n_v, emd_ensemble_result* out) {
  return guarded([&] {
    need(p, "params");
    need(pipeline, "pipeline");
    need(out, "out");
    *out = {};
    const auto& s = p->set;
    const auto gas = s.gas(n_v);
    const auto cfg = s.interferometer();
    const auto part = s.particle();
    const bool exact = s.flag("run.exact_bessel");
    const std::string name = pipeline;
    emd::EnsembleResult r;
    with_partial(&out->gamma_n, &out->estimated_error, [&] {
      if (name == "qgem") {
        r = emd::qgem_ensemble_dephasing(gas, cfg, part, exact, s.channel());
      } else if (name == "cnot") {
        r = emd::cnot_ensemble_dephasing(gas, cfg, part, exact, s.quadrature());
      } else {
        const auto c = emd::parse_channel(name);
        const std::string& dm = s.raw("gas.dominant_mode");
        if (dm != "auto" && dm != "true" && dm != "false")
          emd::invalid("gas.dominant_mode must be auto, true or false");
        r = emd::ensemble_dephasing(c, gas, cfg, part, s.ensemble_options(c), dm == "true",
                                    s.quadrature());
      }
    });
    out->gamma_n = r.gamma_n;
    out->estimated_error = r.estimated_error;
    out->omega_min = r.omega_min;
    out->omega_max = r.omega_max;
    out->u_min = r.u_min;
    out->u_max = r.u_max;
    out->warnings = r.warnings;
  });
}

emd_status emd_entangling_phases(const emd_params* p, emd_phases* out) {
  return guarded([&] {
    need(p, "params");
    need(out, "out");
    const auto& s = p->set;
    const auto cfg = s.interferometer();
    const double d = s.number("witness.d");
    emd::EntanglementPhases ph;
    if (emd::parse_coupling(s.raw("witness.coupling")) == emd::Coupling::Gravitational) {
      const double m = s.is_auto("witness.mass") ? cfg.mass : s.number("witness.mass");
      ph = emd::gravitational_phases(m, d, cfg);
    } else {
      ph = emd::coulomb_phases(s.number("witness.q1"), s.number("witness.q2"), d, cfg);
    }
    out->phi = ph.phi;
    out->delta_phi = ph.delta_phi;
  });
}

emd_status emd_witness(double delta_phi, double gamma_n, emd_witness_result* out) {
  return guarded([&] {
    need(out, "out");
    auto d = emd::detectable(delta_phi, gamma_n);
    out->witness = d.witness;
    out->margin = d.margin;
    out->detectable = d.detectable ? 1 : 0;
    out->threshold_rule = d.threshold_rule ? 1 : 0;
  });
}

emd_status emd_angle_map(const char* channel, double u, int grid, int threads, double* out) {
  return guarded([&] {
    need(channel, "channel");
    need(out, "out");
    auto m = emd::angle_map(emd::parse_channel(channel), u, grid, threads);
    std::copy(m.begin(), m.end(), out);
  });
}

emd_status emd_optimal_angles(const char* channel, double u, emd_angles* out) {
  return guarded([&] {
    need(channel, "channel");
    need(out, "out");
    auto a = emd::optimal_angles(emd::parse_channel(channel), u);
    *out = {a.alpha, a.beta, a.theta0, a.gamma, a.value};
  });
}

emd_status emd_oracle_mc(const emd_params* p, uint64_t realizations, uint64_t seed, int threads,
                         emd_mc_result* out) {
  return guarded([&] {
    need(p, "params");
    need(out, "out");
    auto r = emd::phase_noise_mc(p->set.channel_params(), realizations, seed, threads,
                                 p->set.oracle_settings());
    *out = {r.variance, r.std_error, r.mean, r.mean_std_error, r.dt, r.realizations};
  });
}

emd_status emd_periodogram_check(const emd_params* p, double record_length, double dt,
                                 double* max_deviation) {
  return guarded([&] {
    need(p, "params");
    need(max_deviation, "max_deviation");
    *max_deviation = emd::periodogram_check(p->set.channel_params(), record_length, dt);
  });
}

}  // extern "C"
