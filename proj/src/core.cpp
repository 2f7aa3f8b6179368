#include "emdephase/core.hpp"

#include <cmath>

namespace emd {

namespace {
void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) invalid(std::string(name) + " must be finite");
}
}  // namespace

void InterferometerConfig::validate() const {
  for (auto [x, n] : {std::pair{mass, "mass"}, {dx, "dx"}, {t_a, "t_a"}, {t_e, "t_e"},
                      {q_int, "q_int"}, {d_int, "d_int"}, {radius, "radius"}, {eps_r, "eps_r"}})
    require_finite(x, n);
  if (mass <= 0) invalid("mass must be positive");
  if (dx <= 0) invalid("dx must be positive");
  if (t_a <= 0) invalid("t_a must be positive");
  if (t_e < 0) invalid("t_e must be non-negative");
  if (radius <= 0) invalid("radius must be positive");
  if (q_int < 0 || d_int < 0) invalid("charges and dipoles are stored unsigned");
}

void EnvironmentParticle::validate() const {
  for (auto [x, n] : {std::pair{q_ext, "q_ext"}, {d_ext, "d_ext"}, {alpha_pol, "alpha_pol"},
                      {m_gas, "m_gas"}})
    require_finite(x, n);
  if (q_ext < 0 || d_ext < 0 || alpha_pol < 0)
    invalid("charges, dipoles and polarizability are stored unsigned");
  if (m_gas <= 0) invalid("m_gas must be positive");
}

void Encounter::validate() const {
  for (auto [x, n] : {std::pair{b, "b"}, {v, "v"}, {alpha, "alpha"}, {beta, "beta"},
                      {theta0, "theta0"}, {gamma, "gamma"}, {T, "T"}})
    require_finite(x, n);
  if (b <= 0) invalid("impact parameter must be positive");
  if (v <= 0) invalid("speed must be positive");
  if (T <= 0) invalid("averaging time T must be positive");
}

const char* channel_tag(Channel c) {
  switch (c) {
    case Channel::CC: return "cc";
    case Channel::CDp: return "cdp";
    case Channel::CDi: return "cdi";
    case Channel::DpC: return "dpc";
    case Channel::DiC: return "dic";
    case Channel::DD: return "dd";
  }
  return "?";
}

Channel parse_channel(const std::string& tag) {
  if (tag == "cc") return Channel::CC;
  if (tag == "cdp") return Channel::CDp;
  if (tag == "cdi") return Channel::CDi;
  if (tag == "dpc") return Channel::DpC;
  if (tag == "dic") return Channel::DiC;
  if (tag == "dd") return Channel::DD;
  invalid("unknown channel '" + tag + "' (expected cc, cdp, cdi, dpc, dic, dd)");
}

void check_compatible(Channel c, const InterferometerConfig& cfg, const EnvironmentParticle& p) {
  switch (c) {
    case Channel::CC:
      if (cfg.q_int == 0) invalid("channel cc requires q_int != 0");
      if (p.q_ext == 0) invalid("channel cc requires q_ext != 0");
      break;
    case Channel::CDp:
      if (cfg.q_int == 0) invalid("channel cdp requires q_int != 0");
      if (p.d_ext == 0) invalid("channel cdp requires d_ext != 0");
      break;
    case Channel::CDi:
      if (cfg.q_int == 0) invalid("channel cdi requires q_int != 0");
      if (p.alpha_pol == 0) invalid("channel cdi requires alpha_pol != 0");
      break;
    case Channel::DpC:
      if (cfg.d_int == 0) invalid("channel dpc requires d_int != 0");
      if (p.q_ext == 0) invalid("channel dpc requires q_ext != 0");
      break;
    case Channel::DiC:
      if (!(cfg.eps_r > 1)) invalid("channel dic requires eps_r > 1");
      if (p.q_ext == 0) invalid("channel dic requires q_ext != 0");
      break;
    case Channel::DD:
      if (cfg.d_int == 0) invalid("channel dd requires d_int != 0");
      if (p.d_ext == 0) invalid("channel dd requires d_ext != 0");
      break;
  }
}

double distance(double b, double v, double t) {
  if (!std::isfinite(b) || !std::isfinite(v) || !std::isfinite(t))
    invalid("distance: non-finite input");
  if (b <= 0) invalid("distance: b must be positive");
  if (v < 0) invalid("distance: v must be non-negative");
  return std::hypot(b, v * t);
}

double tau(const InterferometerConfig& cfg) {
  cfg.validate();
  return cfg.tau();
}

}  // namespace emd
