#include "emdephase/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iterator>
#include <numbers>
#include <sstream>

namespace emd {

namespace {

enum class Dim { Length, Time, Mass, Charge, Dipole, Temperature, Angle, Density, Plain, Any, Text, Bool, Int, NumberList, TextList };

struct KeySpec {
  std::string key;
  Dim dim;
  const char* fallback;
  bool allow_auto;
};

// Order here is the dump order.
const KeySpec kBaseKeys[] = {
    {"manifest.command", Dim::Text, "", false},
    {"manifest.version", Dim::Text, "", false},
    {"manifest.timestamp", Dim::Text, "", false},
    {"manifest.output", Dim::Text, "", false},
    {"run.channel", Dim::Text, "cc", false},
    {"run.format", Dim::Text, "csv", false},
    {"run.seed", Dim::Int, "1", false},
    {"run.tolerance", Dim::Plain, "1e-6", false},
    {"run.cutoff_k", Dim::Plain, "40", false},
    {"run.exact_bessel", Dim::Bool, "false", false},
    {"interferometer.mass", Dim::Mass, "1e-15", false},
    {"interferometer.dx", Dim::Length, "20e-6", false},
    {"interferometer.t_a", Dim::Time, "0.5", false},
    {"interferometer.t_e", Dim::Time, "1.0", false},
    {"interferometer.tau", Dim::Time, "auto", true},
    {"interferometer.q_int", Dim::Charge, "0", false},
    {"interferometer.d_int", Dim::Dipole, "0", false},
    {"interferometer.radius", Dim::Length, "1e-6", false},
    {"interferometer.eps_r", Dim::Plain, "5.7", false},
    {"particle.q_ext", Dim::Charge, "0", false},
    {"particle.d_ext", Dim::Dipole, "0", false},
    {"particle.alpha_pol", Dim::Any, "0", false},
    {"particle.m_gas", Dim::Mass, "4.8e-26", false},
    {"encounter.b", Dim::Length, "1e-4", false},
    {"encounter.v", Dim::Any, "1e-5", false},
    {"encounter.alpha", Dim::Angle, "0", false},
    {"encounter.beta", Dim::Angle, "0", false},
    {"encounter.theta0", Dim::Angle, "0", false},
    {"encounter.gamma", Dim::Angle, "0", false},
    {"encounter.T", Dim::Time, "auto", true},
    {"gas.n_v", Dim::Density, "0", false},
    {"gas.L", Dim::Length, "0.01", false},
    {"gas.T_gas", Dim::Temperature, "1e-4", false},
    {"gas.b_min", Dim::Length, "1e-6", false},
    {"gas.b_max", Dim::Length, "auto", true},
    {"gas.velocity", Dim::Text, "dirac", false},
    {"gas.angle_model", Dim::Text, "auto", false},
    {"gas.theta0", Dim::Angle, "0", false},
    {"gas.averaging_time", Dim::Time, "auto", true},
    {"gas.dominant_mode", Dim::Text, "auto", false},
    {"witness.coupling", Dim::Text, "gravitational", false},
    {"witness.d", Dim::Length, "450e-6", false},
    {"witness.mass", Dim::Mass, "auto", true},
    {"witness.q1", Dim::Charge, "1e", false},
    {"witness.q2", Dim::Charge, "1e", false},
    {"sweep.var", Dim::Text, "v", false},
    {"sweep.min", Dim::Any, "1e-6", false},
    {"sweep.max", Dim::Any, "3e-5", false},
    {"sweep.points", Dim::Int, "50", false},
    {"sweep.scale", Dim::Text, "log", false},
    {"sweep.values", Dim::NumberList, "", false},
    {"sweep.channels", Dim::TextList, "", false},
    {"angles.u", Dim::NumberList, "0.1,1,10", false},
    {"angles.grid", Dim::Int, "91", false},
    {"oracle.mode", Dim::Text, "mc", false},
    {"oracle.realizations", Dim::Int, "10000", false},
    {"oracle.t0_window", Dim::Time, "auto", true},
    {"oracle.window_factor", Dim::Plain, "50", false},
    {"oracle.dt", Dim::Time, "auto", true},
    {"oracle.record", Dim::Time, "auto", true},
    {"oracle.record_dt", Dim::Time, "auto", true},
};

// Base keys plus per-channel angle overrides angles.<tag>.<angle>.
const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> t;
    for (const auto& k : kBaseKeys) {
      t.push_back(k);
      if (k.key != "angles.grid") continue;
      for (const char* tag : {"cc", "cdp", "cdi", "dpc", "dic", "dd"})
        for (const char* angle : {"alpha", "beta", "theta0", "gamma"})
          t.push_back({std::string("angles.") + tag + "." + angle, Dim::Angle, "auto", true});
    }
    return t;
  }();
  return table;
}

const KeySpec* find_key(const std::string& key) {
  for (const auto& k : key_table())
    if (key == k.key) return &k;
  return nullptr;
}

const KeySpec& require_key(const std::string& key) {
  const KeySpec* k = find_key(key);
  if (!k) invalid("unknown configuration key '" + key + "'");
  return *k;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct Unit {
  const char* name;
  Dim dim;
  double factor;
};

const Unit kUnits[] = {
    {"m", Dim::Length, 1.0},       {"cm", Dim::Length, 1e-2},     {"mm", Dim::Length, 1e-3},
    {"um", Dim::Length, 1e-6},     {"nm", Dim::Length, 1e-9},     {"s", Dim::Time, 1.0},
    {"ms", Dim::Time, 1e-3},       {"us", Dim::Time, 1e-6},       {"ns", Dim::Time, 1e-9},
    {"kg", Dim::Mass, 1.0},        {"g", Dim::Mass, 1e-3},        {"amu", Dim::Mass, 1.66053906660e-27},
    {"C", Dim::Charge, 1.0},       {"e", Dim::Charge, constants::e},
    {"Cm", Dim::Dipole, 1.0},      {"e_um", Dim::Dipole, constants::e_um},
    {"D", Dim::Dipole, 3.33564e-30},
    {"K", Dim::Temperature, 1.0},  {"mK", Dim::Temperature, 1e-3}, {"uK", Dim::Temperature, 1e-6},
    {"rad", Dim::Angle, 1.0},      {"deg", Dim::Angle, std::numbers::pi / 180.0},
    {"pi", Dim::Angle, std::numbers::pi},
    {"m^-3", Dim::Density, 1.0},   {"cm^-3", Dim::Density, 1e6},
};

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::Length: return "a length";
    case Dim::Time: return "a time";
    case Dim::Mass: return "a mass";
    case Dim::Charge: return "a charge";
    case Dim::Dipole: return "a dipole moment";
    case Dim::Temperature: return "a temperature";
    case Dim::Angle: return "an angle";
    case Dim::Density: return "a number density";
    default: return "dimensionless";
  }
}

double parse_with_dim(const std::string& text, const std::string& key, Dim dim) {
  const std::string s = trim(text);
  if (s.empty()) invalid("key " + key + ": empty value");
  const char* begin = s.c_str();
  char* end = nullptr;
  double x = std::strtod(begin, &end);
  bool has_number = end != begin;
  if (!has_number) x = 1.0;
  std::string rest = trim(std::string(end));
  std::string unit, divisor;
  auto slash = rest.find('/');
  if (slash != std::string::npos) {
    unit = trim(rest.substr(0, slash));
    divisor = trim(rest.substr(slash + 1));
  } else {
    unit = rest;
  }
  if (!has_number && unit.empty()) invalid("key " + key + ": cannot parse '" + s + "' as a number");
  if (!unit.empty()) {
    const Unit* u = nullptr;
    for (const auto& cand : kUnits)
      if (unit == cand.name) u = &cand;
    if (!u) invalid("key " + key + ": unknown unit '" + unit + "'");
    if (dim != Dim::Any && u->dim != dim)
      invalid("key " + key + ": unit '" + unit + "' is not " + dim_name(dim));
    x *= u->factor;
  }
  if (!divisor.empty()) {
    char* dend = nullptr;
    double d = std::strtod(divisor.c_str(), &dend);
    if (*dend != '\0' || d == 0.0) invalid("key " + key + ": bad divisor in '" + s + "'");
    x /= d;
  }
  if (!std::isfinite(x)) invalid("key " + key + ": value is not finite");
  return x;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void check_value(const KeySpec& k, const std::string& value) {
  const std::string v = trim(value);
  if (k.allow_auto && v == "auto") return;
  switch (k.dim) {
    case Dim::Text: return;
    case Dim::TextList: return;
    case Dim::Bool:
      if (v != "true" && v != "false" && v != "1" && v != "0" && v != "yes" && v != "no")
        invalid("key " + k.key + ": expected true or false");
      return;
    case Dim::Int: {
      char* end = nullptr;
      double x = std::strtod(v.c_str(), &end);
      if (v.empty() || *end != '\0' || x != std::floor(x) || x < 0)
        invalid("key " + k.key + ": expected a non-negative integer");
      return;
    }
    case Dim::NumberList:
      for (const auto& item : split_list(v)) parse_with_dim(item, k.key, Dim::Any);
      return;
    default: parse_with_dim(v, k.key, k.dim);
  }
}

}  // namespace

double parse_quantity(const std::string& text, const std::string& key_for_errors) {
  return parse_with_dim(text, key_for_errors, Dim::Any);
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ParamSet::ParamSet() {
  for (const auto& k : key_table()) values_[k.key] = k.fallback;
}

void ParamSet::set(const std::string& key, const std::string& value) {
  const KeySpec& k = require_key(key);
  check_value(k, value);
  values_[key] = trim(value);
}

void ParamSet::load_string(const std::string& ini) {
  boost::property_tree::ptree tree;
  std::istringstream in(ini);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    invalid(std::string("config parse error: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) invalid("config key '" + section + "' must sit inside a section");
    for (const auto& [name, leaf] : body) set(section + "." + name, leaf.data());
  }
}

void ParamSet::load_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw Error(Status::Io, "cannot open config file '" + path + "'");
  std::string text;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
  std::fclose(f);
  load_string(text);
}

bool ParamSet::has(const std::string& key) const { return find_key(key) != nullptr; }

bool ParamSet::is_auto(const std::string& key) const { return raw(key) == "auto"; }

const std::string& ParamSet::raw(const std::string& key) const {
  require_key(key);
  return values_.at(key);
}

double ParamSet::number(const std::string& key) const {
  const KeySpec& k = require_key(key);
  if (is_auto(key)) invalid("key " + key + " is 'auto' and has no numeric value");
  if (k.dim == Dim::Int) return static_cast<double>(integer(key));
  return parse_with_dim(values_.at(key), key, k.dim);
}

long long ParamSet::integer(const std::string& key) const {
  const std::string& v = raw(key);
  return std::llround(std::strtod(v.c_str(), nullptr));
}

bool ParamSet::flag(const std::string& key) const {
  const std::string& v = raw(key);
  return v == "true" || v == "1" || v == "yes";
}

std::vector<double> ParamSet::number_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(raw(key))) out.push_back(parse_with_dim(item, key, Dim::Any));
  return out;
}

std::vector<std::string> ParamSet::string_list(const std::string& key) const {
  return split_list(raw(key));
}

std::string ParamSet::dump() const {
  std::string out, section;
  for (const auto& k : key_table()) {
    const std::string& key = k.key;
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot), name = key.substr(dot + 1);
    if (sec == "manifest" && values_.at("manifest.command").empty()) continue;
    if (sec != section) {
      if (!section.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    const std::string& v = values_.at(key);
    std::string shown = v;
    if (!(k.allow_auto && v == "auto")) {
      switch (k.dim) {
        case Dim::Text:
        case Dim::Bool:
        case Dim::Int: break;
        case Dim::TextList: {
          shown.clear();
          for (const auto& s : split_list(v)) shown += (shown.empty() ? "" : ",") + s;
          break;
        }
        case Dim::NumberList: {
          shown.clear();
          for (double x : number_list(key)) shown += (shown.empty() ? "" : ",") + format_number(x);
          break;
        }
        default: shown = format_number(number(key));
      }
    }
    out += name + " = " + shown + "\n";
  }
  return out;
}

Channel ParamSet::channel() const { return parse_channel(raw("run.channel")); }

InterferometerConfig ParamSet::interferometer() const {
  InterferometerConfig c;
  c.mass = number("interferometer.mass");
  c.dx = number("interferometer.dx");
  c.t_a = number("interferometer.t_a");
  c.t_e = number("interferometer.t_e");
  if (!is_auto("interferometer.tau")) {
    const double tau = number("interferometer.tau");
    c.t_a = tau / 6.0;
    c.t_e = tau / 3.0;
  }
  c.q_int = number("interferometer.q_int");
  c.d_int = number("interferometer.d_int");
  c.radius = number("interferometer.radius");
  c.eps_r = number("interferometer.eps_r");
  return c;
}

EnvironmentParticle ParamSet::particle() const {
  EnvironmentParticle p;
  p.q_ext = number("particle.q_ext");
  p.d_ext = number("particle.d_ext");
  p.alpha_pol = number("particle.alpha_pol");
  p.m_gas = number("particle.m_gas");
  return p;
}

bool ParamSet::encounter_t_auto() const { return is_auto("encounter.T"); }

Encounter ParamSet::encounter(const InterferometerConfig&) const {
  Encounter e;
  e.b = number("encounter.b");
  e.v = number("encounter.v");
  e.alpha = number("encounter.alpha");
  e.beta = number("encounter.beta");
  e.theta0 = number("encounter.theta0");
  e.gamma = number("encounter.gamma");
  e.T = encounter_t_auto() ? (e.v > 0 ? e.b / e.v : 0.0) : number("encounter.T");
  return e;
}

ChannelParams ParamSet::channel_params() const { return channel_params(channel()); }

ChannelParams ParamSet::channel_params(Channel c) const {
  ChannelParams p;
  p.channel = c;
  p.interferometer = interferometer();
  p.particle = particle();
  p.encounter = encounter(p.interferometer);
  const std::string prefix = std::string("angles.") + channel_tag(c) + ".";
  auto override_angle = [&](const char* name, double& slot) {
    if (!is_auto(prefix + name)) slot = number(prefix + name);
  };
  override_angle("alpha", p.encounter.alpha);
  override_angle("beta", p.encounter.beta);
  override_angle("theta0", p.encounter.theta0);
  override_angle("gamma", p.encounter.gamma);
  return p;
}

QuadratureSettings ParamSet::quadrature() const {
  QuadratureSettings q;
  q.relative_tolerance = number("run.tolerance");
  q.cutoff_k = number("run.cutoff_k");
  return q;
}

GasEnsemble ParamSet::gas(double n_v) const {
  GasEnsemble g = GasEnsemble::from_density(n_v, number("gas.L"));
  g.temperature = number("gas.T_gas");
  g.gas_mass = number("particle.m_gas");
  g.b_min = number("gas.b_min");
  if (!is_auto("gas.b_max")) g.b_max = number("gas.b_max");
  return g;
}

EnsembleOptions ParamSet::ensemble_options(Channel) const {
  EnsembleOptions o;
  o.velocity = parse_velocity_kind(raw("gas.velocity"));
  const std::string& m = raw("gas.angle_model");
  if (m == "auto") {
    o.angles_from_channel = true;
  } else {
    o.angles_from_channel = false;
    if (m == "independent") o.angles = AngleModel::Independent;
    else if (m == "coupled") o.angles = AngleModel::Coupled;
    else if (m == "fixed") o.angles = AngleModel::FixedTheta0;
    else invalid("gas.angle_model must be auto, independent, coupled or fixed");
  }
  o.theta0 = number("gas.theta0");
  if (!is_auto("gas.averaging_time")) o.averaging_time = number("gas.averaging_time");
  return o;
}

OracleSettings ParamSet::oracle_settings() const {
  OracleSettings s;
  if (!is_auto("oracle.dt")) s.dt = number("oracle.dt");
  if (!is_auto("oracle.t0_window")) s.t0_window = number("oracle.t0_window");
  s.window_factor = number("oracle.window_factor");
  return s;
}

std::vector<double> ParamSet::sweep_grid() const {
  auto explicit_values = number_list("sweep.values");
  if (!explicit_values.empty()) return explicit_values;
  const long long n = integer("sweep.points");
  const double lo = number("sweep.min"), hi = number("sweep.max");
  const std::string& scale = raw("sweep.scale");
  if (scale != "log" && scale != "linear") invalid("sweep.scale must be log or linear");
  std::vector<double> g;
  if (n <= 0) return g;
  if (scale == "log" && !(lo > 0 && hi > 0)) invalid("log sweep needs positive bounds");
  for (long long i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    // interpolating log10 keeps decade points exact
    g.push_back(scale == "log" ? std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * f)
                               : lo + (hi - lo) * f);
  }
  return g;
}

}  // namespace emd
