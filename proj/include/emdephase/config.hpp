#pragma once

#include <map>
#include <string>
#include <vector>

#include "emdephase/channels.hpp"
#include "emdephase/dephasing.hpp"
#include "emdephase/ensemble.hpp"
#include "emdephase/oracle.hpp"
#include "emdephase/witness.hpp"

namespace emd {

// Flat key/value run configuration with "section.key" names.
// Numeric values accept unit suffixes: "1e" (elementary charges), "0.1 e_um", "20um", "0.1mK", "1us", "pi/2".
class ParamSet {
 public:
  ParamSet();

  void set(const std::string& key, const std::string& value);
  void load_file(const std::string& path);
  void load_string(const std::string& ini);

  bool has(const std::string& key) const;
  bool is_auto(const std::string& key) const;
  const std::string& raw(const std::string& key) const;
  double number(const std::string& key) const;
  long long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> number_list(const std::string& key) const;
  std::vector<std::string> string_list(const std::string& key) const;

  // Resolved SI values grouped by section, 17 significant digits.
  std::string dump() const;

  Channel channel() const;
  InterferometerConfig interferometer() const;
  EnvironmentParticle particle() const;
  Encounter encounter(const InterferometerConfig& cfg) const;
  bool encounter_t_auto() const;
  ChannelParams channel_params() const;
  // Applies angles.<tag>.* overrides for channel c.
  ChannelParams channel_params(Channel c) const;
  QuadratureSettings quadrature() const;
  GasEnsemble gas(double n_v) const;
  EnsembleOptions ensemble_options(Channel c) const;
  OracleSettings oracle_settings() const;
  std::vector<double> sweep_grid() const;

 private:
  std::map<std::string, std::string> values_;
};

// Parses "<number>[ ]<unit>" or "<number>/<number>" forms into SI.
double parse_quantity(const std::string& text, const std::string& key_for_errors = "value");

// %.17g
std::string format_number(double x);

}  // namespace emd
