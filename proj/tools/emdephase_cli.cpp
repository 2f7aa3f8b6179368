#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "emdephase/emdephase.h"

namespace {

struct CliError {
  int code;
  std::string message;
};

void check(emd_status s) {
  if (s != EMD_OK) throw CliError{static_cast<int>(s), emd_last_error()};
}

class Params {
 public:
  Params() { check(emd_params_create(&p_)); }
  ~Params() { emd_params_destroy(p_); }
  Params(const Params&) = delete;
  Params& operator=(const Params&) = delete;

  emd_params* get() const { return p_; }
  void set(const std::string& k, const std::string& v) { check(emd_params_set(p_, k.c_str(), v.c_str())); }
  void load(const std::string& path) { check(emd_params_load(p_, path.c_str())); }
  void load_string(const std::string& ini) { check(emd_params_load_string(p_, ini.c_str())); }
  double number(const std::string& k) const {
    double x = 0;
    check(emd_params_get_number(p_, k.c_str(), &x));
    return x;
  }
  std::string text(const std::string& k) const {
    size_t n = 0;
    check(emd_params_get_string(p_, k.c_str(), nullptr, 0, &n));
    std::string s(n, '\0');
    check(emd_params_get_string(p_, k.c_str(), s.data(), n, &n));
    s.resize(n - 1);
    return s;
  }
  std::string dump() const {
    size_t n = 0;
    check(emd_params_dump(p_, nullptr, 0, &n));
    std::string s(n, '\0');
    check(emd_params_dump(p_, s.data(), n, &n));
    s.resize(n - 1);
    return s;
  }
  std::vector<double> grid() const {
    size_t n = 0;
    check(emd_params_sweep_grid(p_, nullptr, 0, &n));
    std::vector<double> g(n);
    check(emd_params_sweep_grid(p_, g.data(), n, &n));
    return g;
  }
  std::vector<double> list(const std::string& k) const {
    size_t n = 0;
    check(emd_params_number_list(p_, k.c_str(), nullptr, 0, &n));
    std::vector<double> g(n);
    check(emd_params_number_list(p_, k.c_str(), g.data(), n, &n));
    return g;
  }

 private:
  emd_params* p_ = nullptr;
};

// Built-in defaults for the ensemble pipelines; presets/fig5.ini and presets/fig6.ini carry the same values.
const char* kQgemDefaults = R"(
[run]
channel = dd
[interferometer]
mass = 1e-15
dx = 10um
tau = 1
d_int = 0.1 e_um
radius = 1um
eps_r = 5.1
[particle]
d_ext = 6.17e-30
m_gas = 4.8e-26
[gas]
L = 0.01
T_gas = 0.1mK
b_min = 1um
[witness]
coupling = gravitational
d = 450um
[sweep]
var = n_v
min = 1e8
max = 1e14
points = 25
)";

const char* kCnotDefaults = R"(
[run]
channel = cc
[interferometer]
mass = 1e-27
dx = 0.18um
tau = 1us
q_int = 1e
[particle]
q_ext = 10e
m_gas = 4.8e-26
[gas]
L = 0.01
T_gas = 0.1mK
b_min = 1e-7
[witness]
coupling = coulomb
d = 50um
q1 = 1e
q2 = 1e
[sweep]
var = n_v
min = 1e4
max = 1e10
points = 25
)";

using Cell = std::variant<double, long long, std::string, bool>;
using Row = std::vector<std::pair<std::string, Cell>>;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Table {
 public:
  explicit Table(std::string format) : format_(std::move(format)) {
    if (format_ != "csv" && format_ != "json") throw CliError{2, "format must be csv or json"};
  }
  void add(const Row& r) {
    if (format_ == "json") {
      nlohmann::ordered_json j;
      for (const auto& [k, v] : r) std::visit([&](const auto& x) { j[k] = x; }, v);
      out_ += j.dump() + "\n";
      return;
    }
    if (!header_done_) {
      std::string h;
      for (const auto& [k, v] : r) h += (h.empty() ? "" : ",") + k;
      out_ += h + "\n";
      header_done_ = true;
    }
    std::string line;
    bool first = true;
    for (const auto& [k, v] : r) {
      if (!first) line += ",";
      first = false;
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) line += fmt(x);
            else if constexpr (std::is_same_v<T, long long>) line += std::to_string(x);
            else if constexpr (std::is_same_v<T, bool>) line += x ? "1" : "0";
            else line += x;
          },
          v);
    }
    out_ += line + "\n";
  }
  const std::string& text() const { return out_; }

 private:
  std::string format_;
  std::string out_;
  bool header_done_ = false;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliError{2, "cannot write output file '" + path + "'"};
  f << text;
  if (!f) throw CliError{2, "write failed for '" + path + "'"};
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct RunContext {
  Params& params;
  int threads;
  std::string out;
  std::string format() const { return params.text("run.format"); }
};

// Extra outputs (argmax tables) land next to the main output.
std::string side_path(const std::string& out, const std::string& suffix) {
  return out.empty() || out == "-" ? std::string() : out + suffix;
}

void run_channel(RunContext& ctx) {
  emd_dephasing_result r{};
  check(emd_dephasing(ctx.params.get(), &r));
  Table t(ctx.format());
  t.add({{"channel", ctx.params.text("run.channel")},
         {"gamma_n", r.gamma_n},
         {"estimated_error", r.estimated_error},
         {"omega_min", r.omega_min},
         {"omega_max", r.omega_max},
         {"panels", static_cast<long long>(r.panels)},
         {"dominant_mode", r.dominant_mode},
         {"warnings", static_cast<long long>(r.warnings)}});
  write_text(ctx.out, t.text());
}

void run_sweep(RunContext& ctx) {
  auto& p = ctx.params;
  const std::string var = p.text("sweep.var");
  auto channels = split(p.text("sweep.channels"));
  if (channels.empty()) channels.push_back(p.text("run.channel"));
  const auto grid = p.grid();
  if (grid.empty()) throw CliError{2, "sweep grid is empty"};
  Table t(ctx.format());
  for (const auto& c : channels) {
    if (var == "n_v") {
      for (double n : grid) {
        emd_ensemble_result r{};
        check(emd_ensemble(p.get(), c.c_str(), n, &r));
        t.add({{"channel", c},
               {"n_v", n},
               {"gamma_n", r.gamma_n},
               {"estimated_error", r.estimated_error},
               {"u_min", r.u_min},
               {"u_max", r.u_max},
               {"warnings", static_cast<long long>(r.warnings)}});
      }
      continue;
    }
    std::vector<emd_dephasing_result> rows(grid.size());
    check(emd_sweep(p.get(), c.c_str(), var.c_str(), grid.data(), grid.size(), ctx.threads, rows.data()));
    for (size_t i = 0; i < grid.size(); ++i)
      t.add({{"channel", c},
             {var, grid[i]},
             {"gamma_n", rows[i].gamma_n},
             {"estimated_error", rows[i].estimated_error},
             {"omega_max", rows[i].omega_max},
             {"panels", static_cast<long long>(rows[i].panels)},
             {"dominant_mode", rows[i].dominant_mode},
             {"warnings", static_cast<long long>(rows[i].warnings)}});
  }
  write_text(ctx.out, t.text());
}

void run_pipeline(RunContext& ctx, const char* pipeline) {
  auto& p = ctx.params;
  emd_phases ph{};
  check(emd_entangling_phases(p.get(), &ph));
  const auto grid = p.grid();
  if (grid.empty()) throw CliError{2, "density grid is empty"};
  Table t(ctx.format());
  for (double n : grid) {
    emd_ensemble_result r{};
    check(emd_ensemble(p.get(), pipeline, n, &r));
    emd_witness_result w{};
    check(emd_witness(ph.delta_phi, r.gamma_n, &w));
    t.add({{"n_v", n},
           {"gamma_n", r.gamma_n},
           {"abs_delta_phi", std::abs(ph.delta_phi)},
           {"witness", w.witness},
           {"detectable", w.detectable != 0},
           {"margin", w.margin},
           {"threshold_rule", w.threshold_rule != 0},
           {"u_min", r.u_min},
           {"u_max", r.u_max},
           {"warnings", static_cast<long long>(r.warnings)}});
  }
  write_text(ctx.out, t.text());
}

void run_angles(RunContext& ctx) {
  auto& p = ctx.params;
  auto channels = split(p.text("sweep.channels"));
  if (channels.empty()) channels.push_back(p.text("run.channel"));
  const auto us = p.list("angles.u");
  if (us.empty()) throw CliError{2, "angles.u is empty"};
  const int grid = static_cast<int>(p.number("angles.grid"));
  Table map(ctx.format()), best(ctx.format());
  for (const auto& c : channels) {
    for (double u : us) {
      std::vector<double> values(static_cast<size_t>(std::max(grid, 0)) * std::max(grid, 0));
      check(emd_angle_map(c.c_str(), u, grid, ctx.threads, values.data()));
      const double step = M_PI / (grid - 1);
      for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
          map.add({{"channel", c}, {"u", u}, {"alpha", step * i}, {"beta", step * j},
                   {"value", values[static_cast<size_t>(i) * grid + j]}});
      emd_angles a{};
      check(emd_optimal_angles(c.c_str(), u, &a));
      best.add({{"channel", c}, {"u", u}, {"alpha", a.alpha}, {"beta", a.beta}, {"theta0", a.theta0},
                {"gamma", a.gamma}, {"value", a.value}});
    }
  }
  write_text(ctx.out, map.text());
  const std::string side = side_path(ctx.out, ".argmax." + ctx.format());
  write_text(side, side.empty() ? "\n" + best.text() : best.text());
}

void run_oracle(RunContext& ctx) {
  auto& p = ctx.params;
  const std::string mode = p.text("oracle.mode");
  const double b = p.number("encounter.b"), v = p.number("encounter.v");
  Table t(ctx.format());
  if (mode == "mc") {
    emd_mc_result r{};
    const auto n = static_cast<uint64_t>(p.number("oracle.realizations"));
    const auto seed = static_cast<uint64_t>(p.number("run.seed"));
    check(emd_oracle_mc(p.get(), n, seed, ctx.threads, &r));
    emd_dephasing_result d{};
    check(emd_dephasing(p.get(), &d));
    t.add({{"mode", mode},
           {"variance", r.variance},
           {"std_error", r.std_error},
           {"mean", r.mean},
           {"mean_std_error", r.mean_std_error},
           {"realizations", static_cast<long long>(r.realizations)},
           {"dt", r.dt},
           {"seed", static_cast<long long>(seed)},
           {"gamma_n", d.gamma_n},
           {"relative_deviation", d.gamma_n != 0 ? r.variance / d.gamma_n - 1.0 : NAN}});
  } else if (mode == "periodogram") {
    const double record = p.text("oracle.record") == "auto" ? 4000 * b / v : p.number("oracle.record");
    const double dt = p.text("oracle.record_dt") == "auto" ? 0.1 * b / v : p.number("oracle.record_dt");
    double dev = 0;
    check(emd_periodogram_check(p.get(), record, dt, &dev));
    t.add({{"mode", mode}, {"record", record}, {"dt", dt}, {"max_deviation", dev}});
  } else {
    throw CliError{2, "oracle.mode must be mc or periodogram"};
  }
  write_text(ctx.out, t.text());
}

void dispatch(const std::string& command, RunContext& ctx) {
  if (command == "channel") run_channel(ctx);
  else if (command == "sweep") run_sweep(ctx);
  else if (command == "qgem") run_pipeline(ctx, "qgem");
  else if (command == "cnot") run_pipeline(ctx, "cnot");
  else if (command == "angles") run_angles(ctx);
  else if (command == "oracle") run_oracle(ctx);
  else throw CliError{2, "unknown command '" + command + "' in manifest"};
}

void write_manifest(Params& p, const std::string& command, const std::string& out,
                    const std::string& manifest) {
  std::string path = manifest;
  if (path.empty()) {
    if (out.empty() || out == "-") return;
    path = out + ".manifest.ini";
  }
  p.set("manifest.command", command);
  p.set("manifest.version", emd_version());
  p.set("manifest.timestamp", utc_now());
  p.set("manifest.output", out.empty() ? "-" : out);
  write_text(path, p.dump());
}

struct Common {
  std::string config;
  std::string out;
  std::string manifest;
  std::optional<std::string> format;
  std::optional<std::string> seed;
  std::optional<std::string> tolerance;
  int threads = 1;
  bool exact_bessel = false;
  std::vector<std::string> sets;
  std::map<std::string, std::optional<std::string>> flags;
};

// Convenience flags mapped onto configuration keys.
const std::vector<std::pair<std::string, std::string>> kParamFlags = {
    {"--type", "run.channel"},          {"--b", "encounter.b"},
    {"--v", "encounter.v"},             {"--alpha", "encounter.alpha"},
    {"--beta", "encounter.beta"},       {"--theta0", "encounter.theta0"},
    {"--gamma", "encounter.gamma"},     {"--T", "encounter.T"},
    {"--qint", "interferometer.q_int"}, {"--qext", "particle.q_ext"},
    {"--dint", "interferometer.d_int"}, {"--dext", "particle.d_ext"},
    {"--alpha-pol", "particle.alpha_pol"}, {"--mass", "interferometer.mass"},
    {"--dx", "interferometer.dx"},      {"--ta", "interferometer.t_a"},
    {"--te", "interferometer.t_e"},     {"--tau", "interferometer.tau"},
    {"--radius", "interferometer.radius"}, {"--eps-r", "interferometer.eps_r"},
    {"--var", "sweep.var"},             {"--min", "sweep.min"},
    {"--max", "sweep.max"},             {"--points", "sweep.points"},
    {"--scale", "sweep.scale"},         {"--values", "sweep.values"},
    {"--channels", "sweep.channels"},   {"--nv-min", "sweep.min"},
    {"--nv-max", "sweep.max"},          {"--u", "angles.u"},
    {"--grid", "angles.grid"},          {"--mode", "oracle.mode"},
    {"--realizations", "oracle.realizations"}, {"--t0-window", "oracle.t0_window"},
    {"--record", "oracle.record"},      {"--record-dt", "oracle.record_dt"},
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "INI configuration file");
  sub->add_option("--out", c.out, "output path (stdout when omitted)");
  sub->add_option("--manifest", c.manifest, "manifest path (default <out>.manifest.ini)");
  sub->add_option("--format", c.format, "csv or json");
  sub->add_option("--seed", c.seed, "Monte Carlo seed");
  sub->add_option("--threads", c.threads, "worker threads (0 = hardware)");
  sub->add_option("--tolerance", c.tolerance, "relative quadrature tolerance");
  sub->add_flag("--exact-bessel", c.exact_bessel, "evaluate K_nu exactly in ensemble pipelines");
  sub->add_option("--set", c.sets, "key=value override, repeatable");
  for (const auto& [flag, key] : kParamFlags) sub->add_option(flag, c.flags[key + "|" + flag], key);
}

void apply(Params& p, const Common& c, const char* defaults) {
  if (defaults && c.config.empty()) p.load_string(defaults);
  if (!c.config.empty()) p.load(c.config);
  for (const auto& [tagged, value] : c.flags) {
    if (!value) continue;
    p.set(tagged.substr(0, tagged.find('|')), *value);
  }
  if (c.format) p.set("run.format", *c.format);
  if (c.seed) p.set("run.seed", *c.seed);
  if (c.tolerance) p.set("run.tolerance", *c.tolerance);
  if (c.exact_bessel) p.set("run.exact_bessel", "true");
  for (const auto& kv : c.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw CliError{2, "--set expects key=value, got '" + kv + "'"};
    p.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electromagnetic dephasing of matter-wave interferometers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(emd_version()));

  const std::vector<std::string> commands = {"channel", "sweep", "qgem", "cnot", "angles", "oracle"};
  const std::map<std::string, std::string> help = {
      {"channel", "dephasing for one encounter"},
      {"sweep", "dephasing over a grid of v, b, dx, q_int or n_v"},
      {"qgem", "gas-ensemble dephasing and witness for the gravitational pair"},
      {"cnot", "gas-ensemble dephasing and witness for the Coulomb pair"},
      {"angles", "normalised acceleration over projection angles and its argmax"},
      {"oracle", "time-domain Monte Carlo or periodogram cross-check"}};
  std::map<std::string, Common> opts;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands) {
    subs[c] = app.add_subcommand(c, help.at(c));
    add_common(subs[c], opts[c]);
  }
  std::string replay_manifest, replay_out;
  int replay_threads = 1;
  auto* replay = app.add_subcommand("replay", "rerun a command from its manifest");
  replay->add_option("manifest", replay_manifest, "manifest file")->required();
  replay->add_option("--out", replay_out, "output path (default: the recorded one)");
  replay->add_option("--threads", replay_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Params p;
    if (replay->parsed()) {
      p.load(replay_manifest);
      const std::string command = p.text("manifest.command");
      if (command.empty()) throw CliError{2, "manifest has no command"};
      std::string out = replay_out.empty() ? p.text("manifest.output") : replay_out;
      if (out == "-") out.clear();
      RunContext ctx{p, replay_threads, out};
      dispatch(command, ctx);
      return 0;
    }
    for (const auto& c : commands) {
      if (!subs[c]->parsed()) continue;
      const char* defaults = c == "qgem" ? kQgemDefaults : c == "cnot" ? kCnotDefaults : nullptr;
      apply(p, opts[c], defaults);
      RunContext ctx{p, opts[c].threads, opts[c].out};
      dispatch(c, ctx);
      write_manifest(p, c, opts[c].out, opts[c].manifest);
    }
    return 0;
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code == EMD_NON_CONVERGENCE ? 3 : e.code == EMD_INTERNAL ? 1 : 2;
  }
}
