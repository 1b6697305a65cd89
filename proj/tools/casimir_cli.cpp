// Command-line front end: builds models and quadrature settings from flags
// and key-value config files, runs the closed-form or contour engines, and
// writes figure-ready CSV or JSON-lines records.
//
// Exit codes: 0 ok, 2 usage, 3 validation, 4 numerical non-convergence,
// 5 input/output.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "casimir/constants.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/spectrum.hpp"
#include "json.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw CliError{code, message}; }

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    fail(3, "value for '" + key + "' is not a number: '" + text + "'");
  if (!std::isfinite(v)) fail(3, "value for '" + key + "' must be finite");
  return v;
}

long parse_int(const std::string& key, const std::string& text) {
  long v = 0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    fail(3, "value for '" + key + "' is not an integer: '" + text + "'");
  return v;
}

// Lengths carry a unit suffix nm|um|m; everything internal is meters.
double parse_length(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{})
    fail(3, "value for '" + key + "' must look like 100nm, 0.1um or 1e-7m");
  std::string unit(res.ptr, end);
  double scale = 0.0;
  if (unit == "nm")
    scale = 1e-9;
  else if (unit == "um")
    scale = 1e-6;
  else if (unit == "m")
    scale = 1.0;
  else
    fail(3, "unknown length unit '" + unit + "' for '" + key + "'; use nm, um or m");
  if (!(v > 0.0) || !std::isfinite(v))
    fail(3, "length '" + key + "' must be positive and finite");
  return v * scale;
}

// Frequencies carry a unit suffix eV|rad_s; everything internal is rad/s.
double parse_frequency(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{})
    fail(3, "value for '" + key + "' must look like 9eV or 7.5e14rad_s");
  std::string unit(res.ptr, end);
  double scale = 0.0;
  if (unit == "eV")
    scale = casimir::constants::eV_to_rad_s;
  else if (unit == "rad_s")
    scale = 1.0;
  else
    fail(3, "unknown frequency unit '" + unit + "' for '" + key + "'; use eV or rad_s");
  if (!(v > 0.0) || !std::isfinite(v))
    fail(3, "frequency '" + key + "' must be positive and finite");
  return v * scale;
}

// One string-valued parameter, addressable as --key on the command line and
// as "key = value" in a config file; the resolved canonical form is echoed
// into output headers so a run can be reproduced from them.
struct Param {
  std::string key;
  std::string value;
  CLI::Option* opt = nullptr;
};

struct Command {
  CLI::App* app = nullptr;
  std::vector<std::unique_ptr<Param>> params;
  std::string config_path;
  std::function<void(Command&)> run;

  Param& add(const std::string& key, const std::string& def, const std::string& help) {
    params.push_back(std::make_unique<Param>(Param{key, def, nullptr}));
    Param& p = *params.back();
    p.opt = app->add_option("--" + key, p.value, help);
    return p;
  }

  Param& get(const std::string& key) {
    for (auto& p : params)
      if (p->key == key) return *p;
    fail(3, "internal: parameter '" + key + "' not registered");
  }

  std::string valid_keys() const {
    std::string out;
    for (auto& p : params) out += (out.empty() ? "" : ", ") + p->key;
    return out;
  }
};

// Flat "key = value" config with '#' comments. Values from the command line
// win; keys no command knows are rejected, keys for other commands (say a
// window edge in a seed file fed to `pressure`) are ignored.
void apply_config(Command& cmd, const std::set<std::string>& all_keys) {
  if (cmd.config_path.empty()) return;
  std::ifstream in(cmd.config_path);
  if (!in) fail(5, "cannot open config file '" + cmd.config_path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    auto b = std::find_if(line.begin(), line.end(), notspace);
    auto e = std::find_if(line.rbegin(), line.rend(), notspace).base();
    if (b >= e) continue;
    std::string entry(b, e);
    auto eq = entry.find('=');
    if (eq == std::string::npos)
      fail(3, "config line " + std::to_string(lineno) + " is not 'key = value': '" + entry + "'");
    auto trim = [&](std::string s) {
      auto sb = std::find_if(s.begin(), s.end(), notspace);
      auto se = std::find_if(s.rbegin(), s.rend(), notspace).base();
      return sb < se ? std::string(sb, se) : std::string();
    };
    std::string key = trim(entry.substr(0, eq));
    std::string value = trim(entry.substr(eq + 1));
    if (key.empty())
      fail(3, "config line " + std::to_string(lineno) + " has an empty key");
    if (key == "artifact-version") continue;
    if (key == "command") {
      if (value != cmd.app->get_name())
        fail(3, "config was written for command '" + value + "'; run that command or drop the key");
      continue;
    }
    bool found = false;
    for (auto& p : cmd.params) {
      if (p->key != key) continue;
      found = true;
      if (p->opt->count() == 0) p->value = value;
      break;
    }
    if (!found && all_keys.find(key) == all_keys.end())
      fail(3, "unknown config key '" + key + "'; keys for " + cmd.app->get_name() + ": " +
                  cmd.valid_keys());
  }
}

// Incremental writer. The file is deleted unless commit() is reached, so a
// failure partway through a sweep leaves no partial output behind.
class Output {
 public:
  Output(const std::string& path, bool json) : path_(path), json_(json) {
    if (path_.empty()) {
      os_ = &std::cout;
    } else {
      file_.open(path_, std::ios::binary | std::ios::trunc);
      if (!file_) fail(5, "cannot open output file '" + path_ + "'");
      os_ = &file_;
    }
  }
  ~Output() {
    if (!committed_ && !path_.empty()) {
      file_.close();
      std::remove(path_.c_str());
    }
  }

  bool json() const { return json_; }

  void header(const Command& cmd) {
    if (json_) {
      nlohmann::ordered_json meta;
      meta["command"] = cmd.app->get_name();
      meta["artifact-version"] = kVersion;
      nlohmann::ordered_json params;
      for (auto& p : cmd.params)
        if (p->key != "output") params[p->key] = p->value;
      meta["params"] = params;
      line(meta.dump());
    } else {
      line("# command = " + cmd.app->get_name());
      line(std::string("# artifact-version = ") + kVersion);
      // The destination itself is not part of the run; leaving it out keeps
      // the bytes identical wherever the file is written.
      for (auto& p : cmd.params)
        if (p->key != "output") line("# " + p->key + " = " + p->value);
    }
  }

  void columns(const std::vector<std::string>& names) {
    names_ = names;
    if (!json_) {
      std::string row;
      for (auto& n : names) row += (row.empty() ? "" : ",") + n;
      line(row);
    }
  }

  void row(const std::vector<std::string>& cells) {
    if (json_) {
      nlohmann::ordered_json rec;
      for (std::size_t i = 0; i < cells.size(); ++i) rec[names_[i]] = cells[i];
      line(rec.dump());
    } else {
      std::string row;
      for (auto& c : cells) row += (row.empty() ? "" : ",") + c;
      line(row);
    }
  }

  void commit() {
    os_->flush();
    if (!*os_) fail(5, "failed writing output" + (path_.empty() ? "" : " to '" + path_ + "'"));
    committed_ = true;
  }

 private:
  void line(const std::string& s) {
    *os_ << s << '\n';
    if (!*os_) fail(5, "failed writing output" + (path_.empty() ? "" : " to '" + path_ + "'"));
  }

  std::string path_;
  bool json_;
  std::ofstream file_;
  std::ostream* os_ = nullptr;
  bool committed_ = false;
  std::vector<std::string> names_;
};

// ---- shared parameter groups ------------------------------------------------

void add_output_params(Command& c) {
  c.add("format", "csv", "Output format: csv or json-lines");
  c.add("output", "", "Output file path (default: stdout)");
}

void add_setup_param(Command& c) { c.add("a", "100nm", "Plate separation (nm|um|m)"); }

void add_model_params(Command& c, const std::string& models) {
  c.add("model", "drude", "Dielectric model: " + models);
  c.add("omega-p", "9eV", "Plasma frequency for drude/plasma (eV|rad_s)");
  c.add("nu", "0.035eV", "Drude dissipation rate (eV|rad_s)");
  c.add("eps-re", "2", "Real part of the permittivity for const-eps");
  c.add("eps-im", "0", "Imaginary part of the permittivity for const-eps");
  c.add("r-te", "1", "TE reflection coefficient for const-r");
  c.add("r-tm", "1", "TM reflection coefficient for const-r");
  c.add("table", "", "Optical data file for the table model");
}

void add_window_params(Command& c) {
  c.add("omega1", "7.5e14rad_s", "Lower window edge (eV|rad_s)");
  c.add("omega2", "9.4e15rad_s", "Upper window edge (eV|rad_s)");
  c.add("delta", "1", "Window depth in [0, 1]");
  c.add("s", "20", "Window edge sharpness (dimensionless)");
  c.add("window-mode", "sharp", "Window edges: sharp or smooth");
}

void add_quad_params(Command& c, const std::string& xi_max, const std::string& cutoff) {
  c.add("p-nodes", "16", "Gauss-Legendre nodes per angular panel");
  c.add("rel-tol", "1e-06", "Relative tolerance of the adaptive passes");
  c.add("xi-max", xi_max, "Frequency cutoff of the real-axis integral, in xi = 2 omega a / c");
  c.add("xi-panel", fmt(std::numbers::pi / 4.0), "Real-axis panel width in xi");
  c.add("cutoff-delta", cutoff, "Damping scale of the high-frequency regulator");
  c.add("zeta0-xi", "1", "Rotated-contour frequency scale, in xi units");
}

struct Resolved {
  casimir::PhysicalSetup setup{100e-9};
  casimir::QuadratureSpec quad = casimir::QuadratureSpec::defaults(casimir::PhysicalSetup(100e-9));
};

// Values keep the exact spelling they arrived with; headers echo that
// spelling, and re-parsing it lands on the same double.
double resolve_length(Command& c, const std::string& key) {
  return parse_length(key, c.get(key).value);
}

double resolve_frequency(Command& c, const std::string& key) {
  return parse_frequency(key, c.get(key).value);
}

double resolve_double(Command& c, const std::string& key) {
  return parse_double(key, c.get(key).value);
}

long resolve_int(Command& c, const std::string& key) {
  return parse_int(key, c.get(key).value);
}

std::string resolve_choice(Command& c, const std::string& key,
                           const std::vector<std::string>& allowed) {
  Param& p = c.get(key);
  for (auto& a : allowed)
    if (p.value == a) return p.value;
  std::string opts;
  for (auto& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
  fail(3, "'" + p.value + "' is not a valid " + key + "; choose one of: " + opts);
}

casimir::PhysicalSetup resolve_setup(Command& c) {
  return casimir::PhysicalSetup(resolve_length(c, "a"));
}

casimir::QuadratureSpec resolve_quad(Command& c, const casimir::PhysicalSetup& setup) {
  casimir::QuadratureSpec q = casimir::QuadratureSpec::defaults(setup);
  q.p_nodes = static_cast<int>(resolve_int(c, "p-nodes"));
  q.rel_tol = resolve_double(c, "rel-tol");
  q.omega_max = resolve_double(c, "xi-max") * setup.c / (2.0 * setup.a);
  q.omega_panel_width = resolve_double(c, "xi-panel") * setup.c / (2.0 * setup.a);
  q.cutoff_delta = resolve_double(c, "cutoff-delta");
  q.zeta0 = resolve_double(c, "zeta0-xi") * setup.c / (2.0 * setup.a);
  q.validate(setup);
  return q;
}

casimir::DielectricModel resolve_dielectric(Command& c, const std::string& model) {
  if (model == "drude")
    return casimir::DielectricModel(
        casimir::DrudeModel{resolve_frequency(c, "omega-p"), resolve_frequency(c, "nu")});
  if (model == "plasma")
    return casimir::DielectricModel(casimir::PlasmaModel{resolve_frequency(c, "omega-p")});
  if (model == "const-eps")
    return casimir::DielectricModel(casimir::ConstantEpsilonModel{
        casimir::complex(resolve_double(c, "eps-re"), resolve_double(c, "eps-im"))});
  if (model == "table") {
    std::string path = c.get("table").value;
    if (path.empty()) fail(2, "model 'table' needs --table <file>");
    std::ifstream in(path);
    if (!in) fail(5, "cannot open optical data file '" + path + "'");
    return casimir::DielectricModel(casimir::load_optical_table(in));
  }
  fail(3, "internal: unhandled dielectric model " + model);
}

casimir::PlatePair resolve_plates(Command& c, const std::string& model) {
  if (model == "ideal") return casimir::PlatePair(casimir::ConstantReflection(1.0));
  if (model == "const-r") {
    double rte = resolve_double(c, "r-te");
    double rtm = resolve_double(c, "r-tm");
    if (std::abs(rte) > 1.0 || std::abs(rtm) > 1.0)
      fail(3, "reflection coefficients must lie in [-1, 1]");
    return casimir::PlatePair(
        casimir::ConstantReflection(casimir::complex(rte), casimir::complex(rtm)));
  }
  return casimir::PlatePair(resolve_dielectric(c, model));
}

casimir::WindowSpec resolve_window(Command& c) {
  std::string mode = resolve_choice(c, "window-mode", {"sharp", "smooth"});
  return casimir::WindowSpec(resolve_frequency(c, "omega1"), resolve_frequency(c, "omega2"),
                             resolve_double(c, "delta"), resolve_double(c, "s"),
                             mode == "sharp" ? casimir::WindowMode::sharp
                                             : casimir::WindowMode::smooth);
}

Output make_output(Command& c) {
  std::string format = resolve_choice(c, "format", {"csv", "json-lines"});
  return Output(c.get("output").value, format == "json-lines");
}

const std::vector<std::string> kSpectrumColumns = {
    "omega_rad_s",   "xi",           "density_pw_te", "density_pw_tm",
    "density_ew_te", "density_ew_tm", "density_total"};

// Spectral rows use the plotted normalization: the per-frequency pressure
// integrand times a^3 / hbar, so P = (hbar c / 2 a^4) Int density_total dxi.
std::vector<std::string> spectrum_row(const casimir::PhysicalSetup& setup,
                                      const casimir::SpectralSample& s) {
  return {fmt(setup.omega(s.xi)), fmt(s.xi),    fmt(-s.pw_te),   fmt(-s.pw_tm),
          fmt(-s.ew_te),          fmt(-s.ew_tm), fmt(-s.total())};
}

// ---- commands ---------------------------------------------------------------

void run_spectrum_const_r(Command& c) {
  casimir::PhysicalSetup setup = resolve_setup(c);
  Param& rp = c.get("r");
  if (rp.opt->count() == 0 && rp.value.empty())
    fail(2, "spectrum-const-r needs --r <value>; pass it or set 'r = ...' in the config");
  double r = resolve_double(c, "r");
  if (std::abs(r) > 1.0) fail(3, "reflection coefficient r must lie in [-1, 1]");
  double xi_min = resolve_double(c, "xi-min");
  double xi_max = resolve_double(c, "xi-max");
  double xi_step = resolve_double(c, "xi-step");
  if (!(xi_step > 0.0) || xi_max < xi_min || xi_min < 0.0)
    fail(3, "need 0 <= xi-min <= xi-max and xi-step > 0");

  Output out = make_output(c);
  out.header(c);
  out.columns(kSpectrumColumns);
  casimir::ConstantReflection refl(r);
  long n = std::lround(std::floor((xi_max - xi_min) / xi_step + 1e-9));
  for (long k = 0; k <= n; ++k) {
    double xi = xi_min + static_cast<double>(k) * xi_step;
    out.row(spectrum_row(setup, casimir::total_density(refl, xi)));
  }
  out.commit();
}

void run_pressure_const_r_sweep(Command& c) {
  casimir::PhysicalSetup setup = resolve_setup(c);
  double r_min = resolve_double(c, "r-min");
  double r_max = resolve_double(c, "r-max");
  long steps = resolve_int(c, "r-steps");
  if (!(r_min >= 0.0 && r_max <= 1.0 && r_min <= r_max))
    fail(3, "need 0 <= r-min <= r-max <= 1");
  if (steps < 2) fail(3, "r-steps must be at least 2");

  Output out = make_output(c);
  out.header(c);
  out.columns({"r", "pressure_pa", "ratio_to_ideal"});
  double ideal = casimir::ideal_casimir_pressure(setup);
  for (long k = 0; k < steps; ++k) {
    double r = r_min + (r_max - r_min) * static_cast<double>(k) / static_cast<double>(steps - 1);
    double p = casimir::constant_r_pressure(casimir::ConstantReflection(r), setup);
    out.row({fmt(r), fmt(p), fmt(p / ideal)});
  }
  out.commit();
}

void run_effective_r(Command& c) {
  double a_min = resolve_length(c, "a-min");
  double a_max = resolve_length(c, "a-max");
  long steps = resolve_int(c, "a-steps");
  if (!(a_max > a_min)) fail(3, "need a-min < a-max");
  if (steps < 2) fail(3, "a-steps must be at least 2");
  std::string model = resolve_choice(c, "model", {"drude", "plasma", "const-eps", "table"});
  casimir::DielectricModel diel = resolve_dielectric(c, model);

  int p_nodes = static_cast<int>(resolve_int(c, "p-nodes"));
  double rel_tol = resolve_double(c, "rel-tol");

  Output out = make_output(c);
  out.header(c);
  out.columns({"a_m", "pressure_te_pa", "pressure_tm_pa", "r_te", "r_tm"});
  for (long k = 0; k < steps; ++k) {
    double t = static_cast<double>(k) / static_cast<double>(steps - 1);
    double a = a_min * std::pow(a_max / a_min, t);
    casimir::PhysicalSetup setup(a);
    casimir::QuadratureSpec quad = casimir::QuadratureSpec::defaults(setup);
    quad.p_nodes = p_nodes;
    quad.rel_tol = rel_tol;
    casimir::PressureResult p =
        casimir::pressure_imag_frequency(casimir::PlatePair(diel), setup, quad);
    casimir::EffectiveReflection er = casimir::effective_reflection(p.te, p.tm, setup);
    out.row({fmt(a), fmt(p.te), fmt(p.tm), fmt(er.te), fmt(er.tm)});
  }
  out.commit();
}

void run_spectrum_material(Command& c) {
  casimir::PhysicalSetup setup = resolve_setup(c);
  std::string model =
      resolve_choice(c, "model", {"drude", "plasma", "const-eps", "const-r", "ideal", "table"});
  casimir::PlatePair plates = resolve_plates(c, model);
  casimir::QuadratureSpec quad = casimir::QuadratureSpec::defaults(setup);
  quad.p_nodes = static_cast<int>(resolve_int(c, "p-nodes"));
  quad.rel_tol = resolve_double(c, "rel-tol");
  double xi_min = resolve_double(c, "xi-min");
  double xi_max = resolve_double(c, "xi-max");
  double xi_step = resolve_double(c, "xi-step");
  if (!(xi_min > 0.0) || xi_max < xi_min || !(xi_step > 0.0))
    fail(3, "need 0 < xi-min <= xi-max and xi-step > 0");

  Output out = make_output(c);
  out.header(c);
  out.columns(kSpectrumColumns);
  long n = std::lround(std::floor((xi_max - xi_min) / xi_step + 1e-9));
  for (long k = 0; k <= n; ++k) {
    double xi = xi_min + static_cast<double>(k) * xi_step;
    out.row(spectrum_row(
        setup, casimir::material_spectral_density(plates, setup, setup.omega(xi), quad)));
  }
  out.commit();
}

void run_window_shape(Command& c) {
  casimir::PhysicalSetup setup = resolve_setup(c);
  casimir::WindowSpec window = resolve_window(c);
  double omega_max = resolve_frequency(c, "omega-max");
  long steps = resolve_int(c, "steps");
  if (steps < 2) fail(3, "steps must be at least 2");

  Output out = make_output(c);
  out.header(c);
  out.columns({"omega_rad_s", "xi", "factor"});
  for (long k = 0; k <= steps; ++k) {
    double omega = omega_max * static_cast<double>(k) / static_cast<double>(steps);
    out.row({fmt(omega), fmt(setup.xi(omega)),
             fmt(casimir::window_factor(window, omega, setup.a))});
  }
  out.commit();
}

void run_window_diff(Command& c) {
  casimir::PhysicalSetup setup = resolve_setup(c);
  std::string model = resolve_choice(c, "model", {"drude", "plasma", "const-eps", "table"});
  casimir::DielectricModel diel = resolve_dielectric(c, model);
  std::string method = resolve_choice(c, "method", {"imag", "real"});
  casimir::QuadratureSpec quad = resolve_quad(c, setup);
  casimir::Method m =
      method == "imag" ? casimir::Method::imag_frequency : casimir::Method::real_frequency;

  // A lone --delta gives one row; delta-from/delta-to/delta-steps sweep it.
  std::vector<double> deltas;
  Param& from = c.get("delta-from");
  Param& to = c.get("delta-to");
  if (from.value.empty() != to.value.empty())
    fail(3, "delta-from and delta-to must be given together");
  if (!from.value.empty()) {
    double d0 = resolve_double(c, "delta-from");
    double d1 = resolve_double(c, "delta-to");
    long steps = resolve_int(c, "delta-steps");
    if (steps < 2) fail(3, "delta-steps must be at least 2");
    if (!(d0 >= 0.0 && d1 <= 1.0 && d0 <= d1)) fail(3, "need 0 <= delta-from <= delta-to <= 1");
    for (long k = 0; k < steps; ++k)
      deltas.push_back(d0 + (d1 - d0) * static_cast<double>(k) / static_cast<double>(steps - 1));
  } else {
    deltas.push_back(resolve_double(c, "delta"));
  }
  casimir::WindowSpec window = resolve_window(c);

  Output out = make_output(c);
  out.header(c);
  out.columns({"delta", "diff_pa"});
  for (double d : deltas) {
    casimir::WindowSpec w(window.omega1, window.omega2, d, window.s, window.mode);
    out.row({fmt(d), fmt(casimir::window_force_difference(diel, w, setup, m, quad))});
  }
  out.commit();
}

void run_pressure(Command& c) {
  casimir::PhysicalSetup setup = resolve_setup(c);
  std::string model =
      resolve_choice(c, "model", {"drude", "plasma", "const-eps", "const-r", "ideal", "table"});
  Param& mp = c.get("method");
  if (mp.value.empty()) mp.value = (model == "ideal" || model == "const-r") ? "closed" : "imag";
  std::string method = resolve_choice(c, "method", {"closed", "imag", "real"});

  Output out = make_output(c);
  out.header(c);
  out.columns({"method", "value_pa", "propagating_pa", "evanescent_pa", "te_pa", "tm_pa",
               "error_pa"});
  if (method == "closed") {
    if (model != "ideal" && model != "const-r")
      fail(3, "the closed form only covers ideal and const-r plates; use --method imag or real");
    casimir::PlatePair plates = resolve_plates(c, model);
    const casimir::ConstantReflection& refl = std::get<casimir::ConstantReflection>(plates.first);
    double total = casimir::constant_r_pressure(refl, setup);
    double te = casimir::constant_r_pressure(
        casimir::ConstantReflection(refl.get(casimir::Polarization::te), casimir::complex(0.0)),
        setup);
    out.row({method, fmt(total), fmt(total), fmt(0.0), fmt(te), fmt(total - te), fmt(0.0)});
  } else {
    casimir::QuadratureSpec quad = resolve_quad(c, setup);
    casimir::PlatePair plates = resolve_plates(c, model);
    casimir::PressureResult p =
        method == "imag" ? casimir::pressure_imag_frequency(plates, setup, quad)
                         : casimir::pressure_real_frequency(plates, setup, quad);
    out.row({method, fmt(p.value), fmt(p.propagating), fmt(p.evanescent), fmt(p.te), fmt(p.tm),
             fmt(p.error_estimate)});
  }
  out.commit();
}

// ---- wiring -----------------------------------------------------------------

const char* kSeedConfig =
    "# reference parameter set: gold plates at 100 nm with the hydrogen-switch window\n"
    "model = drude\n"
    "omega-p = 9eV\n"
    "nu = 0.035eV\n"
    "a = 100nm\n"
    "omega1 = 7.5e14rad_s\n"
    "omega2 = 9.4e15rad_s\n"
    "delta = 1\n"
    "s = 20\n"
    "window-mode = sharp\n";

int dispatch(int argc, char** argv) {
  CLI::App app{"Casimir pressure and frequency-spectrum calculator"};
  app.require_subcommand(0, 1);
  bool seed = false;
  app.add_flag("--seed-defaults", seed, "Print the reference parameter set as a config file");

  std::vector<std::unique_ptr<Command>> commands;
  auto make = [&](const std::string& name, const std::string& desc,
                  std::function<void(Command&)> run) -> Command& {
    commands.push_back(std::make_unique<Command>());
    Command& c = *commands.back();
    c.app = app.add_subcommand(name, desc);
    c.app->add_option("--config", c.config_path, "Key-value config file; flags override it");
    c.run = std::move(run);
    return c;
  };

  {
    Command& c = make("spectrum-const-r", "Frequency spectrum for constant reflection",
                      run_spectrum_const_r);
    add_setup_param(c);
    c.add("r", "", "Reflection coefficient, real, shared by TE and TM (required)");
    c.add("xi-min", "0", "First xi = 2 omega a / c of the grid");
    c.add("xi-max", "50", "Last xi of the grid");
    c.add("xi-step", "0.1", "Grid spacing in xi");
    add_output_params(c);
  }
  {
    Command& c = make("pressure-const-r-sweep", "Closed-form pressure across reflectivities",
                      run_pressure_const_r_sweep);
    add_setup_param(c);
    c.add("r-min", "0", "First reflection coefficient");
    c.add("r-max", "1", "Last reflection coefficient");
    c.add("r-steps", "101", "Number of sweep points");
    add_output_params(c);
  }
  {
    Command& c = make("effective-r", "Reflectivity that reproduces the computed pressure",
                      run_effective_r);
    c.add("a-min", "50nm", "First separation (nm|um|m)");
    c.add("a-max", "2um", "Last separation (nm|um|m)");
    c.add("a-steps", "25", "Number of separations on a log grid");
    add_model_params(c, "drude, plasma, const-eps, table");
    c.add("p-nodes", "16", "Gauss-Legendre nodes per angular panel");
    c.add("rel-tol", "1e-06", "Relative tolerance of the adaptive passes");
    add_output_params(c);
  }
  {
    Command& c = make("spectrum-material", "Frequency spectrum for dispersive plates",
                      run_spectrum_material);
    add_setup_param(c);
    add_model_params(c, "drude, plasma, const-eps, const-r, ideal, table");
    c.add("xi-min", "0.05", "First xi of the grid (positive)");
    c.add("xi-max", "24", "Last xi of the grid");
    c.add("xi-step", "0.05", "Grid spacing in xi");
    c.add("p-nodes", "16", "Gauss-Legendre nodes per angular panel");
    c.add("rel-tol", "1e-06", "Relative tolerance of the adaptive passes");
    add_output_params(c);
  }
  {
    Command& c = make("window-shape", "Transparency-window factor across frequency",
                      run_window_shape);
    add_setup_param(c);
    add_window_params(c);
    c.add("omega-max", "1.88e16rad_s", "Last frequency of the grid (eV|rad_s)");
    c.add("steps", "400", "Number of grid intervals");
    add_output_params(c);
  }
  {
    Command& c = make("window-diff", "Pressure change from a transparency window",
                      run_window_diff);
    add_setup_param(c);
    add_model_params(c, "drude, plasma, const-eps, table");
    add_window_params(c);
    c.add("method", "imag", "Integration route: imag or real");
    c.add("delta-from", "", "Sweep start for the window depth");
    c.add("delta-to", "", "Sweep end for the window depth");
    c.add("delta-steps", "6", "Number of sweep points");
    add_quad_params(c, "20", "0.05");
    add_output_params(c);
  }
  {
    Command& c = make("pressure", "Single pressure record", run_pressure);
    add_setup_param(c);
    add_model_params(c, "drude, plasma, const-eps, const-r, ideal, table");
    c.add("method", "", "closed, imag or real (default: closed for ideal/const-r, else imag)");
    add_quad_params(c, "100", "0.01");
    add_output_params(c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (seed) {
    std::cout << kSeedConfig;
    return 0;
  }
  Command* active = nullptr;
  for (auto& c : commands)
    if (c->app->parsed()) active = c.get();
  if (!active) {
    std::cerr << app.help();
    return 2;
  }
  std::set<std::string> all_keys = {"command", "artifact-version"};
  for (auto& c : commands)
    for (auto& p : c->params) all_keys.insert(p->key);
  apply_config(*active, all_keys);
  active->run(*active);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const casimir::AccuracyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const casimir::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const casimir::ResonanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const casimir::SingularInterfaceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const casimir::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const casimir::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
