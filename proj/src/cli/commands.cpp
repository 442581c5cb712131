#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fgsi/cli.hpp"
#include "fgsi/diagnostics.hpp"
#include "fgsi/reference.hpp"
#include "fgsi/scan.hpp"

namespace fgsi::cli {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain:
    case ErrorKind::Singularity:
    case ErrorKind::Overflow:
    case ErrorKind::Convergence:
      return kNumericalFailure;
    case ErrorKind::Input:
    case ErrorKind::InfeasibleEnergy:
    case ErrorKind::Parameter:
    case ErrorKind::Config:
      return kConfigError;
  }
  return kConfigError;
}

namespace {

Error field_error(const std::string& field, const std::string& what) {
  return Error(ErrorKind::Config, "--" + field + ": " + what);
}

double number(const std::string& field, const std::string& text) {
  try {
    return parse_number(text);
  } catch (const Error& e) {
    throw field_error(field, e.what());
  }
}

long integer(const std::string& field, const std::string& text) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw field_error(field, "expected an integer, got '" + text + "'");
  return v;
}

std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : " ") + n;
  return out;
}

// Fixed-step methods only; rkf89 is handled by the commands that accept it.
Method fixed_method(const std::string& field, const std::string& name) {
  if (name == "rkf89") throw field_error(field, "rkf89 is adaptive and not allowed here");
  for (const auto& n : method_names())
    if (n == name) return Method::by_name(name);
  throw field_error(field, "unknown scheme '" + name + "' (valid: " + joined(method_names()) + ")");
}

void check_method_name(const std::string& field, const std::string& name) {
  for (const auto& n : method_names())
    if (n == name) return;
  throw field_error(field, "unknown scheme '" + name + "' (valid: " + joined(method_names()) + ")");
}

// Options shared by the orbit commands. Everything numeric is kept as text
// and parsed by parse_number so fractions and pi work everywhere.
struct Common {
  std::string config;
  std::string system = "mhh";
  std::string scheme = "omf4gp";
  std::string tau = "0.1";
  std::string steps;
  std::string t_end;
  std::string ic;
  std::string energy;
  std::string closure;
  std::string out = "-";
  std::string sample_every = "1";
};

struct Orbit {
  SystemPtr system;
  State s0;
  double tau = 0.0;
  long n_steps = 0;
  long sample_every = 1;
};

void add_common(CLI::App* app, Common& c, bool with_steps = true) {
  app->add_option("--config", c.config, "flat key=value file; flags take precedence");
  app->add_option("--system", c.system, "mhh, hh or spring")->capture_default_str();
  app->add_option("--scheme", c.scheme, "integration scheme")->capture_default_str();
  app->add_option("--tau", c.tau, "time step")->capture_default_str();
  if (with_steps) {
    app->add_option("--steps", c.steps, "number of steps");
    app->add_option("--t-end", c.t_end, "integration time (alternative to --steps)");
    app->add_option("--sample-every", c.sample_every, "write every k-th step")
        ->capture_default_str();
  }
  app->add_option("--ic", c.ic, "initial values, e.g. x=0,y=-2.02,py=0");
  app->add_option("--energy", c.energy, "energy used to solve the closure momentum");
  app->add_option("--closure", c.closure, "momentum solved from --energy");
  app->add_option("--out", c.out, "output file, - for stdout")->capture_default_str();
}

State initial_state(const SystemModel& system, const Common& c) {
  if (c.ic.empty()) throw field_error("ic", "an initial condition is required");
  State s(Vec::Zero(system.dim()), Vec::Zero(system.dim()), 0.0);
  std::vector<std::pair<std::string, double>> values;
  try {
    values = parse_assignments(c.ic);
  } catch (const Error& e) {
    throw field_error("ic", e.what());
  }
  for (const auto& [name, value] : values) {
    if (name == c.closure) throw field_error("ic", "'" + name + "' is the closure momentum");
    const auto [is_p, idx] = variable_index(system, name);
    (is_p ? s.p : s.q)[idx] = value;
  }
  if (c.energy.empty() != c.closure.empty())
    throw field_error(c.energy.empty() ? "energy" : "closure",
                      "--energy and --closure go together");
  try {
    if (!c.energy.empty()) {
      const auto [is_p, idx] = variable_index(system, c.closure);
      if (!is_p) throw field_error("closure", "'" + c.closure + "' is not a momentum");
      return solve_missing_momentum(system, s, idx, number("energy", c.energy));
    }
    validate_state(system, s);
  } catch (const Error& e) {
    // A point that cannot be started is a configuration problem.
    if (e.kind() == ErrorKind::Config) throw;
    throw field_error("ic", e.what());
  }
  return s;
}

double positive(const std::string& field, const std::string& text) {
  const double v = number(field, text);
  if (!(v > 0.0)) throw field_error(field, "must be positive");
  return v;
}

long step_count(const Common& c, double tau) {
  if (!c.steps.empty() && !c.t_end.empty())
    throw field_error("steps", "give either --steps or --t-end, not both");
  if (c.steps.empty() && c.t_end.empty()) throw field_error("steps", "--steps or --t-end is required");
  if (!c.steps.empty()) {
    const long n = integer("steps", c.steps);
    if (n <= 0) throw field_error("steps", "must be positive");
    return n;
  }
  const double t = positive("t-end", c.t_end);
  const double n = std::round(t / tau);
  if (n < 1.0 || std::abs(n * tau - t) > 1e-9 * t)
    throw field_error("t-end", "must be a positive multiple of --tau");
  return static_cast<long>(n);
}

Orbit orbit(const Common& c, bool with_steps = true) {
  Orbit o;
  try {
    o.system = make_system(c.system);
  } catch (const Error& e) {
    throw field_error("system", e.what());
  }
  o.tau = positive("tau", c.tau);
  if (with_steps) {
    o.n_steps = step_count(c, o.tau);
    o.sample_every = integer("sample-every", c.sample_every);
    if (o.sample_every <= 0) throw field_error("sample-every", "must be positive");
  }
  o.s0 = initial_state(*o.system, c);
  return o;
}

// Writes to --out (or the given stream for "-") once the command is done.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {}

  void write(const CsvTable& table) {
    if (path_ == "-") {
      write_csv(fallback_, table);
      fallback_.flush();
      return;
    }
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw field_error("out", "cannot open '" + path_ + "' for writing");
    write_csv(f, table);
    if (!f) throw field_error("out", "write to '" + path_ + "' failed");
  }

 private:
  std::string path_;
  std::ostream& fallback_;
};

std::vector<std::string> state_header(const SystemModel& system) {
  std::vector<std::string> h{"t"};
  for (const auto& n : system.coordinate_names()) h.push_back(n);
  for (const auto& n : system.momentum_names()) h.push_back(n);
  return h;
}

std::vector<double> state_row(const State& s) {
  std::vector<double> row{s.t};
  for (int i = 0; i < s.dim(); ++i) row.push_back(s.q[i]);
  for (int i = 0; i < s.dim(); ++i) row.push_back(s.p[i]);
  return row;
}

// Numerical failures keep the partial output and report exit code 3.
int finish(const std::optional<Failure>& failure, std::ostream& err) {
  if (!failure) return kOk;
  err << "error: " << failure->message << "\n";
  return exit_code_for(failure->kind);
}

Trajectory run_orbit(const std::string& scheme, const Orbit& o) {
  if (scheme == "rkf89")
    return rkf89_integrate(*o.system, o.s0, o.s0.t + o.n_steps * o.tau, o.sample_every * o.tau);
  return integrate(fixed_method("scheme", scheme), *o.system, o.s0, o.tau, o.n_steps,
                   o.sample_every);
}

// ---------------------------------------------------------------------------

int cmd_integrate(const Common& c, std::ostream& out, std::ostream& err) {
  check_method_name("scheme", c.scheme);
  const Orbit o = orbit(c);
  const Trajectory traj = run_orbit(c.scheme, o);
  CsvTable table;
  table.header = state_header(*o.system);
  table.header.push_back("H");
  table.header.push_back("dH");
  const double e0 = energy(*o.system, o.s0);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    auto row = state_row(traj.states[k]);
    row.push_back(traj.energies[k]);
    row.push_back(traj.energies[k] - e0);
    table.add_row(row);
  }
  Sink(c.out, out).write(table);
  return finish(traj.failure, err);
}

struct ErrorsOptions {
  std::string reference = "rkf89";
  std::string ref_tol = "1e-14";
};

int cmd_errors(const Common& c, const ErrorsOptions& e, std::ostream& out, std::ostream& err) {
  check_method_name("scheme", c.scheme);
  if (e.reference != "rkf89") fixed_method("reference", e.reference);
  const Orbit o = orbit(c);
  const Trajectory traj = run_orbit(c.scheme, o);

  std::vector<double> times;
  for (const auto& s : traj.states) times.push_back(s.t);
  Trajectory ref;
  if (e.reference == "rkf89") {
    RkfOptions opts;
    opts.tol = positive("ref-tol", e.ref_tol);
    ref = rkf89_integrate(*o.system, o.s0, times, opts);
  } else {
    ref = integrate(Method::by_name(e.reference), *o.system, o.s0, o.tau, o.n_steps,
                    o.sample_every);
  }
  if (ref.failure) {
    err << "error: reference: " << ref.failure->message << "\n";
    return exit_code_for(ref.failure->kind);
  }
  ref.states.resize(std::min(ref.size(), traj.size()));
  ref.energies.resize(ref.states.size());

  const ErrorSeries dh = energy_error_series(traj, energy(*o.system, o.s0));
  const ErrorSeries dr = position_error_series(traj, ref);
  CsvTable table;
  table.header = {"t", "abs_dH", "abs_dr"};
  for (std::size_t k = 0; k < dr.values.size(); ++k)
    table.add_row(std::vector<double>{dr.times[k], dh.values[k], dr.values[k]});
  Sink(c.out, out).write(table);
  return finish(traj.failure, err);
}

int cmd_poincare(const Common& c, std::ostream& out) {
  const Method method = fixed_method("scheme", c.scheme);
  const Orbit o = orbit(c, false);
  if (c.t_end.empty()) throw field_error("t-end", "is required");
  const double t_end = positive("t-end", c.t_end);
  const SectionPoints sec =
      poincare_section(method, *o.system, o.s0, o.tau, t_end, default_section(*o.system));
  CsvTable table;
  table.header = state_header(*o.system);
  for (const auto& s : sec.points) table.add_row(state_row(s));
  Sink(c.out, out).write(table);
  return kOk;
}

struct FliFlags {
  std::string d0 = "1e-8";
  std::string renorm = "1e6";
  std::string direction;
};

int cmd_fli(const Common& c, const FliFlags& f, std::ostream& out) {
  const Method method = fixed_method("scheme", c.scheme);
  const Orbit o = orbit(c);
  FliOptions opts;
  opts.d0 = number("d0", f.d0);
  opts.renorm_threshold = number("renorm", f.renorm);
  opts.sample_every = o.sample_every;
  if (!f.direction.empty()) {
    const int n = 2 * o.system->dim();
    PhaseVec d = PhaseVec::Zero(n);
    std::vector<std::pair<std::string, double>> values;
    try {
      values = parse_assignments(f.direction);
    } catch (const Error& e) {
      throw field_error("direction", e.what());
    }
    for (const auto& [name, value] : values) {
      const auto [is_p, idx] = variable_index(*o.system, name);
      d[(is_p ? o.system->dim() : 0) + idx] = value;
    }
    opts.direction = d;
  }
  const FliResult r = fli(method, *o.system, o.s0, o.tau, o.n_steps * o.tau, opts);
  CsvTable table;
  table.header = {"t", "fli"};
  for (std::size_t k = 0; k < r.times.size(); ++k)
    table.add_row(std::vector<double>{r.times[k], r.values[k]});
  Sink(c.out, out).write(table);
  return kOk;
}

struct ZeroOneFlags {
  std::string t_max = "1000";
  std::string c = "1.8";
  std::string window = "1e5";
  std::string sample_step = "1";
  std::string lags = "1000";
  std::string random_c = "0";
  std::string seed = "0";
  std::string observable;
};

ZeroOneOptions zero_one_options(const ZeroOneFlags& f, const SystemModel& system) {
  ZeroOneOptions z;
  z.c = number("c", f.c);
  z.T = positive("window", f.window);
  z.sample_step = positive("sample-step", f.sample_step);
  z.lag_count = static_cast<int>(integer("lags", f.lags));
  z.random_c = static_cast<int>(integer("random-c", f.random_c));
  const long seed = integer("seed", f.seed);
  if (seed < 0) throw field_error("seed", "must be non-negative");
  z.seed = static_cast<std::uint64_t>(seed);
  if (!f.observable.empty()) {
    const auto [is_p, idx] = variable_index(system, f.observable);
    z.observable = [is_p, idx](const State& s) { return is_p ? s.p[idx] : s.q[idx]; };
  }
  return z;
}

int cmd_zero_one(const Common& c, const ZeroOneFlags& f, std::ostream& out) {
  const Method method = fixed_method("scheme", c.scheme);
  const Orbit o = orbit(c, false);
  const ZeroOneOptions opts = zero_one_options(f, *o.system);
  const ZeroOneResult r =
      zero_one_test(method, *o.system, o.s0, o.tau, positive("t-max", f.t_max), opts);
  CsvTable table;
  table.header = {"t", "lnL"};
  for (std::size_t k = 0; k < r.lag_times.size(); ++k)
    table.add_row(std::vector<double>{r.lag_times[k], r.log_msd[k]});
  table.rows.push_back({"Lambda", format_double(r.lambda)});
  Sink(c.out, out).write(table);
  return kOk;
}

int cmd_detcheck(const Common& c, std::ostream& out) {
  const Method method = fixed_method("scheme", c.scheme);
  const Orbit o = orbit(c);
  const auto samples =
      jacobian_determinant(method, *o.system, o.s0, o.tau, o.n_steps, o.sample_every);
  CsvTable table;
  table.header = {"t", "det_minus_1"};
  for (const auto& s : samples) table.add_row(std::vector<double>{s.t, s.det - 1.0});
  Sink(c.out, out).write(table);
  return kOk;
}

struct ScanFlags {
  std::string config;
  std::string system = "mhh";
  std::string scheme = "omf4gp";
  std::string tau = "0.1";
  std::string swept = "y";
  std::string start = "-2.3";
  std::string stop = "-0.95";
  std::string count = "500";
  std::string fixed;
  std::string energy = "1/120";
  std::string closure = "px";
  std::string indicator = "fli";
  std::string t_end = "3000";
  std::string threshold;
  std::string workers = "0";
  std::string out = "-";
  FliFlags fli;
  ZeroOneFlags zero_one;
};

int cmd_scan(const ScanFlags& f, std::ostream& out, std::ostream& err) {
  ScanSpec spec;
  spec.system = f.system;
  spec.scheme = f.scheme;
  fixed_method("scheme", f.scheme);
  spec.tau = positive("tau", f.tau);
  spec.swept = f.swept;
  spec.start = number("start", f.start);
  spec.stop = number("stop", f.stop);
  spec.count = static_cast<int>(integer("count", f.count));
  if (!f.fixed.empty()) {
    try {
      spec.fixed = parse_assignments(f.fixed);
    } catch (const Error& e) {
      throw field_error("fixed", e.what());
    }
  }
  spec.energy = number("energy", f.energy);
  spec.closure = f.closure;
  if (f.indicator == "fli") {
    spec.indicator = Indicator::Fli;
  } else if (f.indicator == "zero-one") {
    spec.indicator = Indicator::ZeroOne;
  } else {
    throw field_error("indicator", "expected fli or zero-one, got '" + f.indicator + "'");
  }
  spec.t_end = positive("t-end", f.t_end);
  if (!f.threshold.empty()) spec.threshold = number("threshold", f.threshold);
  spec.workers = static_cast<int>(integer("workers", f.workers));
  if (spec.workers < 0) throw field_error("workers", "must be non-negative");
  spec.fli.d0 = number("d0", f.fli.d0);
  spec.fli.renorm_threshold = number("renorm", f.fli.renorm);
  validate_scan(spec);
  spec.zero_one = zero_one_options(f.zero_one, *make_system(spec.system));
  const ScanResult r = run_scan(spec);

  CsvTable table;
  table.header = {"swept_value", "indicator", "classification", "seconds"};
  for (const auto& p : r.points) {
    table.rows.push_back({format_double(p.value), format_double(p.indicator),
                          to_string(p.classification), format_double(p.seconds)});
    if (!p.message.empty())
      err << f.swept << "=" << format_double(p.value) << ": " << p.message << "\n";
  }
  Sink(f.out, out).write(table);
  return kOk;
}

struct ConvergenceFlags {
  std::string taus = "0.2,0.1,0.05,0.025";
  std::string t_end = "10";
  std::string ref_tol = "1e-14";
};

int cmd_convergence(const Common& c, const ConvergenceFlags& f, std::ostream& out) {
  const Method method = fixed_method("scheme", c.scheme);
  const Orbit o = orbit(c, false);
  std::vector<double> taus;
  std::stringstream list(f.taus);
  for (std::string item; std::getline(list, item, ',');) taus.push_back(positive("taus", item));
  if (taus.size() < 2) throw field_error("taus", "needs at least two step sizes");
  RkfOptions ref;
  ref.tol = positive("ref-tol", f.ref_tol);
  const ConvergenceResult r =
      convergence(method, *o.system, o.s0, taus, positive("t-end", f.t_end), ref);
  CsvTable table;
  table.header = {"tau", "err"};
  for (std::size_t k = 0; k < r.taus.size(); ++k)
    table.add_row(std::vector<double>{r.taus[k], r.errors[k]});
  table.rows.push_back({"slope", format_double(r.slope)});
  Sink(c.out, out).write(table);
  return kOk;
}

struct TablesFlags {
  std::string config;
  std::vector<int> tables;
  bool check = false;
  std::string out = "-";
};

int cmd_tables(const TablesFlags& f, std::ostream& out, std::ostream& err) {
  for (const int t : f.tables)
    if (t != 1 && t != 2 && t != 4) throw field_error("table", "expected 1, 2 or 4");
  const auto results = evaluate_tables(f.tables);
  CsvTable table;
  table.header = {"table",  "system", "tau",   "method",   "metric",
                  "expected", "value", "within", "relative_info", "seconds_info", "note"};
  int misses = 0;
  for (const auto& r : results) {
    const auto& e = r.entry;
    if (!r.within()) ++misses;
    table.rows.push_back({std::to_string(e.table), e.system, format_double(e.tau), e.method,
                          e.metric, format_double(e.expected), format_double(r.value),
                          r.within() ? "yes" : "no", format_double(r.relative),
                          format_double(r.seconds), r.note});
  }
  Sink(f.out, out).write(table);
  if (f.check && misses > 0) {
    err << misses << " of " << results.size() << " entries outside tolerance\n";
    return kCheckMismatch;
  }
  return kOk;
}

// Keys from --config fill options that were not given on the command line.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  for (const auto& [key, value] : read_config(path)) {
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config")
      throw Error(ErrorKind::Config, "config key '" + key + "' is not an option of '" +
                                         sub->get_name() + "'");
    if (opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw field_error(key, e.what());
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symplectic and force-gradient integrators with chaos diagnostics", "fgsi"};
  app.require_subcommand(1);

  Common common;
  ErrorsOptions errors_opts;
  FliFlags fli_flags;
  ZeroOneFlags zo_flags;
  ScanFlags scan_flags;
  ConvergenceFlags conv_flags;
  TablesFlags tables_flags;

  std::vector<std::pair<CLI::App*, std::function<int()>>> commands;
  auto orbit_command = [&](const char* name, const char* help, bool with_steps) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, common, with_steps);
    return sub;
  };

  CLI::App* integrate_cmd = orbit_command("integrate", "integrate one orbit", true);
  commands.emplace_back(integrate_cmd, [&] { return cmd_integrate(common, out, err); });

  CLI::App* errors_cmd = orbit_command("errors", "energy and position errors", true);
  errors_cmd->add_option("--reference", errors_opts.reference, "reference method")
      ->capture_default_str();
  errors_cmd->add_option("--ref-tol", errors_opts.ref_tol, "rkf89 tolerance")
      ->capture_default_str();
  commands.emplace_back(errors_cmd, [&] { return cmd_errors(common, errors_opts, out, err); });

  CLI::App* poincare_cmd = orbit_command("poincare", "Poincare section points", false);
  poincare_cmd->add_option("--t-end", common.t_end, "integration time");
  commands.emplace_back(poincare_cmd, [&] { return cmd_poincare(common, out); });

  CLI::App* fli_cmd = orbit_command("fli", "fast Lyapunov indicator series", true);
  fli_cmd->add_option("--d0", fli_flags.d0, "initial separation")->capture_default_str();
  fli_cmd->add_option("--renorm", fli_flags.renorm, "renormalization ratio")
      ->capture_default_str();
  fli_cmd->add_option("--direction", fli_flags.direction, "deviation, e.g. x=1,py=1");
  commands.emplace_back(fli_cmd, [&] { return cmd_fli(common, fli_flags, out); });

  auto add_zero_one = [](CLI::App* sub, ZeroOneFlags& z) {
    sub->add_option("--c", z.c, "frequency of the translation variables")->capture_default_str();
    sub->add_option("--window", z.window, "averaging window T")->capture_default_str();
    sub->add_option("--sample-step", z.sample_step, "sampling interval")->capture_default_str();
    sub->add_option("--lags", z.lags, "number of log-spaced lags")->capture_default_str();
    sub->add_option("--random-c", z.random_c, "median over this many random c")
        ->capture_default_str();
    sub->add_option("--seed", z.seed, "seed for --random-c")->capture_default_str();
    sub->add_option("--observable", z.observable, "variable name (default first coordinate)");
  };
  CLI::App* zo_cmd = orbit_command("zero-one", "0-1 test for chaos", false);
  zo_cmd->add_option("--t-max", zo_flags.t_max, "largest lag")->capture_default_str();
  add_zero_one(zo_cmd, zo_flags);
  commands.emplace_back(zo_cmd, [&] { return cmd_zero_one(common, zo_flags, out); });

  CLI::App* det_cmd = orbit_command("detcheck", "Jacobian determinant along an orbit", true);
  commands.emplace_back(det_cmd, [&] { return cmd_detcheck(common, out); });

  CLI::App* scan_cmd = app.add_subcommand("scan", "chaos indicator over a grid of initial values");
  {
    ScanFlags& s = scan_flags;
    scan_cmd->add_option("--config", s.config, "flat key=value file; flags take precedence");
    scan_cmd->add_option("--system", s.system)->capture_default_str();
    scan_cmd->add_option("--scheme", s.scheme)->capture_default_str();
    scan_cmd->add_option("--tau", s.tau)->capture_default_str();
    scan_cmd->add_option("--swept", s.swept, "swept variable")->capture_default_str();
    scan_cmd->add_option("--start", s.start)->capture_default_str();
    scan_cmd->add_option("--stop", s.stop)->capture_default_str();
    scan_cmd->add_option("--count", s.count, "grid points, both ends included")
        ->capture_default_str();
    scan_cmd->add_option("--fixed", s.fixed, "other initial values, e.g. x=0");
    scan_cmd->add_option("--energy", s.energy)->capture_default_str();
    scan_cmd->add_option("--closure", s.closure)->capture_default_str();
    scan_cmd->add_option("--indicator", s.indicator, "fli or zero-one")->capture_default_str();
    scan_cmd->add_option("--t-end", s.t_end, "FLI time or largest 0-1 lag")
        ->capture_default_str();
    scan_cmd->add_option("--threshold", s.threshold, "chaotic at or above (FLI 4, 0-1 0.5)");
    scan_cmd->add_option("--workers", s.workers, "threads, 0 for all cores")
        ->capture_default_str();
    scan_cmd->add_option("--d0", s.fli.d0)->capture_default_str();
    scan_cmd->add_option("--renorm", s.fli.renorm)->capture_default_str();
    add_zero_one(scan_cmd, s.zero_one);
    scan_cmd->add_option("--out", s.out)->capture_default_str();
  }
  commands.emplace_back(scan_cmd, [&] { return cmd_scan(scan_flags, out, err); });

  CLI::App* conv_cmd = orbit_command("convergence", "error order against step size", false);
  conv_cmd->add_option("--taus", conv_flags.taus, "comma separated step sizes")
      ->capture_default_str();
  conv_cmd->add_option("--t-end", conv_flags.t_end)->capture_default_str();
  conv_cmd->add_option("--ref-tol", conv_flags.ref_tol)->capture_default_str();
  commands.emplace_back(conv_cmd, [&] { return cmd_convergence(common, conv_flags, out); });

  CLI::App* tables_cmd = app.add_subcommand("tables", "regenerate the error tables");
  tables_cmd->add_option("--config", tables_flags.config);
  tables_cmd->add_option("--table", tables_flags.tables, "1, 2 or 4; repeatable (default all)");
  tables_cmd->add_flag("--check", tables_flags.check, "exit 4 when an entry is off");
  tables_cmd->add_option("--out", tables_flags.out)->capture_default_str();
  commands.emplace_back(tables_cmd, [&] { return cmd_tables(tables_flags, out, err); });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    for (auto& [sub, fn] : commands) {
      if (!sub->parsed()) continue;
      std::string config;
      if (CLI::Option* opt = sub->get_option_no_throw("--config"); opt && opt->count() > 0)
        config = opt->as<std::string>();
      apply_config(sub, config);
      return fn();
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace fgsi::cli
