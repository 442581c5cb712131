#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "fgsi/cli.hpp"
#include "fgsi/diagnostics.hpp"
#include "fgsi/reference.hpp"
#include "fgsi/scan.hpp"

namespace py = pybind11;
using namespace fgsi;

namespace {

using Array = py::array_t<double>;

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

State make_state(const SystemModel& sys, const std::vector<double>& q, const std::vector<double>& p,
                 double t) {
  if (static_cast<int>(q.size()) != sys.dim() || static_cast<int>(p.size()) != sys.dim())
    throw Error(ErrorKind::Input, "q and p must have the system dimension");
  return State(to_vec(q), to_vec(p), t);
}

Array rows(const std::vector<State>& states, bool momenta) {
  const py::ssize_t n = static_cast<py::ssize_t>(states.size());
  const py::ssize_t d = states.empty() ? 0 : states.front().dim();
  Array out({n, d});
  auto a = out.mutable_unchecked<2>();
  for (py::ssize_t k = 0; k < n; ++k)
    for (py::ssize_t i = 0; i < d; ++i)
      a(k, i) = momenta ? states[k].p[i] : states[k].q[i];
  return out;
}

Array column(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict trajectory_dict(const Trajectory& tr) {
  std::vector<double> t;
  for (const auto& s : tr.states) t.push_back(s.t);
  py::dict d;
  d["t"] = column(t);
  d["q"] = rows(tr.states, false);
  d["p"] = rows(tr.states, true);
  d["H"] = column(tr.energies);
  d["failure"] = tr.failure ? py::object(py::str(tr.failure->message)) : py::none();
  return d;
}

Trajectory run(const std::string& method, const SystemModel& sys, const State& s0, double tau,
               long n_steps, long sample_every) {
  if (method == "rkf89")
    return rkf89_integrate(sys, s0, s0.t + n_steps * tau, sample_every * tau);
  return integrate(Method::by_name(method), sys, s0, tau, n_steps, sample_every);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Symplectic, force-gradient and extended force-gradient integrators.";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
      if (e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Parameter ||
          e.kind() == ErrorKind::Input || e.kind() == ErrorKind::InfeasibleEnergy)
        PyErr_SetString(PyExc_ValueError, msg.c_str());
      else
        PyErr_SetString(PyExc_ArithmeticError, msg.c_str());
    }
  });

  py::class_<SystemModel, std::shared_ptr<SystemModel>>(m, "System")
      .def_property_readonly("id", [](const SystemModel& s) { return std::string(s.id()); })
      .def_property_readonly("dim", &SystemModel::dim)
      .def_property_readonly("coordinates", &SystemModel::coordinate_names)
      .def_property_readonly("momenta", &SystemModel::momentum_names)
      .def("energy",
           [](const SystemModel& s, const std::vector<double>& q, const std::vector<double>& p) {
             return energy(s, make_state(s, q, p, 0.0));
           })
      .def("__repr__", [](const SystemModel& s) { return "<System " + std::string(s.id()) + ">"; });

  m.def(
      "system", [](const std::string& id) { return std::const_pointer_cast<SystemModel>(make_system(id)); },
      py::arg("id"), "mhh, hh or spring");
  m.def("system_ids", &system_ids);
  m.def("method_names", &method_names);

  m.def(
      "initial_state",
      [](const SystemModel& sys, const std::map<std::string, double>& values,
         std::optional<double> energy_value, std::optional<std::string> closure) {
        State s(Vec::Zero(sys.dim()), Vec::Zero(sys.dim()), 0.0);
        for (const auto& [name, v] : values) {
          const auto [is_p, idx] = variable_index(sys, name);
          (is_p ? s.p : s.q)[idx] = v;
        }
        if (energy_value.has_value() != closure.has_value())
          throw Error(ErrorKind::Config, "energy and closure go together");
        if (energy_value) {
          const auto [is_p, idx] = variable_index(sys, *closure);
          if (!is_p) throw Error(ErrorKind::Config, "closure must be a momentum");
          s = solve_missing_momentum(sys, s, idx, *energy_value);
        }
        validate_state(sys, s);
        std::vector<double> q(s.q.data(), s.q.data() + s.dim()), p(s.p.data(), s.p.data() + s.dim());
        return py::make_tuple(q, p);
      },
      py::arg("system"), py::arg("values"), py::arg("energy") = py::none(),
      py::arg("closure") = py::none(),
      "Returns (q, p). Unnamed variables start at zero; the closure momentum is solved from energy.");

  m.def(
      "integrate",
      [](const SystemModel& sys, const std::string& method, const std::vector<double>& q,
         const std::vector<double>& p, double tau, long n_steps, long sample_every) {
        const State s0 = make_state(sys, q, p, 0.0);
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = run(method, sys, s0, tau, n_steps, sample_every);
        }
        return trajectory_dict(tr);
      },
      py::arg("system"), py::arg("method"), py::arg("q"), py::arg("p"), py::arg("tau"),
      py::arg("n_steps"), py::arg("sample_every") = 1);

  m.def(
      "fli",
      [](const SystemModel& sys, const std::string& method, const std::vector<double>& q,
         const std::vector<double>& p, double tau, double t_end, double d0, long sample_every) {
        FliOptions opts;
        opts.d0 = d0;
        opts.sample_every = sample_every;
        const State s0 = make_state(sys, q, p, 0.0);
        FliResult r;
        {
          py::gil_scoped_release release;
          r = fli(Method::by_name(method), sys, s0, tau, t_end, opts);
        }
        py::dict d;
        d["t"] = column(r.times);
        d["fli"] = column(r.values);
        d["renormalizations"] = r.renormalizations;
        return d;
      },
      py::arg("system"), py::arg("method"), py::arg("q"), py::arg("p"), py::arg("tau"),
      py::arg("t_end"), py::arg("d0") = 1e-8, py::arg("sample_every") = 1);

  m.def(
      "zero_one",
      [](const SystemModel& sys, const std::string& method, const std::vector<double>& q,
         const std::vector<double>& p, double tau, double t_max, double c, double window) {
        ZeroOneOptions opts;
        opts.c = c;
        opts.T = window;
        const State s0 = make_state(sys, q, p, 0.0);
        ZeroOneResult r;
        {
          py::gil_scoped_release release;
          r = zero_one_test(Method::by_name(method), sys, s0, tau, t_max, opts);
        }
        py::dict d;
        d["lambda"] = r.lambda;
        d["t"] = column(r.lag_times);
        d["lnL"] = column(r.log_msd);
        d["residual"] = r.residual;
        return d;
      },
      py::arg("system"), py::arg("method"), py::arg("q"), py::arg("p"), py::arg("tau"),
      py::arg("t_max"), py::arg("c") = 1.8, py::arg("window") = 1e5);

  m.def(
      "jacobian_determinant",
      [](const SystemModel& sys, const std::string& method, const std::vector<double>& q,
         const std::vector<double>& p, double tau, long n_steps, long sample_every) {
        const State s0 = make_state(sys, q, p, 0.0);
        std::vector<double> t, det;
        for (const auto& s : jacobian_determinant(Method::by_name(method), sys, s0, tau, n_steps,
                                                  sample_every)) {
          t.push_back(s.t);
          det.push_back(s.det);
        }
        py::dict d;
        d["t"] = column(t);
        d["det"] = column(det);
        return d;
      },
      py::arg("system"), py::arg("method"), py::arg("q"), py::arg("p"), py::arg("tau"),
      py::arg("n_steps"), py::arg("sample_every") = 1);

  m.def(
      "poincare",
      [](const SystemModel& sys, const std::string& method, const std::vector<double>& q,
         const std::vector<double>& p, double tau, double t_end) {
        const State s0 = make_state(sys, q, p, 0.0);
        SectionPoints sec;
        {
          py::gil_scoped_release release;
          sec = poincare_section(Method::by_name(method), sys, s0, tau, t_end, default_section(sys));
        }
        Trajectory tr;
        tr.states = sec.points;
        for (const auto& s : sec.points) tr.energies.push_back(energy(sys, s));
        py::dict d = trajectory_dict(tr);
        d["skipped"] = sec.skipped;
        return d;
      },
      py::arg("system"), py::arg("method"), py::arg("q"), py::arg("p"), py::arg("tau"),
      py::arg("t_end"));

  m.def(
      "scan",
      [](const std::string& system, const std::string& scheme, const std::string& swept,
         double start, double stop, int count, const std::map<std::string, double>& fixed,
         double energy_value, const std::string& closure, const std::string& indicator,
         double tau, double t_end, int workers) {
        ScanSpec spec;
        spec.system = system;
        spec.scheme = scheme;
        spec.swept = swept;
        spec.start = start;
        spec.stop = stop;
        spec.count = count;
        spec.fixed.assign(fixed.begin(), fixed.end());
        spec.energy = energy_value;
        spec.closure = closure;
        if (indicator == "fli")
          spec.indicator = Indicator::Fli;
        else if (indicator == "zero-one")
          spec.indicator = Indicator::ZeroOne;
        else
          throw Error(ErrorKind::Config, "indicator must be fli or zero-one");
        spec.tau = tau;
        spec.t_end = t_end;
        spec.workers = workers;
        ScanResult r;
        {
          py::gil_scoped_release release;
          r = run_scan(spec);
        }
        std::vector<double> values, ind;
        std::vector<std::string> cls;
        for (const auto& pt : r.points) {
          values.push_back(pt.value);
          ind.push_back(pt.indicator);
          cls.emplace_back(to_string(pt.classification));
        }
        py::dict d;
        d["value"] = column(values);
        d["indicator"] = column(ind);
        d["classification"] = cls;
        d["threshold"] = r.threshold;
        return d;
      },
      py::arg("system") = "mhh", py::arg("scheme") = "omf4gp", py::arg("swept") = "y",
      py::arg("start") = -2.3, py::arg("stop") = -0.95, py::arg("count") = 500,
      py::arg("fixed") = std::map<std::string, double>{{"x", 0.0}},
      py::arg("energy") = 1.0 / 120.0, py::arg("closure") = "px", py::arg("indicator") = "fli",
      py::arg("tau") = 0.1, py::arg("t_end") = 3000.0, py::arg("workers") = 0);

  m.def(
      "convergence",
      [](const SystemModel& sys, const std::string& method, const std::vector<double>& q,
         const std::vector<double>& p, const std::vector<double>& taus, double t_end) {
        const State s0 = make_state(sys, q, p, 0.0);
        const ConvergenceResult r = convergence(Method::by_name(method), sys, s0, taus, t_end);
        py::dict d;
        d["tau"] = column(r.taus);
        d["error"] = column(r.errors);
        d["slope"] = r.slope;
        return d;
      },
      py::arg("system"), py::arg("method"), py::arg("q"), py::arg("p"), py::arg("taus"),
      py::arg("t_end"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (code, stdout, stderr).");

  m.def("parse_number", &cli::parse_number, py::arg("text"));
}
