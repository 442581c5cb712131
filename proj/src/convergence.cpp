#include <cmath>
#include <sstream>

#include "fgsi/diagnostics.hpp"

namespace fgsi {

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::Parameter, "slope fit needs at least two paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::Parameter, "slope fit needs distinct abscissae");
  return sxy / sxx;
}

ConvergenceResult convergence(const Method& method, const SystemModel& system, const State& s0,
                              std::span<const double> taus, double t_end,
                              const RkfOptions& reference) {
  if (taus.size() < 2) throw Error(ErrorKind::Parameter, "need at least two time steps");
  if (!(t_end > 0.0)) throw Error(ErrorKind::Parameter, "t_end must be positive");

  const double times[] = {s0.t + t_end};
  const Trajectory ref = rkf89_integrate(system, s0, times, reference);
  if (ref.failure) throw Error(ref.failure->kind, "reference: " + ref.failure->message);
  const State& target = ref.states.back();

  ConvergenceResult out;
  std::vector<double> lx, ly;
  for (const double tau : taus) {
    if (!(tau > 0.0)) throw Error(ErrorKind::Parameter, "time steps must be positive");
    const long n = std::lround(t_end / tau);
    if (n < 1 || std::abs(static_cast<double>(n) * tau - t_end) > 1e-9 * t_end) {
      std::ostringstream os;
      os << "tau = " << tau << " does not divide t_end = " << t_end;
      throw Error(ErrorKind::Parameter, os.str());
    }
    const Trajectory tr = integrate(method, system, s0, tau, n, n);
    if (tr.failure) throw Error(tr.failure->kind, tr.failure->message);
    const double err = phase_distance(tr.states.back(), target);
    out.taus.push_back(tau);
    out.errors.push_back(err);
    lx.push_back(std::log10(tau));
    ly.push_back(std::log10(err));
  }
  out.slope = fit_slope(lx, ly);
  return out;
}

}  // namespace fgsi
