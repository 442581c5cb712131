#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fgsi/diagnostics.hpp"

namespace fgsi {

namespace {

struct Fit {
  double lambda = 0.0;
  bool degenerate = false;
  int points = 0;
  double residual = 0.0;
  std::vector<double> lags;
  std::vector<double> log_msd;
};

// Mean-square displacement growth rate for one value of c.
Fit fit_for_c(std::span<const double> psi, double dt, double c, long stride,
              long window, const std::vector<long>& lag_steps) {
  // theta(t) = c t + int psi, q(t) = int psi cos(theta), trapezoid rule.
  const std::size_t n = psi.size();
  std::vector<double> q_sub;
  q_sub.reserve(n / static_cast<std::size_t>(stride) + 1);
  double integral_psi = 0.0, q = 0.0;
  double prev_term = psi[0] * std::cos(0.0);
  q_sub.push_back(0.0);
  for (std::size_t k = 1; k < n; ++k) {
    integral_psi += 0.5 * dt * (psi[k - 1] + psi[k]);
    const double theta = c * static_cast<double>(k) * dt + integral_psi;
    const double term = psi[k] * std::cos(theta);
    q += 0.5 * dt * (prev_term + term);
    prev_term = term;
    if (k % static_cast<std::size_t>(stride) == 0) q_sub.push_back(q);
  }

  Fit fit;
  std::vector<double> xs, ys;
  for (const long lag : lag_steps) {
    const long m = lag / stride;
    double sum = 0.0;
    long count = 0;
    for (long j = 0; j <= window && j + m < static_cast<long>(q_sub.size()); ++j) {
      const double diff = q_sub[j + m] - q_sub[j];
      sum += diff * diff;
      ++count;
    }
    const double msd = count > 0 ? sum / static_cast<double>(count) : 0.0;
    const double t = static_cast<double>(lag) * dt;
    if (msd > 1e-300) {
      xs.push_back(std::log(t));
      ys.push_back(std::log(msd));
      fit.lags.push_back(t);
      fit.log_msd.push_back(std::log(msd));
    }
  }
  fit.points = static_cast<int>(xs.size());
  if (xs.size() < 2) {
    fit.degenerate = true;
    return fit;
  }
  fit.lambda = fit_slope(xs, ys);
  const double nx = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= nx;
  my /= nx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + fit.lambda * (xs[i] - mx));
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / nx);
  return fit;
}

}  // namespace

ZeroOneResult zero_one_from_series(std::span<const double> psi, double dt, double t_max,
                                   const ZeroOneOptions& options) {
  if (!(dt > 0.0) || !(t_max > 0.0)) throw Error(ErrorKind::Parameter, "need dt > 0, t_max > 0");
  if (!(options.c > 0.0) && options.random_c <= 0)
    throw Error(ErrorKind::Parameter, "0-1 test needs c > 0");
  if (!(options.T >= t_max))
    throw Error(ErrorKind::Parameter, "averaging window T is too small to estimate L(t_max)");
  if (options.lag_count < 2) throw Error(ErrorKind::Parameter, "need at least two lags");

  const long stride = std::max(1L, std::lround(options.sample_step / dt));
  const long window = static_cast<long>(std::floor(options.T / (static_cast<double>(stride) * dt)));
  const long max_lag = static_cast<long>(std::floor(t_max / dt / stride)) * stride;
  const long needed = (window * stride) + max_lag + 1;
  if (static_cast<long>(psi.size()) < needed)
    throw Error(ErrorKind::Parameter, "observable series does not cover T + t_max");

  // Log-spaced lags in [t_max / 10, t_max], rounded to the sampling grid.
  std::vector<long> lag_steps;
  const double lo = std::log(t_max / 10.0), hi = std::log(t_max);
  for (int i = 0; i < options.lag_count; ++i) {
    const double t = std::exp(lo + (hi - lo) * i / (options.lag_count - 1));
    long steps = std::lround(t / dt / stride) * stride;
    steps = std::clamp(steps, stride, max_lag);
    if (lag_steps.empty() || steps != lag_steps.back()) lag_steps.push_back(steps);
  }

  std::vector<double> cs;
  if (options.random_c > 0) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(0.5, std::numbers::pi - 0.5);
    for (int i = 0; i < options.random_c; ++i) cs.push_back(dist(rng));
  } else {
    cs.push_back(options.c);
  }

  std::vector<Fit> fits;
  fits.reserve(cs.size());
  for (const double c : cs) fits.push_back(fit_for_c(psi, dt, c, stride, window, lag_steps));

  std::vector<std::size_t> order(fits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double la = fits[a].degenerate ? 0.0 : fits[a].lambda;
    const double lb = fits[b].degenerate ? 0.0 : fits[b].lambda;
    return la < lb;
  });
  const std::size_t pick = order[order.size() / 2];
  const Fit& f = fits[pick];

  ZeroOneResult out;
  out.degenerate = f.degenerate;
  out.lambda = f.degenerate ? 0.0 : f.lambda;
  out.points_used = f.points;
  out.residual = f.residual;
  out.c = cs[pick];
  out.T = options.T;
  out.sample_step = static_cast<double>(stride) * dt;
  out.lag_times = f.lags;
  out.log_msd = f.log_msd;
  return out;
}

ZeroOneResult zero_one_test(const Method& method, const SystemModel& system, const State& s0,
                            double tau, double t_max, const ZeroOneOptions& options) {
  validate_state(system, s0);
  if (!(tau > 0.0) || !(t_max > 0.0)) throw Error(ErrorKind::Parameter, "need tau > 0, t_max > 0");
  if (!(options.T >= t_max))
    throw Error(ErrorKind::Parameter, "averaging window T is too small to estimate L(t_max)");
  const long n_steps = static_cast<long>(std::ceil((options.T + t_max) / tau - 1e-9));
  const Observable psi_of =
      options.observable ? options.observable : [](const State& s) { return s.q[0]; };

  std::vector<double> psi;
  psi.reserve(static_cast<std::size_t>(n_steps + 1));
  State cur = s0;
  psi.push_back(psi_of(cur));
  for (long k = 1; k <= n_steps; ++k) {
    cur = method.step(system, cur, tau);
    psi.push_back(psi_of(cur));
  }
  return zero_one_from_series(psi, tau, t_max, options);
}

}  // namespace fgsi
