#include "fgsi/reference.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "kernels.hpp"

namespace fgsi {

PhaseVec hamiltonian_field(const SystemModel& system, const State& s) {
  const int n = s.dim();
  Vec dq, dp;
  detail::hamiltonian_field(system, s.q, s.p, dq, dp);
  PhaseVec dz(2 * n);
  dz << dq, dp;
  return dz;
}

namespace {

PhaseVec field_at(const SystemModel& system, const PhaseVec& z, double t) {
  return hamiltonian_field(system, State::from_phase(z, t));
}

}  // namespace

State rk4_step(const SystemModel& system, const State& s, double tau) {
  State out = s;
  detail::rk4(system, out.q, out.p, tau);
  out.t = s.t + tau;
  return out;
}

Trajectory rk4_integrate(const SystemModel& system, const State& s0, double tau, long n_steps,
                         long sample_every) {
  return integrate(Method::rk4(), system, s0, tau, n_steps, sample_every);
}

namespace {

// Fehlberg 7(8), NASA TR R-287 (1968).
constexpr int kStages = 13;

struct Fehlberg78 {
  std::array<double, kStages> c{};
  std::array<std::array<double, kStages>, kStages> a{};
  std::array<double, kStages> b8{};

  Fehlberg78() {
    c = {0.0,       2.0 / 27.0, 1.0 / 9.0, 1.0 / 6.0, 5.0 / 12.0, 0.5, 5.0 / 6.0,
         1.0 / 6.0, 2.0 / 3.0,  1.0 / 3.0, 1.0,       0.0,        1.0};
    a[1][0] = 2.0 / 27.0;
    a[2][0] = 1.0 / 36.0;
    a[2][1] = 1.0 / 12.0;
    a[3][0] = 1.0 / 24.0;
    a[3][2] = 1.0 / 8.0;
    a[4][0] = 5.0 / 12.0;
    a[4][2] = -25.0 / 16.0;
    a[4][3] = 25.0 / 16.0;
    a[5][0] = 1.0 / 20.0;
    a[5][3] = 1.0 / 4.0;
    a[5][4] = 1.0 / 5.0;
    a[6][0] = -25.0 / 108.0;
    a[6][3] = 125.0 / 108.0;
    a[6][4] = -65.0 / 27.0;
    a[6][5] = 125.0 / 54.0;
    a[7][0] = 31.0 / 300.0;
    a[7][4] = 61.0 / 225.0;
    a[7][5] = -2.0 / 9.0;
    a[7][6] = 13.0 / 900.0;
    a[8][0] = 2.0;
    a[8][3] = -53.0 / 6.0;
    a[8][4] = 704.0 / 45.0;
    a[8][5] = -107.0 / 9.0;
    a[8][6] = 67.0 / 90.0;
    a[8][7] = 3.0;
    a[9][0] = -91.0 / 108.0;
    a[9][3] = 23.0 / 108.0;
    a[9][4] = -976.0 / 135.0;
    a[9][5] = 311.0 / 54.0;
    a[9][6] = -19.0 / 60.0;
    a[9][7] = 17.0 / 6.0;
    a[9][8] = -1.0 / 12.0;
    a[10][0] = 2383.0 / 4100.0;
    a[10][3] = -341.0 / 164.0;
    a[10][4] = 4496.0 / 1025.0;
    a[10][5] = -301.0 / 82.0;
    a[10][6] = 2133.0 / 4100.0;
    a[10][7] = 45.0 / 82.0;
    a[10][8] = 45.0 / 164.0;
    a[10][9] = 18.0 / 41.0;
    a[11][0] = 3.0 / 205.0;
    a[11][5] = -6.0 / 41.0;
    a[11][6] = -3.0 / 205.0;
    a[11][7] = -3.0 / 41.0;
    a[11][8] = 3.0 / 41.0;
    a[11][9] = 6.0 / 41.0;
    a[12][0] = -1777.0 / 4100.0;
    a[12][3] = -341.0 / 164.0;
    a[12][4] = 4496.0 / 1025.0;
    a[12][5] = -289.0 / 82.0;
    a[12][6] = 2193.0 / 4100.0;
    a[12][7] = 51.0 / 82.0;
    a[12][8] = 33.0 / 164.0;
    a[12][9] = 12.0 / 41.0;
    a[12][11] = 1.0;
    b8[5] = 34.0 / 105.0;
    b8[6] = 9.0 / 35.0;
    b8[7] = 9.0 / 35.0;
    b8[8] = 9.0 / 280.0;
    b8[9] = 9.0 / 280.0;
    b8[11] = 41.0 / 840.0;
    b8[12] = 41.0 / 840.0;
  }
};

const Fehlberg78& tableau() {
  static const Fehlberg78 t;
  return t;
}

struct TrialStep {
  PhaseVec z;
  double err;  // scaled error norm, accept when <= 1
};

TrialStep rkf_trial(const SystemModel& system, const PhaseVec& z, double t, double h,
                    double tol) {
  const Fehlberg78& tb = tableau();
  std::array<PhaseVec, kStages> k;
  for (int s = 0; s < kStages; ++s) {
    PhaseVec zs = z;
    for (int j = 0; j < s; ++j)
      if (tb.a[s][j] != 0.0) zs += (h * tb.a[s][j]) * k[j];
    k[s] = field_at(system, zs, t + tb.c[s] * h);
  }
  PhaseVec z8 = z;
  for (int s = 0; s < kStages; ++s)
    if (tb.b8[s] != 0.0) z8 += (h * tb.b8[s]) * k[s];
  // Difference between the seventh- and eighth-order weights.
  const PhaseVec e = (h * 41.0 / 840.0) * (k[0] + k[10] - k[11] - k[12]);
  double err = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    const double scale = tol * (1.0 + std::max(std::abs(z[i]), std::abs(z8[i])));
    err = std::max(err, std::abs(e[i]) / scale);
  }
  return {z8, err};
}

}  // namespace

Trajectory rkf89_integrate(const SystemModel& system, const State& s0,
                           std::span<const double> output_times, const RkfOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::Parameter, "tolerance must be positive");
  validate_state(system, s0);
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    if (!std::isfinite(output_times[i]) || output_times[i] < s0.t ||
        (i > 0 && output_times[i] < output_times[i - 1]))
      throw Error(ErrorKind::Parameter, "output times must be finite, sorted and >= t0");
  }

  Trajectory traj;
  traj.states.reserve(output_times.size());
  traj.energies.reserve(output_times.size());
  PhaseVec z = s0.phase();
  double t = s0.t;
  double h = options.initial_step;
  long steps = 0;

  for (const double t_out : output_times) {
    while (t < t_out) {
      const double remaining = t_out - t;
      const bool truncated = h >= remaining;
      const double h_try = truncated ? remaining : h;
      TrialStep trial;
      try {
        trial = rkf_trial(system, z, t, h_try, options.tol);
      } catch (const Error& e) {
        std::ostringstream os;
        os << "rkf89 at t = " << t << ": " << e.what();
        traj.failure = Failure{e.kind(), os.str()};
        return traj;
      }
      const double factor =
          trial.err == 0.0
              ? options.max_factor
              : std::clamp(options.safety * std::pow(trial.err, -1.0 / 8.0), options.min_factor,
                           options.max_factor);
      if (trial.err <= 1.0) {
        z = trial.z;
        t = truncated ? t_out : t + h_try;
        // A step cut short to hit an output time says little about the
        // admissible size, so it never shrinks the nominal step.
        h = truncated ? std::max(h, h_try * factor) : h_try * factor;
      } else {
        h = h_try * factor;
      }
      if (h < 1e-14 * std::max(1.0, std::abs(t)) || ++steps > options.max_steps) {
        std::ostringstream os;
        os << "rkf89 step-size underflow at t = " << t << " (h = " << h << ")";
        traj.failure = Failure{ErrorKind::Convergence, os.str()};
        return traj;
      }
    }
    traj.push(system, State::from_phase(z, t_out));
  }
  return traj;
}

Trajectory rkf89_integrate(const SystemModel& system, const State& s0, double t_end,
                           double output_interval, const RkfOptions& options) {
  if (!(output_interval > 0.0) || !(t_end >= s0.t))
    throw Error(ErrorKind::Parameter, "need output_interval > 0 and t_end >= t0");
  const long n = std::lround((t_end - s0.t) / output_interval);
  std::vector<double> times(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) times[k] = s0.t + static_cast<double>(k) * output_interval;
  if (n > 0) times.back() = t_end;
  return rkf89_integrate(system, s0, times, options);
}

}  // namespace fgsi
