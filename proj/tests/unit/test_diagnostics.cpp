#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "fgsi/diagnostics.hpp"
#include "fgsi/models.hpp"

using namespace fgsi;

namespace {

State mhh_state(double y) {
  auto mhh = make_system("mhh");
  State s(Vec::Zero(2), Vec::Zero(2));
  s.q << 0.0, y;
  return solve_missing_momentum(*mhh, s, 0, 1.0 / 120.0);
}

State spring_state(double phi_over_pi) {
  auto spring = make_system("spring");
  State s(Vec::Zero(2), Vec::Zero(2));
  s.q << 1.15, phi_over_pi * M_PI;
  return solve_missing_momentum(*spring, s, 1, 1.0 / 12.0);
}

// Central differences of the n-step map.
PhaseMat fd_jacobian(const Method& m, const SystemModel& sys, const State& s0, double tau, int n) {
  const PhaseVec z0 = s0.phase();
  const int d = static_cast<int>(z0.size());
  PhaseMat jac(d, d);
  for (int j = 0; j < d; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(z0[j]));
    PhaseVec a = z0, b = z0;
    a[j] += h;
    b[j] -= h;
    State sa = State::from_phase(a, 0.0), sb = State::from_phase(b, 0.0);
    for (int k = 0; k < n; ++k) {
      sa = m.step(sys, sa, tau);
      sb = m.step(sys, sb, tau);
    }
    jac.col(j) = (sa.phase() - sb.phase()) / (2 * h);
  }
  return jac;
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("error series") {
    auto mhh = make_system("mhh");
    const State s0 = mhh_state(-2.02);
    const Trajectory tr = integrate(find_scheme("fr4"), *mhh, s0, 0.1, 100, 10);
    const ErrorSeries e = energy_error_series(tr, energy(*mhh, s0));
    CHECK(e.values.front() == 0.0);
    CHECK(e.max() > 0.0);
    const ErrorSeries self = position_error_series(tr, tr);
    CHECK(self.max() == 0.0);
    const Trajectory other = integrate(find_scheme("fr4"), *mhh, s0, 0.1, 100, 5);
    CHECK_THROWS_AS(position_error_series(tr, other), Error);
  }

  TEST_CASE("convergence slope") {
    auto mhh = make_system("mhh");
    const std::vector<double> taus{0.2, 0.1, 0.05};
    const auto r = convergence(Method::by_name("verlet2"), *mhh, mhh_state(-2.02), taus, 4.0);
    CHECK(r.slope == doctest::Approx(2.0).epsilon(0.05));
    const std::vector<double> x{1, 2, 3}, y{3, 5, 7};
    CHECK(fit_slope(x, y) == doctest::Approx(2.0));
    const std::vector<double> flat{1, 1, 1};
    CHECK_THROWS_AS(fit_slope(flat, y), Error);
  }

  TEST_CASE("jacobian agrees with finite differences on short runs") {
    for (const char* id : {"mhh", "spring"}) {
      auto sys = make_system(id);
      const State s0 = std::string(id) == "mhh" ? mhh_state(-0.988) : spring_state(0.05);
      for (const char* name : {"verlet2", "omf4gp", "rk4"}) {
        CAPTURE(id);
        CAPTURE(name);
        const Method m = Method::by_name(name);
        const auto samples = jacobian_determinant(m, *sys, s0, 0.01, 20);
        REQUIRE(samples.size() == 21);
        const PhaseMat fd = fd_jacobian(m, *sys, s0, 0.01, 20);
        CHECK((samples.back().matrix - fd).cwiseAbs().maxCoeff() < 1e-7);
        CHECK(samples.back().det == doctest::Approx(samples.back().matrix.determinant()));
        if (m.symplectic()) {
          CHECK(symplectic_defect(samples.back().matrix) < 1e-12);
        }
      }
    }
  }

  TEST_CASE("jacobian with no steps is the identity") {
    auto mhh = make_system("mhh");
    const auto samples = jacobian_determinant(Method::by_name("grad2"), *mhh, mhh_state(-1.0), 0.1, 0);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].det == 1.0);
    CHECK(samples[0].matrix.isIdentity(0.0));
  }

  TEST_CASE("poincare points lie on the section") {
    auto mhh = make_system("mhh");
    const SectionSpec spec = default_section(*mhh);
    const SectionPoints sec =
        poincare_section(Method::by_name("omf4gp"), *mhh, mhh_state(-2.02), 0.1, 2000.0, spec);
    REQUIRE(sec.points.size() > 50);
    for (const auto& s : sec.points) {
      CHECK(std::abs(s.q[0]) <= 1e-10);
      CHECK(s.p[0] > 0.0);
    }

    auto spring = make_system("spring");
    const SectionSpec ss = default_section(*spring);
    CHECK(ss.wrap_angle);
    const SectionPoints sp =
        poincare_section(Method::by_name("chin4"), *spring, spring_state(0.05), 0.1, 500.0, ss);
    REQUIRE(!sp.points.empty());
    for (const auto& s : sp.points) {
      CHECK(std::abs(section_value(ss, s)) <= 1e-10);
      CHECK(s.p[1] > 0.0);
    }
  }

  TEST_CASE("fli renormalization does not change the value") {
    auto mhh = make_system("mhh");
    const Method m = Method::by_name("omf4gp");
    FliOptions a, b;
    a.renorm_threshold = 10.0;
    b.renorm_threshold = 1e300;
    const FliResult ra = fli(m, *mhh, mhh_state(-2.02), 0.1, 200.0, a);
    const FliResult rb = fli(m, *mhh, mhh_state(-2.02), 0.1, 200.0, b);
    CHECK(ra.renormalizations > 0);
    CHECK(rb.renormalizations == 0);
    CHECK(ra.values.front() == 0.0);
    CHECK(ra.final_value() == doctest::Approx(rb.final_value()).epsilon(1e-3));
    FliOptions bad;
    bad.d0 = 0.0;
    CHECK_THROWS_AS(fli(m, *mhh, mhh_state(-2.02), 0.1, 10.0, bad), Error);
  }

  TEST_CASE("zero-one test on synthetic series") {
    const double t_max = 500.0;
    ZeroOneOptions opts;
    opts.T = 5000.0;
    const std::size_t n = static_cast<std::size_t>(opts.T + t_max) + 1;
    std::vector<double> wave(n), noise(n);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (std::size_t k = 0; k < n; ++k) {
      wave[k] = std::sin(0.7 * k) + 0.5 * std::cos(0.23 * k);
      noise[k] = g(rng);
    }
    const ZeroOneResult regular = zero_one_from_series(wave, 1.0, t_max, opts);
    const ZeroOneResult chaotic = zero_one_from_series(noise, 1.0, t_max, opts);
    CHECK(std::abs(regular.lambda) < 0.2);
    CHECK(chaotic.lambda > 0.8);
    CHECK(chaotic.points_used > 10);

    std::vector<double> still(n, 1.0);
    CHECK(zero_one_from_series(still, 1.0, t_max, opts).lambda < 0.2);
  }
}
