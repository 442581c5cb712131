#include <cmath>
#include <random>

#include "doctest.h"
#include "fgsi/models.hpp"
#include "support.hpp"

using namespace fgsi;

namespace {

constexpr double kH = 1e-6;

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a[i] += kH;
    b[i] -= kH;
    g[i] = (f(a) - f(b)) / (2 * kH);
  }
  return g;
}

// K-only Hamilton equations with small RK4 steps.
State kinetic_rk4(const SystemModel& sys, State s, double h, int n) {
  const double dt = h / n;
  auto field = [&](const Vec& q, const Vec& p) {
    return std::pair<Vec, Vec>(k_p(sys, q, p), -k_q(sys, q, p));
  };
  for (int i = 0; i < n; ++i) {
    const auto [a1, b1] = field(s.q, s.p);
    const auto [a2, b2] = field(s.q + 0.5 * dt * a1, s.p + 0.5 * dt * b1);
    const auto [a3, b3] = field(s.q + 0.5 * dt * a2, s.p + 0.5 * dt * b2);
    const auto [a4, b4] = field(s.q + dt * a3, s.p + dt * b3);
    s.q += dt / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
    s.p += dt / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
  }
  s.t += h;
  return s;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("registry and variable names") {
    CHECK(system_ids().size() == 3);
    for (const auto& id : system_ids()) CHECK(make_system(id)->id() == id);
    CHECK_THROWS_AS(make_system("kepler"), Error);
    auto spring = make_system("spring");
    CHECK(variable_index(*spring, "pphi") == std::pair<bool, int>(true, 1));
    CHECK(variable_index(*spring, "r") == std::pair<bool, int>(false, 0));
    CHECK_THROWS_AS(variable_index(*spring, "x"), Error);
  }

  TEST_CASE("derivatives match finite differences") {
    std::mt19937_64 rng(7);
    for (const auto& id : system_ids()) {
      CAPTURE(id);
      auto sys = make_system(id);
      for (int trial = 0; trial < 10; ++trial) {
        const State s = test::random_state(*sys, rng);
        const Vec g = v_gradient(*sys, s.q);
        const Vec g_fd = fd_gradient([&](const Vec& q) { return sys->potential(q); }, s.q);
        CHECK((g - g_fd).norm() < 1e-8);

        const Mat hess = v_hessian(*sys, s.q);
        for (int j = 0; j < sys->dim(); ++j) {
          const Vec col = fd_gradient([&](const Vec& q) { return v_gradient(*sys, q)[j]; }, s.q);
          CHECK((hess.col(j) - col).norm() < 1e-7);
        }
        CHECK((hess - hess.transpose()).norm() == doctest::Approx(0.0));

        const Tensor3 da = k_qpp(*sys, s.q);
        for (int i = 0; i < sys->dim(); ++i)
          for (int j = 0; j < sys->dim(); ++j) {
            const Vec d = fd_gradient([&](const Vec& q) { return k_pp(*sys, q)(i, j); }, s.q);
            for (int k = 0; k < sys->dim(); ++k) CHECK(std::abs(da(k, i, j) - d[k]) < 1e-8);
          }

        const Vec kq = fd_gradient([&](const Vec& q) { return sys->kinetic(q, s.p); }, s.q);
        const Vec kp = fd_gradient([&](const Vec& p) { return sys->kinetic(s.q, p); }, s.p);
        CHECK((k_q(*sys, s.q, s.p) - kq).norm() < 1e-8);
        CHECK((k_p(*sys, s.q, s.p) - kp).norm() < 1e-8);
      }
    }
  }

  TEST_CASE("kinetic flow matches a fine Runge-Kutta solution") {
    std::mt19937_64 rng(11);
    for (const auto& id : system_ids()) {
      CAPTURE(id);
      auto sys = make_system(id);
      for (int trial = 0; trial < 5; ++trial) {
        const State s = test::random_state(*sys, rng);
        for (double h : {0.3, -0.2}) {
          const State exact = k_flow(*sys, s, h);
          const State oracle = kinetic_rk4(*sys, s, h, 2000);
          CHECK(test::max_abs_diff(exact, oracle) < 1e-11);
          CHECK(exact.t == doctest::Approx(s.t + h));
          CHECK(sys->kinetic(exact.q, exact.p) ==
                doctest::Approx(sys->kinetic(s.q, s.p)).epsilon(1e-13));
        }
        CHECK(test::max_abs_diff(k_flow(*sys, s, 0.0), s) == 0.0);
      }
    }
  }

  TEST_CASE("spring kinetic flow keeps pphi") {
    auto sys = make_system("spring");
    State s(Vec::Zero(2), Vec::Zero(2));
    s.q << 1.2, 0.4;
    s.p << -0.3, 0.7;
    const State out = k_flow(*sys, s, 1.7);
    CHECK(out.p[1] == s.p[1]);
  }

  TEST_CASE("spring flight through the origin is a singularity") {
    auto sys = make_system("spring");
    State s(Vec::Zero(2), Vec::Zero(2));
    s.q << 1.0, 0.0;
    s.p << -1.0, 0.0;
    try {
      k_flow(*sys, s, 2.0);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Singularity);
    }
    s.q << -0.5, 0.0;
    CHECK_THROWS_AS(validate_state(*sys, s), Error);
  }

  TEST_CASE("closure momentum reaches the energy") {
    auto mhh = make_system("mhh");
    State s(Vec::Zero(2), Vec::Zero(2));
    s.q << 0.0, -2.02;
    const State c = solve_missing_momentum(*mhh, s, 0, 1.0 / 120.0);
    CHECK(c.p[0] > 0);
    CHECK(energy(*mhh, c) == doctest::Approx(1.0 / 120.0).epsilon(1e-14));

    auto spring = make_system("spring");
    State r(Vec::Zero(2), Vec::Zero(2));
    r.q << 1.15, 0.05 * M_PI;
    const State d = solve_missing_momentum(*spring, r, 1, 1.0 / 12.0);
    CHECK(energy(*spring, d) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));

    r.q << 3.0, 0.0;
    try {
      solve_missing_momentum(*spring, r, 0, 1.0 / 12.0);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InfeasibleEnergy);
    }
  }
}
