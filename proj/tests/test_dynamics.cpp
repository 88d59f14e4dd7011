#include <catch2/catch_amalgamated.hpp>

#include <boost/numeric/odeint.hpp>
#include <random>

#include "stlta/dynamics.hpp"

using namespace stlta;

TEST_CASE("double integrator vector field") {
  const DynamicsModel m = builtin_dynamics("double_integrator");
  CHECK(m.n() == 2);
  CHECK(m.c() == 1);
  const std::vector<double> x{1.5, -0.25}, u{0.7};
  const auto dx = m.eval(x, u);
  CHECK(dx[0] == -0.25);
  CHECK(dx[1] == 0.7);
}

TEST_CASE("double integrator from rest under unit input") {
  const DynamicsModel m = builtin_dynamics("double_integrator");
  const std::vector<double> x0{0, 0}, u{1};
  Trajectory t = start_trajectory(x0);
  propagate(m, u, 1.0, t);
  CHECK(t.times.back() == 1.0);
  CHECK(t.states.back()[0] == Catch::Approx(0.5).margin(1e-6));
  CHECK(t.states.back()[1] == Catch::Approx(1.0).margin(1e-6));
  CHECK(t.segments() == 100);
  // Hermite dense output is exact for this quadratic motion.
  CHECK(t.state_at(0.503)[0] == Catch::Approx(0.5 * 0.503 * 0.503).margin(1e-9));
}

TEST_CASE("unicycle at rest does not move") {
  const DynamicsModel m = builtin_dynamics("unicycle2");
  const std::vector<double> x{1, 2, 0.7, 0}, u{0.3, 0};
  const auto dx = m.eval(x, u);
  CHECK(dx[0] == 0.0);
  CHECK(dx[1] == 0.0);
  CHECK(dx[2] == 0.3);
}

TEST_CASE("kinematic car turns with the steering angle") {
  const DynamicsModel m = builtin_dynamics("kinematic_car");
  const std::vector<double> x{0, 0, 0}, u{2, 0.5};
  const auto dx = m.eval(x, u);
  CHECK(dx[0] == Catch::Approx(2));
  CHECK(dx[1] == Catch::Approx(0).margin(1e-12));
  CHECK(dx[2] == Catch::Approx(2 * std::tan(0.5)));
}

TEST_CASE("unknown model name") { CHECK_THROWS_AS(builtin_dynamics("bicycle"), std::invalid_argument); }

TEST_CASE("propagation lands exactly on the requested time") {
  const DynamicsModel m = builtin_dynamics("double_integrator");
  const std::vector<double> x0{0, 0}, u{0.5};
  Trajectory t = start_trajectory(x0);
  propagate(m, u, 0.37, t);
  propagate(m, u, 6.0, t);
  CHECK(t.times.back() == 6.0);
  for (std::size_t k = 0; k + 1 < t.times.size(); ++k) CHECK(t.times[k + 1] - t.times[k] <= kRk4Step + 1e-12);
}

TEST_CASE("RK4 agrees with an adaptive reference integrator") {
  namespace ode = boost::numeric::odeint;
  std::mt19937_64 rng(1);
  for (const auto& name : builtin_dynamics_names()) {
    const DynamicsModel m = builtin_dynamics(name);
    std::vector<std::pair<std::vector<double>, double>> controls;
    double total = 0.0;
    while (total < 10.0) {
      std::vector<double> u(m.c());
      for (std::size_t i = 0; i < m.c(); ++i) {
        u[i] = std::uniform_real_distribution<double>(m.control_lo[i], m.control_hi[i])(rng);
      }
      const double dt = std::min(10.0 - total, std::uniform_real_distribution<double>(0.05, 1.0)(rng));
      controls.emplace_back(u, dt);
      total += dt;
    }
    std::vector<double> x0(m.n(), 0.0);
    x0[0] = 1.0;
    if (name == "unicycle2") x0[3] = 0.5;
    const Trajectory t = simulate(m, x0, controls);

    std::vector<double> ref = x0;
    for (const auto& [u, dt] : controls) {
      auto sys = [&, uu = u](const std::vector<double>& x, std::vector<double>& dx, double) { m.f(x, uu, dx); };
      ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<std::vector<double>>>(1e-10, 1e-10),
                              sys, ref, 0.0, dt, 1e-3);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < m.n(); ++i) err = std::max(err, std::abs(ref[i] - t.states.back()[i]));
    INFO(name);
    CHECK(err < 1e-4);
  }
}
