#include "stlta/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stlta {

bool DynamicsModel::in_bounds(std::span<const double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= state_lo[i] && x[i] <= state_hi[i])) return false;
  }
  return true;
}

std::vector<double> DynamicsModel::eval(std::span<const double> x, std::span<const double> u) const {
  std::vector<double> dx(x.size());
  f(x, u, dx);
  return dx;
}

std::vector<std::string> builtin_dynamics_names() { return {"double_integrator", "unicycle2", "kinematic_car"}; }

DynamicsModel builtin_dynamics(const std::string& name) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  DynamicsModel m;
  m.name = name;
  if (name == "double_integrator") {
    m.state_names = {"x", "y"};
    m.control_names = {"u"};
    m.state_lo = {-1, -2};
    m.state_hi = {5, 2};
    m.control_lo = {-1};
    m.control_hi = {1};
    m.f = [](std::span<const double> x, std::span<const double> u, std::span<double> dx) {
      dx[0] = x[1];
      dx[1] = u[0];
    };
  } else if (name == "unicycle2") {
    m.state_names = {"x", "y", "phi", "v"};
    m.control_names = {"omega", "a"};
    m.state_lo = {0, 0, -inf, -1};
    m.state_hi = {5, 5, inf, 1};
    m.control_lo = {-1.5, -1};
    m.control_hi = {1.5, 1};
    m.f = [](std::span<const double> x, std::span<const double> u, std::span<double> dx) {
      dx[0] = x[3] * std::cos(x[2]);
      dx[1] = x[3] * std::sin(x[2]);
      dx[2] = u[0];
      dx[3] = u[1];
    };
  } else if (name == "kinematic_car") {
    constexpr double wheelbase = 1.0;
    m.state_names = {"x", "y", "theta"};
    m.control_names = {"v", "delta"};
    m.state_lo = {-2, -2, -inf};
    m.state_hi = {12, 12, inf};
    m.control_lo = {-1, -0.7};
    m.control_hi = {3, 0.7};
    m.f = [](std::span<const double> x, std::span<const double> u, std::span<double> dx) {
      dx[0] = u[0] * std::cos(x[2]);
      dx[1] = u[0] * std::sin(x[2]);
      dx[2] = u[0] / wheelbase * std::tan(u[1]);
    };
  } else {
    throw std::invalid_argument("unknown dynamics '" + name + "'");
  }
  return m;
}

std::vector<double> rk4_step(const DynamicsModel& m, std::span<const double> x, std::span<const double> u, double h) {
  const std::size_t n = x.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), out(n);
  m.f(x, u, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
  m.f(tmp, u, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
  m.f(tmp, u, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
  m.f(tmp, u, k4);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

Trajectory start_trajectory(std::span<const double> x0) {
  Trajectory t;
  t.times = {0.0};
  t.states = {std::vector<double>(x0.begin(), x0.end())};
  return t;
}

void propagate(const DynamicsModel& m, std::span<const double> u, double t_end, Trajectory& traj, double h) {
  if (traj.empty()) throw std::invalid_argument("propagate needs a start state");
  const double t0 = traj.times.back();
  const double dt = t_end - t0;
  if (!(dt > 0.0)) throw std::invalid_argument("propagate needs t_end after the trajectory end");
  const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dt / h - 1e-9)));
  const std::vector<double> uv(u.begin(), u.end());
  std::vector<double> x = traj.states.back();
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = k == steps ? t_end : t0 + dt * static_cast<double>(k) / static_cast<double>(steps);
    std::vector<double> next = rk4_step(m, x, uv, t - traj.times.back());
    traj.controls.push_back(uv);
    traj.d_left.push_back(m.eval(x, uv));
    traj.d_right.push_back(m.eval(next, uv));
    traj.times.push_back(t);
    traj.states.push_back(next);
    x = std::move(next);
  }
}

Trajectory simulate(const DynamicsModel& m, std::span<const double> x0,
                    std::span<const std::pair<std::vector<double>, double>> controls, double h) {
  Trajectory t = start_trajectory(x0);
  double now = 0.0;
  for (const auto& [u, dt] : controls) {
    now += dt;
    propagate(m, u, now, t, h);
  }
  return t;
}

}  // namespace stlta
