#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stlta/monitor.hpp"

namespace stlta {

using VectorField = std::function<void(std::span<const double> x, std::span<const double> u, std::span<double> dx)>;

/// x' = f(x, u) with box bounds on states and controls.  Infinite state
/// bounds mark unconstrained components (headings).
struct DynamicsModel {
  std::string name;
  std::vector<std::string> state_names;
  std::vector<std::string> control_names;
  std::vector<double> state_lo, state_hi;
  std::vector<double> control_lo, control_hi;
  VectorField f;

  std::size_t n() const { return state_names.size(); }
  std::size_t c() const { return control_names.size(); }
  bool in_bounds(std::span<const double> x) const;
  std::vector<double> eval(std::span<const double> x, std::span<const double> u) const;
};

/// double_integrator (x' = y, y' = u), unicycle2 (x, y, phi, v with controls
/// omega, a) and kinematic_car (x, y, theta with controls v, delta; L = 1).
/// Throws std::invalid_argument for other names.
DynamicsModel builtin_dynamics(const std::string& name);
std::vector<std::string> builtin_dynamics_names();

inline constexpr double kRk4Step = 0.01;

/// One classical Runge-Kutta step of size h.
std::vector<double> rk4_step(const DynamicsModel& m, std::span<const double> x, std::span<const double> u, double h);

/// Integrates the end of `traj` forward to t_end under constant u with RK4
/// steps of at most h, appending one Hermite segment per step.  The last
/// sample lands exactly on t_end.
void propagate(const DynamicsModel& m, std::span<const double> u, double t_end, Trajectory& traj,
               double h = kRk4Step);

/// Starts a trajectory at (0, x0).
Trajectory start_trajectory(std::span<const double> x0);

/// Re-simulates a piecewise-constant controller from x0.
Trajectory simulate(const DynamicsModel& m, std::span<const double> x0,
                    std::span<const std::pair<std::vector<double>, double>> controls, double h = kRk4Step);

}  // namespace stlta
