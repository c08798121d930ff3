#pragma once

// Explicit Runge–Kutta integration of the contact Hamilton equations.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "contact/core.hpp"
#include "contact/errors.hpp"

namespace contact {

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::string method;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  std::size_t size() const noexcept { return times.size(); }
};

/// A non-finite value appeared. Carries the last finite state.
class DivergenceError : public Error {
 public:
  DivergenceError(double last_time, State last_state)
      : Error("integration diverged after t = " + std::to_string(last_time)),
        last_time_(last_time),
        last_state_(std::move(last_state)) {}
  double last_time() const noexcept { return last_time_; }
  const State& last_state() const noexcept { return last_state_; }

 private:
  double last_time_;
  State last_state_;
};

class StepUnderflowError : public Error {
 public:
  StepUnderflowError(double time, double dt)
      : Error("step size " + std::to_string(dt) + " underflowed at t = " + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// One classical RK4 step. Throws DivergenceError (with time 0) on non-finite stages.
State step_rk4(const SystemSpec& sys, const State& x, double dt);

Trajectory integrate_fixed(const SystemSpec& sys, const State& x0, double t0, double tf, double dt);

struct AdaptiveOptions {
  double safety = 0.9;
  double min_factor = 0.2;
  double max_factor = 5.0;
  /// Underflow when dt < min_step_fraction · (tf − t0).
  double min_step_fraction = 1e-12;
};

/// Dormand–Prince 5(4) with error test ‖e‖∞ ≤ tol·(1 + ‖x‖∞).
Trajectory integrate_adaptive(const SystemSpec& sys, const State& x0, double t0, double tf, double tol,
                              const AdaptiveOptions& opts = {});

// Trajectory CSV: header `t,<coords>,<momenta>,s,H`, shortest round-trip floats.
void write_trajectory_csv(std::ostream& out, const SystemSpec& sys, const Trajectory& traj);
/// Reads a CSV written by write_trajectory_csv. The H column is ignored.
Trajectory read_trajectory_csv(std::istream& in, const SystemSpec& sys);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace contact
