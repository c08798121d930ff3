#include "contact/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace contact {

namespace {

using Vec = std::vector<double>;

Vec rhs(const SystemSpec& sys, const Vec& y) { return flatten(hamiltonian_vector_field(sys, state_from_flat(y))); }

bool all_finite(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// y + h * Σ c_i k_i
Vec combine(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out(y);
  for (const auto& [c, k] : terms) {
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * c * (*k)[i];
  }
  return out;
}

double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vec rk4(const SystemSpec& sys, const Vec& y, double h) {
  const Vec k1 = rhs(sys, y);
  const Vec k2 = rhs(sys, combine(y, h, {{0.5, &k1}}));
  const Vec k3 = rhs(sys, combine(y, h, {{0.5, &k2}}));
  const Vec k4 = rhs(sys, combine(y, h, {{1.0, &k3}}));
  Vec out(y);
  for (std::size_t i = 0; i < y.size(); ++i) out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

void check_interval(double t0, double tf) {
  if (!(tf > t0) || !std::isfinite(t0) || !std::isfinite(tf)) throw Error("integration interval needs tf > t0");
}

}  // namespace

State step_rk4(const SystemSpec& sys, const State& x, double dt) {
  if (!(dt > 0.0)) throw Error("step size must be positive");
  sys.check_dim(x);
  Vec y = flatten(x);
  if (!all_finite(y)) throw DivergenceError(0.0, x);
  Vec next = rk4(sys, y, dt);
  if (!all_finite(next)) throw DivergenceError(0.0, x);
  return state_from_flat(next);
}

Trajectory integrate_fixed(const SystemSpec& sys, const State& x0, double t0, double tf, double dt) {
  check_interval(t0, tf);
  if (!(dt > 0.0)) throw Error("step size must be positive");
  sys.check_dim(x0);

  Trajectory traj;
  traj.method = "rk4";
  const double span = tf - t0;
  // Grid t_k = t0 + k·dt; the last step is shortened so the final sample is tf.
  auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
  steps = std::max<std::size_t>(steps, 1);
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(t0);
  traj.states.push_back(x0);

  Vec y = flatten(x0);
  double t = t0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t_next = k == steps ? tf : t0 + static_cast<double>(k) * dt;
    Vec next = rk4(sys, y, t_next - t);
    if (!all_finite(next)) throw DivergenceError(t, state_from_flat(y));
    y = std::move(next);
    t = t_next;
    traj.times.push_back(t);
    traj.states.push_back(state_from_flat(y));
    ++traj.accepted_steps;
  }
  return traj;
}

Trajectory integrate_adaptive(const SystemSpec& sys, const State& x0, double t0, double tf, double tol,
                              const AdaptiveOptions& opts) {
  check_interval(t0, tf);
  if (!(tol > 0.0)) throw Error("tolerance must be positive");
  sys.check_dim(x0);

  // Dormand–Prince tableau. The system is autonomous, so the nodes c_i are unused.
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b − b̂ (fifth minus fourth order weights)
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  Trajectory traj;
  traj.method = "dopri5";
  traj.times.push_back(t0);
  traj.states.push_back(x0);

  const double span = tf - t0;
  const double min_step = opts.min_step_fraction * span;
  Vec y = flatten(x0);
  double t = t0;
  double h = span;
  bool last_trial_nonfinite = false;

  while (t < tf) {
    h = std::min(h, tf - t);
    if (h < min_step && tf - t > min_step) {
      if (last_trial_nonfinite) throw DivergenceError(t, state_from_flat(y));
      throw StepUnderflowError(t, h);
    }
    const Vec k1 = rhs(sys, y);
    Vec trial;
    Vec k7;
    Vec err(y.size(), 0.0);
    bool finite = true;
    try {
      const Vec k2 = rhs(sys, combine(y, h, {{a21, &k1}}));
      const Vec k3 = rhs(sys, combine(y, h, {{a31, &k1}, {a32, &k2}}));
      const Vec k4 = rhs(sys, combine(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      const Vec k5 = rhs(sys, combine(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      const Vec k6 = rhs(sys, combine(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      trial = combine(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      k7 = rhs(sys, trial);
      for (std::size_t i = 0; i < y.size(); ++i) {
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      }
      finite = all_finite(trial) && all_finite(err);
    } catch (const DomainError&) {
      // A trial stage left the expression's domain; treat like a blow-up.
      finite = false;
    }

    if (!finite) {
      last_trial_nonfinite = true;
      ++traj.rejected_steps;
      h *= opts.min_factor;
      continue;
    }
    last_trial_nonfinite = false;

    const double scale = tol * (1.0 + std::max(inf_norm(y), inf_norm(trial)));
    const double err_norm = inf_norm(err);
    const double ratio = err_norm == 0.0 ? opts.max_factor : opts.safety * std::pow(scale / err_norm, 0.2);
    const double factor = std::clamp(ratio, opts.min_factor, opts.max_factor);

    if (err_norm <= scale) {
      const bool final_step = h >= tf - t;
      t = final_step ? tf : t + h;
      y = std::move(trial);
      traj.times.push_back(t);
      traj.states.push_back(state_from_flat(y));
      ++traj.accepted_steps;
      h *= factor;
    } else {
      ++traj.rejected_steps;
      h *= std::min(factor, 1.0);
    }
  }
  return traj;
}

}  // namespace contact
