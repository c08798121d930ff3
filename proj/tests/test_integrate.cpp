#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "contact/integrate.hpp"

using namespace contact;

namespace {

constexpr double kGamma = 0.5;
constexpr double kG = 9.8;

SystemSpec gravity(double gamma = kGamma) {
  return SystemSpec({"x", "y"}, {{"m", 1.0}, {"g", kG}, {"gamma", gamma}},
                    "(p_x^2+p_y^2)/(2*m) + m*g*y + gamma*s");
}

const State kGravityStart{{0.0, 0.0}, {1.0, 1.0}, 0.0};

// Linear ODEs of the falling body with friction, m = 1, started at kGravityStart.
double x_exact(double t) { return (1.0 - std::exp(-kGamma * t)) / kGamma; }
double y_exact(double t) {
  const double a = 1.0 + kG / kGamma;
  return a * (1.0 - std::exp(-kGamma * t)) / kGamma - kG / kGamma * t;
}
double py_exact(double t) { return (1.0 + kG / kGamma) * std::exp(-kGamma * t) - kG / kGamma; }

double max_position_error(const Trajectory& tr) {
  double e = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    e = std::max(e, std::abs(tr.states[i].q[0] - x_exact(tr.times[i])));
    e = std::max(e, std::abs(tr.states[i].q[1] - y_exact(tr.times[i])));
  }
  return e;
}

}  // namespace

TEST_CASE("single RK4 step reproduces the fourth-order Taylor polynomial") {
  const SystemSpec sys({"q"}, {}, "s");
  const double h = 0.1;
  const auto x = step_rk4(sys, State{{0.0}, {1.0}, 1.0}, h);
  const double taylor = 1.0 - h + h * h / 2 - h * h * h / 6 + h * h * h * h / 24;
  CHECK(x.p[0] == doctest::Approx(taylor).epsilon(1e-15));
  CHECK(x.p[0] == doctest::Approx(0.9048375).epsilon(1e-15));
  CHECK(x.s == doctest::Approx(taylor).epsilon(1e-15));
  CHECK(x.q[0] == 0.0);
}

TEST_CASE("RK4 steps of trivial systems") {
  const SystemSpec zero({"q"}, {}, "0");
  const State x0{{0.25}, {-1.5}, 3.0};
  CHECK(step_rk4(zero, x0, 0.7) == x0);

  const SystemSpec free({"q"}, {}, "p_q^2/2");
  CHECK(step_rk4(free, State{{0.0}, {1.0}, 0.0}, 0.5) == State{{0.5}, {1.0}, 0.25});
}

TEST_CASE("fixed-step run of the falling body with friction") {
  const auto sys = gravity();
  const auto tr = integrate_fixed(sys, kGravityStart, 0.0, 10.0, 1e-3);
  CHECK(tr.method == "rk4");
  CHECK(tr.size() == 10001);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == 10.0);
  CHECK(std::abs(tr.states.back().q[0] - 1.986524106) <= 1e-8);
  CHECK(std::abs(tr.states.back().q[0] - x_exact(10.0)) <= 1e-12);
  CHECK(std::abs(tr.states.back().p[1] - (20.6 * std::exp(-5.0) - 19.6)) <= 1e-7);
  CHECK(std::abs(tr.states.back().p[1] - py_exact(10.0)) <= 1e-10);
}

TEST_CASE("frictionless limit keeps p_x exactly") {
  const auto tr = integrate_fixed(gravity(0.0), kGravityStart, 0.0, 2.0, 0.01);
  for (const auto& x : tr.states) CHECK(x.p[0] == 1.0);
}

TEST_CASE("fixed grid lands on the final time") {
  const auto tr = integrate_fixed(gravity(), kGravityStart, 0.0, 1.0, 0.3);
  REQUIRE(tr.size() == 5);
  CHECK(tr.times[1] == doctest::Approx(0.3));
  CHECK(tr.times[3] == doctest::Approx(0.9));
  CHECK(tr.times.back() == 1.0);
  CHECK(tr.accepted_steps == 4);
  const auto t2 = integrate_fixed(gravity(), kGravityStart, 2.0, 3.0, 0.25);
  CHECK(t2.size() == 5);
  CHECK(t2.times.back() == 3.0);
}

TEST_CASE("invalid integration arguments") {
  const auto sys = gravity();
  CHECK_THROWS_AS(integrate_fixed(sys, kGravityStart, 1.0, 1.0, 0.1), Error);
  CHECK_THROWS_AS(integrate_fixed(sys, kGravityStart, 0.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(integrate_fixed(sys, kGravityStart, 0.0, 1.0, -0.1), Error);
  CHECK_THROWS_AS(integrate_adaptive(sys, kGravityStart, 0.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(integrate_fixed(sys, State{{0.0}, {0.0}, 0.0}, 0.0, 1.0, 0.1), DimensionMismatch);
}

TEST_CASE("RK4 is fourth order") {
  const auto sys = gravity();
  const double coarse = max_position_error(integrate_fixed(sys, kGravityStart, 0.0, 10.0, 0.1));
  const double fine = max_position_error(integrate_fixed(sys, kGravityStart, 0.0, 10.0, 0.05));
  // Errors must sit well above rounding for the ratio to mean anything.
  CHECK(fine > 1e-9);
  const double ratio = coarse / fine;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("conservative oscillator keeps its energy") {
  const SystemSpec sys({"q"}, {{"m", 1.0}, {"k", 1.0}, {"gamma", 0.0}}, "p_q^2/(2*m) + k*q^2/2 + gamma*s");
  const State x0{{1.0}, {0.0}, 0.0};
  const auto tr = integrate_fixed(sys, x0, 0.0, 100.0, 1e-3);
  const double h0 = hamiltonian_value(sys, x0);
  double drift = 0.0;
  for (const auto& x : tr.states) drift = std::max(drift, std::abs(hamiltonian_value(sys, x) - h0));
  CHECK(drift <= 1e-8);
  CHECK(tr.states.back().q[0] == doctest::Approx(std::cos(100.0)).epsilon(1e-9));
}

TEST_CASE("adaptive run follows the decay law") {
  const auto sys = gravity();
  const auto tr = integrate_adaptive(sys, kGravityStart, 0.0, 10.0, 1e-9);
  CHECK(tr.method == "dopri5");
  CHECK(tr.times.back() == 10.0);
  const double h0 = hamiltonian_value(sys, kGravityStart);
  for (std::size_t i = 0; i < tr.size(); ++i)
    CHECK(std::abs(hamiltonian_value(sys, tr.states[i]) / h0 - std::exp(-kGamma * tr.times[i])) <= 1e-6);
  CHECK(std::abs(tr.states.back().q[0] - x_exact(10.0)) <= 1e-6);
  for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
}

TEST_CASE("adaptive step counts respond to the tolerance") {
  const auto sys = gravity();
  const auto tight = integrate_adaptive(sys, kGravityStart, 0.0, 10.0, 1e-10);
  const auto loose = integrate_adaptive(sys, kGravityStart, 0.0, 10.0, 1e-4);
  CHECK(loose.accepted_steps < tight.accepted_steps);
  CHECK(loose.size() == loose.accepted_steps + 1);

  const SystemSpec zero({"q"}, {}, "0");
  const auto still = integrate_adaptive(zero, State{{1.0}, {2.0}, 3.0}, 0.0, 5.0, 1e-8);
  CHECK(still.size() == 2);
  CHECK(still.states.back() == State{{1.0}, {2.0}, 3.0});
}

TEST_CASE("blow-up is reported, not hidden") {
  // q'' = 3 q^2 escapes to infinity in finite time.
  const SystemSpec sys({"q"}, {}, "p_q^2/2 - q^3");
  const State x0{{1.0}, {1.0}, 0.0};
  try {
    integrate_fixed(sys, x0, 0.0, 10.0, 0.1);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.last_time() > 0.0);
    CHECK(e.last_time() < 10.0);
    CHECK(std::isfinite(e.last_state().q[0]));
  }
  CHECK_THROWS_AS(integrate_adaptive(sys, x0, 0.0, 10.0, 1e-8), Error);
}

TEST_CASE("step underflow") {
  const SystemSpec sys({"q"}, {}, "p_q^2/2 - q^3");
  AdaptiveOptions opts;
  opts.min_step_fraction = 1e-3;
  CHECK_THROWS_AS(integrate_adaptive(sys, State{{1.0}, {1.0}, 0.0}, 0.0, 10.0, 1e-8, opts), StepUnderflowError);
}

TEST_CASE("shortest round-trip formatting") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, std::exp(-5.0)}) {
    const auto s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("trajectory CSV round trip") {
  const auto sys = gravity();
  const auto tr = integrate_fixed(sys, kGravityStart, 0.0, 1.0, 0.1);
  std::ostringstream out;
  write_trajectory_csv(out, sys, tr);
  const std::string text = out.str();
  CHECK(text.rfind("t,x,y,p_x,p_y,s,H\n", 0) == 0);
  CHECK(text.find("\n0,0,0,1,1,0,1\n") != std::string::npos);

  std::istringstream in(text);
  const auto back = read_trajectory_csv(in, sys);
  CHECK(back.times == tr.times);
  REQUIRE(back.size() == tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) CHECK(back.states[i] == tr.states[i]);

  std::istringstream bad_header("t,a,b,p_a,p_b,s,H\n0,0,0,0,0,0,0\n");
  CHECK_THROWS_AS(read_trajectory_csv(bad_header, sys), SpecError);
  std::istringstream backwards("t,x,y,p_x,p_y,s,H\n1,0,0,0,0,0,0\n0,0,0,0,0,0,0\n");
  CHECK_THROWS_AS(read_trajectory_csv(backwards, sys), SpecError);
  std::istringstream short_row("t,x,y,p_x,p_y,s,H\n0,0,0\n");
  CHECK_THROWS_AS(read_trajectory_csv(short_row, sys), SpecError);
}
