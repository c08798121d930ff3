#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "contact/calculus.hpp"
#include "contact/core.hpp"
#include "contact/errors.hpp"
#include "random_expr.hpp"

using namespace contact;

namespace {

SystemSpec gravity() {
  return SystemSpec({"x", "y"}, {{"m", 1.0}, {"g", 9.8}, {"gamma", 0.5}},
                    "(p_x^2+p_y^2)/(2*m) + m*g*y + gamma*s");
}

State random_state(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  State x;
  for (std::size_t i = 0; i < n; ++i) x.q.push_back(u(rng));
  for (std::size_t i = 0; i < n; ++i) x.p.push_back(u(rng));
  x.s = u(rng);
  return x;
}

// X_H assembled by hand from central differences of H.
Tangent fd_field(const SystemSpec& sys, const State& x) {
  const std::size_t n = x.dim();
  auto flat = flatten(x);
  auto h_at = [&](const std::vector<double>& f) { return hamiltonian_value(sys, state_from_flat(f)); };
  std::vector<double> grad(flat.size());
  for (std::size_t k = 0; k < flat.size(); ++k) {
    const double h = 1e-5 * std::max(1.0, std::abs(flat[k]));
    auto plus = flat, minus = flat;
    plus[k] += h;
    minus[k] -= h;
    grad[k] = (h_at(plus) - h_at(minus)) / (2 * h);
  }
  Tangent v;
  const double hs = grad[2 * n];
  double ppH = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v.dq.push_back(grad[n + i]);
    v.dp.push_back(-(grad[i] + x.p[i] * hs));
    ppH += x.p[i] * grad[n + i];
  }
  v.ds = ppH - hamiltonian_value(sys, x);
  return v;
}

}  // namespace

TEST_CASE("contact form and Reeb field") {
  State x{{0.0}, {1.0}, 0.0};
  CHECK(contact_form_apply(x, Tangent{{1.0}, {0.0}, 0.0}) == -1.0);
  CHECK(contact_form_apply(x, Tangent{{0.0}, {0.0}, 1.0}) == 1.0);
  CHECK(contact_form_apply(x, Tangent{{0.0}, {1.0}, 0.0}) == 0.0);

  State y{{1.0, 2.0}, {3.0, -4.0}, 5.0};
  CHECK(reeb_field(y) == Tangent{{0.0, 0.0}, {0.0, 0.0}, 1.0});
  CHECK(contact_form_apply(y, reeb_field(y)) == 1.0);
  CHECK(contract_deta(reeb_field(y)) == Covector{{0.0, 0.0}, {0.0, 0.0}, 0.0});
  CHECK(contact_form(y) == Covector{{-3.0, 4.0}, {0.0, 0.0}, 1.0});
}

TEST_CASE("chart validation") {
  CHECK_THROWS_AS(SystemSpec({"x", "x"}, {}, "x"), SpecError);
  CHECK_THROWS_AS(SystemSpec({"s"}, {}, "s"), SpecError);
  CHECK_THROWS_AS(SystemSpec({"sin"}, {}, "0"), SpecError);
  CHECK_THROWS_AS(SystemSpec({"x"}, {{"p_x", 1.0}}, "0"), SpecError);
  CHECK_THROWS_AS(SystemSpec({"x"}, {{"k", std::nan("")}}, "k"), SpecError);
  CHECK_THROWS_AS(SystemSpec({"x"}, {}, "k*x"), UnknownIdentifier);
  CHECK_THROWS_AS(SystemSpec({"x"}, {}, "x +"), SyntaxError);
  const auto sys = gravity();
  CHECK(sys.chart()->direction_name(2) == "p_x");
  CHECK(sys.chart()->direction_name(4) == "s");
  CHECK(sys.parameter("g") == 9.8);
  CHECK_THROWS_AS(hamiltonian_value(sys, State{{0.0}, {0.0}, 0.0}), DimensionMismatch);
}

TEST_CASE("Hamiltonian vector field of gravity with friction") {
  const auto sys = gravity();
  const State x{{0.0, 0.0}, {1.0, 1.0}, 0.0};
  CHECK(hamiltonian_value(sys, x) == 1.0);
  const auto v = hamiltonian_vector_field(sys, x);
  CHECK(v.dq[0] == 1.0);
  CHECK(v.dq[1] == 1.0);
  CHECK(v.dp[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(v.dp[1] == doctest::Approx(-10.3).epsilon(1e-15));
  CHECK(v.ds == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("degenerate Hamiltonians") {
  const SystemSpec zero({"q"}, {}, "0");
  const State x{{0.3}, {-0.7}, 1.1};
  CHECK(hamiltonian_vector_field(zero, x) == Tangent{{0.0}, {0.0}, 0.0});

  const SystemSpec pure_s({"q"}, {}, "s");
  const auto v = hamiltonian_vector_field(pure_s, State{{0.0}, {1.0}, 2.0});
  CHECK(v == Tangent{{0.0}, {-1.0}, -2.0});
}

TEST_CASE("symbolic X_H agrees with the pointwise field") {
  const auto sys = gravity();
  const auto xh = hamiltonian_field(sys);
  CHECK(xh.name() == "X_H");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_state(rng, 2);
    const auto a = hamiltonian_vector_field(sys, x);
    const auto b = xh.value(sys, x);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(a.dq[k] == doctest::Approx(b.dq[k]).epsilon(1e-14));
      CHECK(a.dp[k] == doctest::Approx(b.dp[k]).epsilon(1e-14));
    }
    CHECK(a.ds == doctest::Approx(b.ds).epsilon(1e-14));
  }
}

TEST_CASE("property: X_H matches a finite-difference construction") {
  testing::ExpressionGenerator gen({"q1", "q2", "p_q1", "p_q2", "s", "k"}, 11);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const SystemSpec sys({"q1", "q2"}, {{"k", 0.7}}, gen.generate(3));
    const auto x = random_state(rng, 2);
    const auto exact = hamiltonian_vector_field(sys, x);
    const auto fd = fd_field(sys, x);
    INFO(sys.hamiltonian().to_string());
    const auto e = flatten(exact), f = flatten(fd);
    for (std::size_t k = 0; k < e.size(); ++k) CHECK(std::abs(e[k] - f[k]) <= 1e-6 * std::max(1.0, std::abs(f[k])));
  }
}

TEST_CASE("property: X_H satisfies both defining equations") {
  testing::ExpressionGenerator gen({"q1", "q2", "p_q1", "p_q2", "s"}, 5);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const SystemSpec sys({"q1", "q2"}, {}, gen.generate(3));
    const auto x = random_state(rng, 2);
    const auto r = hamilton_equation_residuals(sys, x);
    const double scale = std::max(1.0, std::abs(hamiltonian_value(sys, x)));
    CHECK(std::abs(r.r_eta) <= 1e-12 * scale);
    CHECK(max_abs(r.r_deta) <= 1e-12 * std::max(scale, max_abs(hamiltonian_vector_field(sys, x))));
  }
}

TEST_CASE("a corrupted field leaves a residual") {
  const SystemSpec sys({"q1"}, {{"k", 1.0}}, "p_q1^2/2 + k*q1^2/2 + 0.3*s");
  const State x{{0.4}, {-1.2}, 0.5};
  auto v = hamiltonian_vector_field(sys, x);
  v.dq[0] += 1.0;
  const auto r = hamilton_equation_residuals(sys, x, v);
  CHECK(r.r_deta.cp[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(r.r_deta.cq[0]) <= 1e-14);
  CHECK(r.r_eta == doctest::Approx(1.2).epsilon(1e-14));  // η picks up −p·δq
}

TEST_CASE("property: H evolves as dH/dt = -H_s H") {
  testing::ExpressionGenerator gen({"q1", "p_q1", "s"}, 9);
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const SystemSpec sys({"q1"}, {}, gen.generate(3));
    const auto x = random_state(rng, 1);
    const auto jet = hamiltonian_jet(sys, x);
    const auto v = flatten(hamiltonian_vector_field(sys, x));
    double dh = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) dh += jet.gradient[k] * v[k];
    const double expected = -jet.gradient[2] * jet.value;
    CHECK(std::abs(dh - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("flat layouts round trip") {
  const State x{{1.0, 2.0}, {3.0, 4.0}, 5.0};
  CHECK(flatten(x) == std::vector<double>{1, 2, 3, 4, 5});
  CHECK(state_from_flat(flatten(x)) == x);
  CHECK_THROWS(state_from_flat(std::vector<double>{1.0, 2.0}));
}
