#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "contact/calculus.hpp"
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

VectorFieldSpec random_field(const SystemSpec& sys, testing::ExpressionGenerator& gen, const std::string& name) {
  std::vector<Expression> comps;
  for (std::size_t k = 0; k < sys.chart()->phase_dim(); ++k) comps.push_back(sys.parse(gen.generate(2)));
  return VectorFieldSpec(name, sys.chart(), comps);
}

std::vector<double> fd_jacobian(const SystemSpec& sys, const VectorFieldSpec& y, const State& x) {
  auto flat = flatten(x);
  const std::size_t d = flat.size();
  std::vector<double> jac(d * d);
  for (std::size_t j = 0; j < d; ++j) {
    const double h = 1e-5 * std::max(1.0, std::abs(flat[j]));
    auto plus = flat, minus = flat;
    plus[j] += h;
    minus[j] -= h;
    const auto a = flatten(y.value(sys, state_from_flat(plus)));
    const auto b = flatten(y.value(sys, state_from_flat(minus)));
    for (std::size_t k = 0; k < d; ++k) jac[k * d + j] = (a[k] - b[k]) / (2 * h);
  }
  return jac;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("field construction") {
  const auto sys = gravity();
  const auto y = VectorFieldSpec::parse("rot", sys, {{"x", "-y"}, {"y", "x"}});
  const State x{{1.0, 2.0}, {0.0, 0.0}, 0.0};
  CHECK(y.value(sys, x) == Tangent{{-2.0, 1.0}, {0.0, 0.0}, 0.0});
  CHECK(VectorFieldSpec::coordinate_field(sys, "s").value(sys, x) == reeb_field(x));
  CHECK(VectorFieldSpec::coordinate_field(sys, "p_y").value(sys, x) == Tangent{{0.0, 0.0}, {0.0, 1.0}, 0.0});
  CHECK_THROWS_AS(VectorFieldSpec::parse("bad", sys, {{"z", "1"}}), SpecError);
  CHECK_THROWS_AS(VectorFieldSpec::parse("bad", sys, {{"x", "1 +"}}), SyntaxError);
  CHECK_THROWS_AS(VectorFieldSpec::coordinate_field(sys, "gamma"), SpecError);
}

TEST_CASE("Jacobian of a polynomial field") {
  const SystemSpec sys({"q1"}, {}, "0");
  // Y = q1 p ∂q + s^2 ∂p + q1 ∂s
  const auto y = VectorFieldSpec::parse("Y", sys, {{"q1", "q1*p_q1"}, {"p_q1", "s^2"}, {"s", "q1"}});
  const State x{{2.0}, {3.0}, -1.0};
  const auto j = vf_jacobian(sys, y, x);
  REQUIRE(j.dim == 3);
  const std::vector<double> expected{3, 2, 0, 0, 0, -2, 1, 0, 0};
  CHECK(j.entries == expected);
}

TEST_CASE("Jacobian of X_H uses second derivatives of H") {
  const auto sys = gravity();
  const auto j = vf_jacobian(sys, hamiltonian_field(sys), State{{0.0, 0.0}, {1.0, 1.0}, 0.0});
  // ∂(dq_x)/∂p_x = 1/m, ∂(dp_x)/∂p_x = -gamma, ∂(ds)/∂p_x = p_x/m
  CHECK(j(0, 2) == doctest::Approx(1.0));
  CHECK(j(2, 2) == doctest::Approx(-0.5));
  CHECK(j(4, 2) == doctest::Approx(1.0));
  CHECK(j(4, 1) == doctest::Approx(-9.8));
  CHECK(j(4, 4) == doctest::Approx(-0.5));
}

TEST_CASE("property: Jacobians agree with central differences") {
  const SystemSpec sys({"q1", "q2"}, {{"k", 1.3}}, "p_q1^2/2 + k*q1*q2 + sin(s)*p_q2");
  testing::ExpressionGenerator gen({"q1", "q2", "p_q1", "p_q2", "s", "k"}, 21);
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto y = trial % 4 == 0 ? hamiltonian_field(sys) : random_field(sys, gen, "Y");
    const auto x = random_state(rng, 2);
    const auto exact = vf_jacobian(sys, y, x);
    const auto fd = fd_jacobian(sys, y, x);
    for (std::size_t k = 0; k < fd.size(); ++k) CHECK(close(exact.entries[k], fd[k], 1e-6));
  }
}

TEST_CASE("brackets that vanish") {
  const auto sys = gravity();
  const auto dx = VectorFieldSpec::coordinate_field(sys, "x");
  const auto reeb = VectorFieldSpec::coordinate_field(sys, "s");
  const auto xh = hamiltonian_field(sys);
  const State x{{0.3, -1.0}, {1.0, 2.0}, 0.7};
  CHECK(max_abs(lie_bracket(sys, dx, xh, x)) == 0.0);
  CHECK(max_abs(lie_bracket(sys, dx, reeb, x)) == 0.0);
  CHECK(max_abs(lie_bracket(sys, xh, xh, x)) == 0.0);
  CHECK(max_abs(lie_bracket(sys, VectorFieldSpec::zero("0", sys), xh, x)) == 0.0);
}

TEST_CASE("bracket of the Reeb field with X_H") {
  const auto sys = gravity();
  const auto reeb = VectorFieldSpec::coordinate_field(sys, "s");
  const State x{{0.0, 0.0}, {1.0, 1.0}, 0.0};
  const auto b = lie_bracket(sys, reeb, hamiltonian_field(sys), x);
  // H is linear in s, so only ∂_s of ds = p·H_p − H survives.
  CHECK(b == Tangent{{0.0, 0.0}, {0.0, 0.0}, -0.5});
}

TEST_CASE("property: brackets are antisymmetric and bilinear") {
  const SystemSpec sys({"q1"}, {{"k", 0.4}}, "p_q1^2/2 + k*q1^2 + s^2/3");
  testing::ExpressionGenerator gen({"q1", "p_q1", "s", "k"}, 31);
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const auto y = random_field(sys, gen, "Y");
    const auto z = random_field(sys, gen, "Z");
    const auto w = trial % 2 ? hamiltonian_field(sys) : random_field(sys, gen, "W");
    const auto x = random_state(rng, 1);
    const auto yz = flatten(lie_bracket(sys, y, z, x));
    const auto zy = flatten(lie_bracket(sys, z, y, x));
    for (std::size_t k = 0; k < yz.size(); ++k) CHECK(std::abs(yz[k] + zy[k]) <= 1e-12 * std::max(1.0, std::abs(yz[k])));

    std::vector<Expression> comb;
    for (std::size_t k = 0; k < 3; ++k) comb.push_back(sys.parse("2.5") * y.component(k) + sys.parse("-0.5") * z.component(k));
    const VectorFieldSpec mix("mix", sys.chart(), comb);
    const auto lhs = flatten(lie_bracket(sys, mix, w, x));
    const auto a = flatten(lie_bracket(sys, y, w, x));
    const auto b = flatten(lie_bracket(sys, z, w, x));
    for (std::size_t k = 0; k < lhs.size(); ++k) CHECK(close(lhs[k], 2.5 * a[k] - 0.5 * b[k], 1e-10));
  }
}

TEST_CASE("property: bracket agrees with finite-difference Jacobians") {
  const SystemSpec sys({"q1", "q2"}, {}, "p_q1*p_q2 + cos(q1)*s");
  testing::ExpressionGenerator gen({"q1", "q2", "p_q1", "p_q2", "s"}, 41);
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto y = random_field(sys, gen, "Y");
    const auto xh = hamiltonian_field(sys);
    const auto x = random_state(rng, 2);
    const auto jy = fd_jacobian(sys, y, x);
    const auto jx = fd_jacobian(sys, xh, x);
    const auto vy = flatten(y.value(sys, x));
    const auto vx = flatten(xh.value(sys, x));
    const auto exact = flatten(lie_bracket(sys, y, xh, x));
    const std::size_t d = vy.size();
    for (std::size_t k = 0; k < d; ++k) {
      double fd = 0.0;
      for (std::size_t j = 0; j < d; ++j) fd += vy[j] * jx[k * d + j] - vx[j] * jy[k * d + j];
      CHECK(close(exact[k], fd, 1e-6));
    }
  }
}

TEST_CASE("contact symmetries commute with the Reeb field") {
  const auto sys = gravity();
  const auto reeb = VectorFieldSpec::coordinate_field(sys, "s");
  std::mt19937_64 rng(7);
  for (const auto& y : {VectorFieldSpec::coordinate_field(sys, "x"), VectorFieldSpec::coordinate_field(sys, "y")}) {
    for (int i = 0; i < 10; ++i) {
      const auto x = random_state(rng, 2);
      CHECK(max_abs(lie_derivative_contact_form(sys, y, x)) == 0.0);
      CHECK(max_abs(lie_bracket(sys, y, reeb, x)) == 0.0);
    }
  }
}

TEST_CASE("Lie derivative of the contact form") {
  const SystemSpec sys({"q1"}, {}, "0");
  const State x{{1.0}, {2.0}, 0.0};
  CHECK(max_abs(lie_derivative_contact_form(sys, VectorFieldSpec::coordinate_field(sys, "q1"), x)) == 0.0);
  CHECK(max_abs(lie_derivative_contact_form(sys, VectorFieldSpec::coordinate_field(sys, "s"), x)) == 0.0);
  const auto dilation = VectorFieldSpec::parse("D", sys, {{"q1", "q1"}});
  const auto l = lie_derivative_contact_form(sys, dilation, x);
  CHECK(l == Covector{{-2.0}, {0.0}, 0.0});
  CHECK(contract_contact_form(dilation).evaluate(sys.bind(x)) == -2.0);
}

TEST_CASE("property: Cartan formula matches the coordinate Lie derivative") {
  const SystemSpec sys({"q1", "q2"}, {}, "0");
  testing::ExpressionGenerator gen({"q1", "q2", "p_q1", "p_q2", "s"}, 51);
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const auto y = random_field(sys, gen, "Y");
    const auto x = random_state(rng, 2);
    const auto jy = fd_jacobian(sys, y, x);
    const auto v = y.value(sys, x);
    const std::size_t n = 2, d = 5;
    // (L_Y η)_j = Y^k ∂_k η_j + η_k ∂_j Y^k with η = (−p, 0, 1).
    std::vector<double> expected(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      double acc = j < n ? -v.dp[j] : 0.0;
      for (std::size_t i = 0; i < n; ++i) acc -= x.p[i] * jy[i * d + j];
      acc += jy[(2 * n) * d + j];
      expected[j] = acc;
    }
    const auto got = flatten(lie_derivative_contact_form(sys, y, x));
    for (std::size_t j = 0; j < d; ++j) CHECK(close(got[j], expected[j], 1e-6));
  }
}

TEST_CASE("property: X_H is conformally contact with factor -H_s") {
  testing::ExpressionGenerator gen({"q1", "p_q1", "s"}, 61);
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemSpec sys({"q1"}, {}, gen.generate(3));
    const auto x = random_state(rng, 1);
    const auto l = flatten(lie_derivative_contact_form(sys, hamiltonian_field(sys), x));
    const double hs = hamiltonian_jet(sys, x).gradient[2];
    const auto eta = flatten(contact_form(x));
    for (std::size_t k = 0; k < l.size(); ++k) CHECK(close(l[k], -hs * eta[k], 1e-10));
  }
}

TEST_CASE("Lie derivatives of scalars along X_H") {
  const auto sys = gravity();
  const State x{{0.0, 0.0}, {1.0, 1.0}, 0.0};
  const auto xh = hamiltonian_field(sys);
  CHECK(lie_derivative_scalar(sys, xh, hamiltonian_scalar(sys), x) == doctest::Approx(-0.5).epsilon(1e-15));
  const ScalarFieldSpec px{"p_x", sys.parse("p_x")};
  CHECK(lie_derivative_scalar(sys, xh, px, x) == doctest::Approx(-0.5).epsilon(1e-15));
  const ScalarFieldSpec c{"c", sys.parse("3")};
  CHECK(lie_derivative_scalar(sys, xh, c, x) == 0.0);
}
