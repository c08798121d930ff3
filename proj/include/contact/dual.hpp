#pragma once

// Forward-mode dual numbers a + b·ε with ε² = 0.
//
// Dual<T> nests: Dual<Dual<double>> carries two independent infinitesimals,
// which is how second partials (the Jacobian of a Hamiltonian vector field)
// are obtained without symbolic differentiation.

#include <cmath>
#include <type_traits>

namespace contact {

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // derivative along the seeded direction

  constexpr Dual() = default;
  constexpr Dual(T value) : v(value), d{} {}  // NOLINT: implicit lift of constants
  template <class U>
    requires(std::is_arithmetic_v<U> && !std::is_same_v<T, U>)
  constexpr Dual(U value) : v(T(value)), d{} {}  // NOLINT
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}
};

template <class T>
inline constexpr int dual_depth = 0;
template <class T>
inline constexpr int dual_depth<Dual<T>> = 1 + dual_depth<T>;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

inline bool is_zero(double x) { return x == 0.0; }
template <class T>
bool is_zero(const Dual<T>& x) {
  return is_zero(x.v) && is_zero(x.d);
}

/// True when no seeded direction carries a nonzero derivative.
inline bool is_constant(double) { return true; }
template <class T>
bool is_constant(const Dual<T>& x) {
  return is_zero(x.d) && is_constant(x.v);
}

template <class T>
constexpr Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}
template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}
template <class T>
constexpr Dual<T> operator*(double c, const Dual<T>& a) {
  return {c * a.v, c * a.d};
}

template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), a.d * cos(a.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -(a.d * sin(a.v))};
}
template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, a.d * e};
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.v), a.d / a.v};
}
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T r = sqrt(a.v);
  return {r, a.d / (T(2.0) * r)};
}
/// d|x|/dx is taken as 0 at x = 0.
template <class T>
Dual<T> abs(const Dual<T>& a) {
  double x = value_of(a.v);
  if (x > 0) return a;
  if (x < 0) return -a;
  using std::abs;
  return {abs(a.v), T{}};
}

/// a^n for a constant real exponent n.
inline double pow_const(double a, double n) { return std::pow(a, n); }
template <class T>
Dual<T> pow_const(const Dual<T>& a, double n) {
  if (n == 0.0) return Dual<T>(T(1.0));
  if (n == 1.0) return a;
  return {pow_const(a.v, n), n * pow_const(a.v, n - 1.0) * a.d};
}

}  // namespace contact
