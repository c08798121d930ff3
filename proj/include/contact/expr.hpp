#pragma once

// Scalar expressions over a fixed set of named slots.
//
// Grammar (precedence high to low):
//   primary  := number | name | func '(' expr ')' | 'diff' '(' expr ',' name ')' | '(' expr ')'
//   power    := primary ('^' unary)?          right-associative
//   unary    := ('-' | '+') unary | power     so -a^2 == -(a^2)
//   term     := unary (('*' | '/') unary)*
//   expr     := term (('+' | '-') term)*
// func is one of sin, cos, exp, log, sqrt, abs. Implicit multiplication is
// rejected. `diff(e, v)` is the exact partial of e with respect to v; it is
// what the printer emits for derivative nodes so printed output re-parses.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "contact/dual.hpp"

namespace contact {

/// Ordered list of names an expression may reference. Slot i is names()[i].
class Scope {
 public:
  explicit Scope(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t slot) const { return names_.at(slot); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const Scope& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

using ScopePtr = std::shared_ptr<const Scope>;

/// Values for the slots of a scope. Unset slots are an error at evaluation.
class Bindings {
 public:
  explicit Bindings(ScopePtr scope);

  void set(std::string_view name, double value);
  void set(std::size_t slot, double value);
  bool is_bound(std::size_t slot) const { return bound_.at(slot) != 0; }
  double get(std::string_view name) const;
  double get(std::size_t slot) const;

  const ScopePtr& scope() const noexcept { return scope_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  ScopePtr scope_;
  std::vector<double> values_;
  std::vector<char> bound_;
};

enum class NodeKind { Number, Symbol, Negate, Add, Sub, Mul, Div, Pow, Call, Partial };
enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::Number;
  double value = 0.0;    // Number
  std::size_t slot = 0;  // Symbol; Partial (differentiation variable)
  Func func = Func::Sin;  // Call
  NodePtr lhs;            // unary operand, left operand, call argument, Partial body
  NodePtr rhs;
};

/// Immutable expression tree bound to a scope.
class Expression {
 public:
  static Expression constant(double value, ScopePtr scope);
  static Expression symbol(std::string_view name, ScopePtr scope);
  static Expression symbol(std::size_t slot, ScopePtr scope);

  double evaluate(const Bindings& b) const;
  double differentiate(std::string_view var, const Bindings& b) const;
  double differentiate(std::size_t slot, const Bindings& b) const;

  /// Evaluate over raw slot values of any dual depth; no binding checks.
  template <class T>
  T evaluate_slots(std::span<const T> slots) const;

  /// Symbolic node standing for the exact partial with respect to `slot`.
  Expression partial(std::size_t slot) const;

  /// Replace each Symbol whose slot is in [0, replacements.size()) by the
  /// corresponding expression; other slots are left in place. Expressions
  /// containing derivative nodes cannot be composed and raise Error.
  Expression substitute(std::span<const Expression> replacements) const;

  std::string to_string() const;
  bool is_literal(double value) const;
  bool depends_on(std::size_t slot) const;

  const ScopePtr& scope() const noexcept { return scope_; }
  const Node& root() const noexcept { return *root_; }
  const NodePtr& node() const noexcept { return root_; }

  // Builders. These fold trivial identities (0 + a, 1 * a, -(-a), constant
  // arithmetic) so generated expressions stay readable; 0 * a folds to 0.
  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);

 private:
  Expression(NodePtr root, ScopePtr scope);
  friend Expression parse(std::string_view source, ScopePtr scope);

  NodePtr root_;
  ScopePtr scope_;
  std::vector<std::size_t> referenced_;  // sorted slots the tree reads
};

/// Parse `source`, resolving every name against `scope`.
Expression parse(std::string_view source, ScopePtr scope);

namespace detail {

inline constexpr int kMaxDualDepth = 3;

[[noreturn]] void throw_domain(const char* what);

template <class T>
T eval_node(const Node& n, std::span<const T> slots);

template <class T>
T eval_pow(const T& base, const T& exponent) {
  double b = value_of(base);
  if (is_constant(exponent)) {
    double e = value_of(exponent);
    if (b < 0.0 && e != std::floor(e)) throw_domain("negative base with fractional exponent");
    if (b == 0.0 && e < 0.0) throw_domain("zero raised to a negative power");
    return pow_const(base, e);
  }
  if (b <= 0.0) throw_domain("non-positive base with variable exponent");
  using std::exp;
  using std::log;
  return exp(exponent * log(base));
}

template <class T>
T eval_call(Func f, const T& x) {
  using std::abs;
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  switch (f) {
    case Func::Sin: return sin(x);
    case Func::Cos: return cos(x);
    case Func::Exp: return exp(x);
    case Func::Log:
      if (value_of(x) <= 0.0) throw_domain("log of non-positive value");
      return log(x);
    case Func::Sqrt:
      if (value_of(x) < 0.0) throw_domain("sqrt of negative value");
      if (value_of(x) == 0.0 && dual_depth<T> > 0) throw_domain("derivative of sqrt at zero");
      return sqrt(x);
    case Func::Abs: return abs(x);
  }
  return x;
}

template <class T>
T eval_node(const Node& n, std::span<const T> slots) {
  switch (n.kind) {
    case NodeKind::Number: return T(n.value);
    case NodeKind::Symbol: return slots[n.slot];
    case NodeKind::Negate: return -eval_node<T>(*n.lhs, slots);
    case NodeKind::Add: return eval_node<T>(*n.lhs, slots) + eval_node<T>(*n.rhs, slots);
    case NodeKind::Sub: return eval_node<T>(*n.lhs, slots) - eval_node<T>(*n.rhs, slots);
    case NodeKind::Mul: return eval_node<T>(*n.lhs, slots) * eval_node<T>(*n.rhs, slots);
    case NodeKind::Div: {
      T num = eval_node<T>(*n.lhs, slots);
      T den = eval_node<T>(*n.rhs, slots);
      if (value_of(den) == 0.0) throw_domain("division by zero");
      return num / den;
    }
    case NodeKind::Pow:
      return eval_pow<T>(eval_node<T>(*n.lhs, slots), eval_node<T>(*n.rhs, slots));
    case NodeKind::Call: return eval_call<T>(n.func, eval_node<T>(*n.lhs, slots));
    case NodeKind::Partial:
      if constexpr (dual_depth<T> < kMaxDualDepth) {
        std::vector<Dual<T>> lifted(slots.size());
        for (std::size_t i = 0; i < slots.size(); ++i) {
          lifted[i] = Dual<T>(slots[i], T(i == n.slot ? 1.0 : 0.0));
        }
        return eval_node<Dual<T>>(*n.lhs, std::span<const Dual<T>>(lifted)).d;
      } else {
        throw_domain("derivative nesting too deep");
      }
  }
  return T{};
}

}  // namespace detail

template <class T>
T Expression::evaluate_slots(std::span<const T> slots) const {
  return detail::eval_node<T>(*root_, slots);
}

}  // namespace contact
