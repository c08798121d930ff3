#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "contact/errors.hpp"
#include "contact/expr.hpp"

namespace contact {

Scope::Scope(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw SpecError("duplicate name '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> Scope::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Bindings::Bindings(ScopePtr scope)
    : scope_(std::move(scope)), values_(scope_->size(), 0.0), bound_(scope_->size(), 0) {}

void Bindings::set(std::string_view name, double value) {
  auto slot = scope_->find(name);
  if (!slot) throw UnknownIdentifier(std::string(name));
  set(*slot, value);
}

void Bindings::set(std::size_t slot, double value) {
  values_.at(slot) = value;
  bound_.at(slot) = 1;
}

double Bindings::get(std::string_view name) const {
  auto slot = scope_->find(name);
  if (!slot) throw UnknownIdentifier(std::string(name));
  return get(*slot);
}

double Bindings::get(std::size_t slot) const {
  if (!is_bound(slot)) throw MissingBinding(scope_->name(slot));
  return values_[slot];
}

namespace detail {

void throw_domain(const char* what) { throw DomainError(what); }

}  // namespace detail

namespace {

void collect_slots(const Node& n, std::vector<std::size_t>& out) {
  switch (n.kind) {
    case NodeKind::Number: return;
    case NodeKind::Symbol: out.push_back(n.slot); return;
    case NodeKind::Partial: out.push_back(n.slot); break;
    default: break;
  }
  if (n.lhs) collect_slots(*n.lhs, out);
  if (n.rhs) collect_slots(*n.rhs, out);
}

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Number;
  n->value = v;
  return n;
}

NodePtr make_unary(NodeKind kind, NodePtr operand) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(operand);
  return n;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

const ScopePtr& common_scope(const Expression& a, const Expression& b) {
  if (a.scope() != b.scope() && !(*a.scope() == *b.scope())) {
    throw Error("cannot combine expressions from different scopes");
  }
  return a.scope();
}

bool is_number(const Node& n) { return n.kind == NodeKind::Number; }

// ---- printing ----

int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Negate: return 3;
    case NodeKind::Pow: return 4;
    case NodeKind::Number: return n.value < 0.0 || std::signbit(n.value) ? 3 : 5;
    default: return 5;
  }
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
  }
  return "?";
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void print(const Node& n, const Scope& scope, std::string& out);

void print_child(const Node& child, bool parens, const Scope& scope, std::string& out) {
  if (parens) out += '(';
  print(child, scope, out);
  if (parens) out += ')';
}

void print(const Node& n, const Scope& scope, std::string& out) {
  switch (n.kind) {
    case NodeKind::Number: out += format_number(n.value); return;
    case NodeKind::Symbol: out += scope.name(n.slot); return;
    case NodeKind::Negate:
      out += '-';
      print_child(*n.lhs, precedence(*n.lhs) <= 3, scope, out);
      return;
    case NodeKind::Call:
      out += func_name(n.func);
      out += '(';
      print(*n.lhs, scope, out);
      out += ')';
      return;
    case NodeKind::Partial:
      out += "diff(";
      print(*n.lhs, scope, out);
      out += ", ";
      out += scope.name(n.slot);
      out += ')';
      return;
    default: break;
  }
  const int p = precedence(n);
  const char* op = n.kind == NodeKind::Add   ? " + "
                   : n.kind == NodeKind::Sub ? " - "
                   : n.kind == NodeKind::Mul ? "*"
                   : n.kind == NodeKind::Div ? "/"
                                             : "^";
  const int lp = precedence(*n.lhs);
  const int rp = precedence(*n.rhs);
  const bool is_pow = n.kind == NodeKind::Pow;
  print_child(*n.lhs, lp < p || (is_pow && lp <= p), scope, out);
  out += op;
  print_child(*n.rhs, rp < p || (!is_pow && rp == p), scope, out);
}

NodePtr substitute_node(const NodePtr& n, std::span<const Expression> repl) {
  switch (n->kind) {
    case NodeKind::Number: return n;
    case NodeKind::Symbol:
      return n->slot < repl.size() ? repl[n->slot].node() : n;
    case NodeKind::Partial:
      throw Error("cannot compose an expression containing derivative nodes");
    default: break;
  }
  auto copy = std::make_shared<Node>(*n);
  if (n->lhs) copy->lhs = substitute_node(n->lhs, repl);
  if (n->rhs) copy->rhs = substitute_node(n->rhs, repl);
  return copy;
}

}  // namespace

Expression::Expression(NodePtr root, ScopePtr scope) : root_(std::move(root)), scope_(std::move(scope)) {
  collect_slots(*root_, referenced_);
  std::sort(referenced_.begin(), referenced_.end());
  referenced_.erase(std::unique(referenced_.begin(), referenced_.end()), referenced_.end());
}

Expression Expression::constant(double value, ScopePtr scope) {
  return Expression(make_number(value), std::move(scope));
}

Expression Expression::symbol(std::string_view name, ScopePtr scope) {
  auto slot = scope->find(name);
  if (!slot) throw UnknownIdentifier(std::string(name));
  return symbol(*slot, std::move(scope));
}

Expression Expression::symbol(std::size_t slot, ScopePtr scope) {
  if (slot >= scope->size()) throw Error("symbol slot out of range");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Symbol;
  n->slot = slot;
  return Expression(std::move(n), std::move(scope));
}

double Expression::evaluate(const Bindings& b) const {
  if (b.scope() != scope_ && !(*b.scope() == *scope_)) throw Error("bindings belong to a different scope");
  for (std::size_t slot : referenced_) {
    if (!b.is_bound(slot)) throw MissingBinding(scope_->name(slot));
  }
  return evaluate_slots<double>(b.values());
}

double Expression::differentiate(std::string_view var, const Bindings& b) const {
  auto slot = scope_->find(var);
  if (!slot) throw UnknownIdentifier(std::string(var));
  return differentiate(*slot, b);
}

double Expression::differentiate(std::size_t slot, const Bindings& b) const {
  if (!b.is_bound(slot)) throw MissingBinding(scope_->name(slot));
  if (!std::binary_search(referenced_.begin(), referenced_.end(), slot)) {
    evaluate(b);  // still surfaces domain and binding errors
    return 0.0;
  }
  evaluate(b);
  auto values = b.values();
  std::vector<Dual<double>> seeded(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) seeded[i] = Dual<double>(values[i], i == slot ? 1.0 : 0.0);
  return evaluate_slots<Dual<double>>(seeded).d;
}

Expression Expression::partial(std::size_t slot) const {
  if (slot >= scope_->size()) throw Error("partial slot out of range");
  if (!depends_on(slot)) return constant(0.0, scope_);
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Partial;
  n->slot = slot;
  n->lhs = root_;
  return Expression(std::move(n), scope_);
}

Expression Expression::substitute(std::span<const Expression> replacements) const {
  for (const auto& r : replacements) common_scope(*this, r);
  return Expression(substitute_node(root_, replacements), scope_);
}

std::string Expression::to_string() const {
  std::string out;
  print(*root_, *scope_, out);
  return out;
}

bool Expression::is_literal(double value) const { return is_number(*root_) && root_->value == value; }

bool Expression::depends_on(std::size_t slot) const {
  return std::binary_search(referenced_.begin(), referenced_.end(), slot);
}

Expression operator+(const Expression& a, const Expression& b) {
  const auto& scope = common_scope(a, b);
  if (a.is_literal(0.0)) return b;
  if (b.is_literal(0.0)) return a;
  if (is_number(a.root()) && is_number(b.root())) return Expression::constant(a.root().value + b.root().value, scope);
  return Expression(make_binary(NodeKind::Add, a.root_, b.root_), scope);
}

Expression operator-(const Expression& a, const Expression& b) {
  const auto& scope = common_scope(a, b);
  if (b.is_literal(0.0)) return a;
  if (a.is_literal(0.0)) return -b;
  if (is_number(a.root()) && is_number(b.root())) return Expression::constant(a.root().value - b.root().value, scope);
  return Expression(make_binary(NodeKind::Sub, a.root_, b.root_), scope);
}

Expression operator*(const Expression& a, const Expression& b) {
  const auto& scope = common_scope(a, b);
  if (a.is_literal(0.0) || b.is_literal(0.0)) return Expression::constant(0.0, scope);
  if (a.is_literal(1.0)) return b;
  if (b.is_literal(1.0)) return a;
  if (is_number(a.root()) && is_number(b.root())) return Expression::constant(a.root().value * b.root().value, scope);
  return Expression(make_binary(NodeKind::Mul, a.root_, b.root_), scope);
}

Expression operator/(const Expression& a, const Expression& b) {
  const auto& scope = common_scope(a, b);
  if (b.is_literal(1.0)) return a;
  return Expression(make_binary(NodeKind::Div, a.root_, b.root_), scope);
}

Expression operator-(const Expression& a) {
  if (is_number(a.root())) return Expression::constant(0.0 - a.root().value, a.scope());
  if (a.root().kind == NodeKind::Negate) return Expression(a.root().lhs, a.scope());
  return Expression(make_unary(NodeKind::Negate, a.root_), a.scope());
}

}  // namespace contact
