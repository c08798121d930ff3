// Recursive-descent parser for the expression grammar in expr.hpp.

#include <cctype>
#include <charconv>
#include <string>

#include "contact/errors.hpp"
#include "contact/expr.hpp"

namespace contact {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t pos = 0;
  std::string_view text;
  double number = 0.0;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "unexpected end of input";
  return "unexpected '" + std::string(t.text) + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token t;
    t.pos = pos_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      t.kind = Tok::Ident;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }
    t.text = src_.substr(pos_, 1);
    ++pos_;
    switch (c) {
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '^': t.kind = Tok::Caret; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case ',': t.kind = Tok::Comma; break;
      default: throw SyntaxError(t.pos, "unexpected character '" + std::string(t.text) + "'");
    }
    return t;
  }

 private:
  Token lex_number() {
    Token t;
    t.pos = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError(t.pos, "malformed number");
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t save = end;
      ++end;
      if (end < src_.size() && (src_[end] == '+' || src_[end] == '-')) ++end;
      if (digits() == 0) end = save;  // "2e" is the number 2 followed by identifier e
    }
    t.kind = Tok::Number;
    t.text = src_.substr(pos_, end - pos_);
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
      throw SyntaxError(t.pos, "malformed number '" + std::string(t.text) + "'");
    }
    pos_ = end;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::optional<Func> lookup_func(std::string_view name) {
  if (name == "sin") return Func::Sin;
  if (name == "cos") return Func::Cos;
  if (name == "exp") return Func::Exp;
  if (name == "log") return Func::Log;
  if (name == "sqrt") return Func::Sqrt;
  if (name == "abs") return Func::Abs;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view src, const Scope& scope) : lex_(src), scope_(scope) { advance(); }

  NodePtr parse_all() {
    NodePtr root = expr();
    if (cur_.kind != Tok::End) throw SyntaxError(cur_.pos, describe(cur_));
    return root;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) throw SyntaxError(cur_.pos, describe(cur_) + ", expected " + what);
    advance();
  }

  static NodePtr binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      NodeKind k = cur_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
      advance();
      lhs = binary(k, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      NodeKind k = cur_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
      advance();
      lhs = binary(k, lhs, unary());
    }
    return lhs;
  }

  NodePtr unary() {
    if (cur_.kind == Tok::Minus) {
      advance();
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Negate;
      n->lhs = unary();
      return n;
    }
    if (cur_.kind == Tok::Plus) {
      advance();
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (cur_.kind == Tok::Caret) {
      advance();
      return binary(NodeKind::Pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    Token t = cur_;
    switch (t.kind) {
      case Tok::Number: {
        advance();
        auto n = std::make_shared<Node>();
        n->value = t.number;
        return n;
      }
      case Tok::LParen: {
        advance();
        NodePtr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: return identifier(t);
      default: throw SyntaxError(t.pos, describe(t));
    }
  }

  NodePtr identifier(const Token& t) {
    advance();
    if (cur_.kind == Tok::LParen) {
      if (t.text == "diff") return derivative();
      auto f = lookup_func(t.text);
      if (!f) throw UnknownIdentifier(std::string(t.text));
      advance();
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Call;
      n->func = *f;
      n->lhs = expr();
      expect(Tok::RParen, "')'");
      return n;
    }
    auto slot = scope_.find(t.text);
    if (!slot && (t.text == "diff" || lookup_func(t.text)))
      throw SyntaxError(cur_.pos, describe(cur_) + ", expected '(' after " + std::string(t.text));
    if (!slot) throw UnknownIdentifier(std::string(t.text));
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Symbol;
    n->slot = *slot;
    return n;
  }

  NodePtr derivative() {
    advance();  // '('
    NodePtr body = expr();
    expect(Tok::Comma, "','");
    if (cur_.kind != Tok::Ident) throw SyntaxError(cur_.pos, describe(cur_) + ", expected a name");
    auto slot = scope_.find(cur_.text);
    if (!slot) throw UnknownIdentifier(std::string(cur_.text));
    advance();
    expect(Tok::RParen, "')'");
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Partial;
    n->slot = *slot;
    n->lhs = std::move(body);
    return n;
  }

  Lexer lex_;
  const Scope& scope_;
  Token cur_;
};

}  // namespace

Expression parse(std::string_view source, ScopePtr scope) {
  bool blank = true;
  for (char c : source) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) throw SyntaxError(0, "empty expression");
  NodePtr root = Parser(source, *scope).parse_all();
  return Expression(std::move(root), std::move(scope));
}

}  // namespace contact
