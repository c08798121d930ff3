#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contact {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression source. `position` is a 0-based byte offset.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error("syntax error at position " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(std::string name)
      : Error("unknown identifier '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class MissingBinding : public Error {
 public:
  explicit MissingBinding(std::string name)
      : Error("no value bound for '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// log of a non-positive number, division by zero, and similar.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

/// Invalid system or spec-document contents.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace contact
