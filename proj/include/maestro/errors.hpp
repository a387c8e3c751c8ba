#pragma once

#include <stdexcept>
#include <string>

namespace maestro {

// Error categories; the C API maps these 1:1 onto maestro_status codes.
enum class ErrorCode {
  invalid_argument,
  parse,
  construction,
  no_path,
  event,
  io,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Precondition or invariant violation on a call contract.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& message)
      : Error(ErrorCode::invalid_argument, message) {}
};

// Catalog or scenario text rejected; carries the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error(ErrorCode::parse, "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Service graph cannot be constructed from the catalog.
class GraphError : public Error {
 public:
  explicit GraphError(const std::string& message)
      : Error(ErrorCode::construction, message) {}
};

class NoPathError : public Error {
 public:
  explicit NoPathError(const std::string& message)
      : Error(ErrorCode::no_path, message) {}
};

// Orchestration event rejected against the current catalog.
class EventError : public Error {
 public:
  explicit EventError(const std::string& message)
      : Error(ErrorCode::event, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorCode::io, message) {}
};

}  // namespace maestro
