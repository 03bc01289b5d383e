#pragma once

#include <stdexcept>
#include <string>

namespace sfc {

// Error taxonomy. Each category maps onto one CLI exit code / C status.
enum class ErrorKind {
  argument,    // precondition violated by the caller
  data,        // malformed or invalid input data
  endpoint,    // remote embedding service unreachable or misbehaving
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what)
      : Error(ErrorKind::argument, what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ErrorKind::data, what) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::data, what) {}
};

// No token of a text was found in the word-vector vocabulary.
struct CoverageError : Error {
  explicit CoverageError(const std::string& what)
      : Error(ErrorKind::data, what) {}
};

// Fewer than two classes, or a class without samples.
struct DegenerateClassError : Error {
  explicit DegenerateClassError(const std::string& what)
      : Error(ErrorKind::data, what) {}
};

// Within-class scatter is numerically singular even after shrinkage.
struct ConditioningError : Error {
  explicit ConditioningError(const std::string& what)
      : Error(ErrorKind::data, what) {}
};

struct EndpointError : Error {
  explicit EndpointError(const std::string& what)
      : Error(ErrorKind::endpoint, what) {}
};

// The remote service answered, but not in the agreed shape.
struct ContractError : Error {
  explicit ContractError(const std::string& what)
      : Error(ErrorKind::endpoint, what) {}
};

}  // namespace sfc
