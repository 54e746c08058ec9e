#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collex {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Attribute/object names or set sizes that do not belong to the universe at hand.
class UniverseError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration requested beyond the configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A value would violate the invariants of the type being constructed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

class QualificationError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Two contributions for the same object name disagree on some attribute.
class ConflictingEvidenceError : public Error {
 public:
  using Error::Error;
};

class MalformedDesignError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace collex
