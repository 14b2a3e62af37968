#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace z2bos {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: lattice files, spec files, CLI values.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")" : what),
        line(line), column(column) {}
  std::size_t line, column;
};

struct GraphError : Error {
  using Error::Error;
};

struct OddDegreeError : GraphError {
  explicit OddDegreeError(std::size_t v)
      : GraphError("vertex " + std::to_string(v) + " has odd degree"), vertex(v) {}
  std::size_t vertex;
};

// A computation refused because it would exceed a module's size bound.
struct SizeBoundError : Error {
  SizeBoundError(const std::string& module, const std::string& what) : Error(module + ": " + what), module(module) {}
  std::string module;
};

// An algebraic identity the code relies on did not hold.
struct RelationError : Error {
  using Error::Error;
};

} // namespace z2bos
