#pragma once

#include <stdexcept>
#include <string>

namespace rci {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (matrix/zonotope/vector sizes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A document failed schema or consistency validation. The message starts
/// with the JSON path of the offending field.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// The LP backend could not produce a trustworthy answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace rci
