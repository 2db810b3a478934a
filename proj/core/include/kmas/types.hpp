#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kmas {

using EntityId = std::int32_t;
using RelationId = std::int32_t;

// A fact (head, rel, tail) with dense per-graph ids.
struct Triple {
  EntityId head = -1;
  RelationId rel = -1;
  EntityId tail = -1;

  friend bool operator==(const Triple&, const Triple&) = default;
};

enum class Direction { Tail, Head };

inline const char* to_string(Direction d) {
  return d == Direction::Tail ? "tail" : "head";
}

// Base for every error raised by the library. The CLI maps subclasses to
// exit codes: ConfigError -> 2, DataError (incl. ParseError) -> 3,
// NumericalError -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : Error {
  using Error::Error;
};

struct ParseError : DataError {
  ParseError(const std::string& what, std::string file, long line)
      : DataError(file + ":" + std::to_string(line) + ": " + what),
        file(std::move(file)),
        line(line) {}
  std::string file;
  long line;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what, std::string field = "")
      : Error(field.empty() ? what : "config field '" + field + "': " + what),
        field(std::move(field)) {}
  std::string field;
};

struct NumericalError : Error {
  using Error::Error;
};

}  // namespace kmas
