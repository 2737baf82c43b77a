#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zebra {

enum class ErrorKind {
  schema,
  parse,
  normalization,
  dimension,
  lookup,
  validation,
  config,
  audit,
  io,
};

std::string_view to_string(ErrorKind kind);

// Base for every error raised by the library. The kind lets callers map
// failures onto exit codes without a cascade of catch clauses.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& m) : Error(ErrorKind::schema, m) {}
};

// Carries the 1-based row/column (or line) of the offending input.
class ParseError : public Error {
 public:
  ParseError(const std::string& m, std::size_t line, std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class NormalizationError : public Error {
 public:
  explicit NormalizationError(const std::string& m)
      : Error(ErrorKind::normalization, m) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& m)
      : Error(ErrorKind::dimension, m) {}
};

class LookupError : public Error {
 public:
  explicit LookupError(const std::string& m) : Error(ErrorKind::lookup, m) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& m)
      : Error(ErrorKind::validation, m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error(ErrorKind::config, m) {}
};

class AuditError : public Error {
 public:
  explicit AuditError(const std::string& m) : Error(ErrorKind::audit, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::io, m) {}
};

}  // namespace zebra
