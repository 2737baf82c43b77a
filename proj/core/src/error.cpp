#include "zebra/error.hpp"

namespace zebra {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::schema: return "schema error";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::normalization: return "normalization error";
    case ErrorKind::dimension: return "dimension error";
    case ErrorKind::lookup: return "lookup error";
    case ErrorKind::validation: return "validation error";
    case ErrorKind::config: return "configuration error";
    case ErrorKind::audit: return "audit error";
    case ErrorKind::io: return "I/O error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

namespace {

std::string with_location(const std::string& m, std::size_t line,
                          std::size_t column) {
  std::string out = "line " + std::to_string(line);
  if (column != 0) out += ", column " + std::to_string(column);
  return out + ": " + m;
}

}  // namespace

ParseError::ParseError(const std::string& m, std::size_t line,
                       std::size_t column)
    : Error(ErrorKind::parse, with_location(m, line, column)),
      line_(line),
      column_(column) {}

}  // namespace zebra
