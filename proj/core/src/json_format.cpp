#include "zebra/json_format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "zebra/error.hpp"

namespace zebra {

std::string format_double(double value) {
  if (!std::isfinite(value)) {
    throw ValidationError("non-finite number cannot be serialized to JSON");
  }
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string out(buf.data(), end);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

namespace {

void write(const ordered_json& v, std::string& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case ordered_json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += ordered_json(key).dump();
        out += indent < 0 ? ":" : ": ";
        write(item, out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case ordered_json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write(item, out, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case ordered_json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    default:
      out += v.dump(-1, ' ', false, ordered_json::error_handler_t::strict);
      return;
  }
}

}  // namespace

std::string dump_canonical(const ordered_json& value) {
  std::string out;
  write(value, out, -1, 0);
  return out;
}

std::string dump_pretty(const ordered_json& value) {
  std::string out;
  write(value, out, 2, 0);
  return out;
}

}  // namespace zebra
