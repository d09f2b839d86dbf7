#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"

namespace weyldens_cli {

using Json = nlohmann::ordered_json;

// nlohmann's dump prints shortest round-trip numbers; reports want a fixed
// 17-significant-digit scientific form, so floats are written here.
inline void write_json(std::string& out, const Json& j, int indent, int depth = 0) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        write_json(out, value, indent, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_json(out, j[i], indent, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.16e", x);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

inline std::string to_text(const Json& j) {
  std::string out;
  write_json(out, j, 2);
  out += '\n';
  return out;
}

}  // namespace weyldens_cli
