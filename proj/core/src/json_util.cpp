#include "json_util.hpp"

#include <algorithm>
#include <cmath>

namespace stmir::detail {

json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
    std::size_t last_nl = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    std::size_t column = last_nl == std::string_view::npos ? byte + 1 : byte - last_nl;
    throw Error(Errc::ConfigError, source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                                       ": syntax error");
  }
}

const json& require(const json& object, const std::string& key, const std::string& pointer) {
  if (!object.is_object()) config_error(pointer, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) config_error(pointer + "/" + key, "missing required field");
  return *it;
}

double get_number(const json& object, const std::string& key, const std::string& pointer) {
  const json& v = require(object, key, pointer);
  if (!v.is_number()) config_error(pointer + "/" + key, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) config_error(pointer + "/" + key, "must be finite");
  return d;
}

std::uint64_t get_unsigned(const json& object, const std::string& key, const std::string& pointer) {
  const json& v = require(object, key, pointer);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  config_error(pointer + "/" + key, "expected a non-negative integer");
}

std::string get_string(const json& object, const std::string& key, const std::string& pointer) {
  const json& v = require(object, key, pointer);
  if (!v.is_string()) config_error(pointer + "/" + key, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& object, const std::string& key, const std::string& pointer) {
  const json& v = require(object, key, pointer);
  if (!v.is_boolean()) config_error(pointer + "/" + key, "expected true or false");
  return v.get<bool>();
}

}  // namespace stmir::detail
