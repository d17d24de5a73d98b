#pragma once

// Internal helpers for config parsing. Errors name the JSON pointer of the
// offending field, or line:column for syntax errors.

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "stmir/error.hpp"
#include "stmir/receptor.hpp"

namespace stmir::detail {

using json = nlohmann::json;

[[noreturn]] inline void config_error(const std::string& pointer, const std::string& message) {
  throw Error(Errc::ConfigError, (pointer.empty() ? std::string("/") : pointer) + ": " + message);
}

json parse_json_text(std::string_view text, const std::string& source);

const json& require(const json& object, const std::string& key, const std::string& pointer);
double get_number(const json& object, const std::string& key, const std::string& pointer);
std::uint64_t get_unsigned(const json& object, const std::string& key, const std::string& pointer);
std::string get_string(const json& object, const std::string& key, const std::string& pointer);
bool get_bool(const json& object, const std::string& key, const std::string& pointer);

ReceptorSpec receptor_from_json(const json& node, const std::string& pointer);
json receptor_to_json_value(const ReceptorSpec& spec);

}  // namespace stmir::detail
