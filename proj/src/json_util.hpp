#pragma once

// Internal helpers shared by the JSON readers/writers.

#include <string>
#include <string_view>

#include "json.hpp"

#include "tap/core.hpp"

namespace tap::detail {

using json = nlohmann::json;

[[noreturn]] inline void malformed(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::MalformedInput, "field '" + path + "': " + what);
}

json parse_json(std::string_view text);

const json& field(const json& obj, const std::string& path, const char* key);
const json* optional_field(const json& obj, const char* key);
std::size_t as_index(const json& v, const std::string& path);
double as_number(const json& v, const std::string& path);
std::string as_string(const json& v, const std::string& path);
const json& as_array(const json& v, const std::string& path);
const json& as_object(const json& v, const std::string& path);

Sentence sentence_from_json(const json& j, const std::string& path);
json sentence_to_json(const Sentence& s);
RoleInventory inventory_from_json(const json& j, const std::string& path);
json inventory_to_json(const RoleInventory& inv);

Vertex vertex_from_json(const json& j, const std::string& path, const RoleInventory& inv,
                        std::size_t n_tokens);
json vertex_to_json(const Vertex& v, const RoleInventory& inv);

// Compact dump; numbers use the shortest round-trip form.
std::string dump(const json& j);

}  // namespace tap::detail
