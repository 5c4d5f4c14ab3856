#pragma once

// Shared strict-JSON parsing helpers: every structural surprise in user
// input becomes an InputError carrying the JSON path, and unknown keys are
// rejected so typos cannot silently change meaning.

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "maxblocks/errors.hpp"

namespace maxblocks::jsonutil {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] inline void fail(const std::string& message) {
    throw InputError(message);
}

inline ordered_json parse_text(const std::string& text) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline const ordered_json& require_member(const ordered_json& obj, const char* key,
                                          const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + ": missing required key '" + key + "'");
    return *it;
}

inline void require_object(const ordered_json& value, const std::string& path) {
    if (!value.is_object()) fail(path + ": expected an object");
}

inline void require_array(const ordered_json& value, const std::string& path) {
    if (!value.is_array()) fail(path + ": expected an array");
}

inline std::string require_string(const ordered_json& value, const std::string& path) {
    if (!value.is_string()) fail(path + ": expected a string");
    return value.get<std::string>();
}

inline long require_integer(const ordered_json& value, const std::string& path) {
    if (!value.is_number_integer()) fail(path + ": expected an integer");
    return value.get<long>();
}

inline bool require_bool(const ordered_json& value, const std::string& path) {
    if (!value.is_boolean()) fail(path + ": expected a boolean");
    return value.get<bool>();
}

inline void reject_unknown_keys(const ordered_json& obj,
                                std::initializer_list<const char*> allowed,
                                const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) { known = true; break; }
        if (!known) fail(path + ": unknown key '" + it.key() + "'");
    }
}

} // namespace maxblocks::jsonutil
