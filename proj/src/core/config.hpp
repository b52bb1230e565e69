#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

namespace recirc {

// Rejects unknown keys so parameter-name typos fail loudly instead of
// silently falling back to defaults.
inline void require_keys_subset(const nlohmann::json& obj,
                                std::initializer_list<const char*> allowed,
                                const std::string& context) {
    if (obj.is_null()) return;
    if (!obj.is_object())
        throw std::invalid_argument(context + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known) throw std::invalid_argument(context + ": unknown key '" + key + "'");
    }
}

inline double json_number(const nlohmann::json& obj, const char* key, double fallback,
                          const std::string& context) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw std::invalid_argument(context + ": '" + key + "' must be a number");
    return v.get<double>();
}

inline int json_int(const nlohmann::json& obj, const char* key, int fallback,
                    const std::string& context) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
        throw std::invalid_argument(context + ": '" + key + "' must be an integer");
    return v.get<int>();
}

inline std::uint64_t json_u64(const nlohmann::json& obj, const char* key, std::uint64_t fallback,
                              const std::string& context) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0 &&
                                   !v.is_number_unsigned()))
        throw std::invalid_argument(context + ": '" + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

inline std::string json_string(const nlohmann::json& obj, const char* key,
                               const std::string& fallback, const std::string& context) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) throw std::invalid_argument(context + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

}  // namespace recirc
