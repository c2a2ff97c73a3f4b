#pragma once

// Check results and their JSON-lines rendering.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace octo {

using json = nlohmann::ordered_json;

/// Outcome of one gated check.  `stderr_` is 0 for deterministic checks.
struct CheckResult {
    std::string check;
    json inputs = json::object();
    double value = 0;
    double stderr_ = 0;
    std::string gate;
    bool pass = false;
};

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string fnv1a_hex(const std::string& s) {
    const std::uint64_t h = fnv1a(s);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Non-finite numbers are written as strings so every line stays valid JSON.
inline json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

inline json to_json(const CheckResult& r, const json& config = json()) {
    json j;
    j["check"] = r.check;
    j["inputs"] = r.inputs;
    j["inputs_digest"] = fnv1a_hex(r.inputs.dump());
    j["value"] = number(r.value);
    j["stderr"] = number(r.stderr_);
    j["gate"] = r.gate;
    j["pass"] = r.pass;
    if (!config.is_null()) j["config"] = config;
    return j;
}

inline bool all_pass(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs)
        if (!r.pass) return false;
    return !rs.empty();
}

} // namespace octo
