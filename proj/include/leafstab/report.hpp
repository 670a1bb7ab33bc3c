#pragma once

// Deterministic JSON rendering for command reports.

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

namespace leafstab {

using Json = nlohmann::ordered_json;

/// Two-space indented JSON; floats with 17 significant digits, keys in
/// insertion order, trailing newline.
std::string dump_report(const Json& j);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace leafstab
