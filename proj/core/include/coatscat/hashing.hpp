#pragma once

#include "coatscat/geometry.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace coatscat {

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Canonical text of a profile's segment parameters.
std::string canonical_text(const GeneratrixProfile &profile);
std::string profile_hash(const GeneratrixProfile &profile);

} // namespace coatscat
