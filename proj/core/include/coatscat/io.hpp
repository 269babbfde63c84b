#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace coatscat {

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);
std::string read_file(const std::filesystem::path &path);

} // namespace coatscat
