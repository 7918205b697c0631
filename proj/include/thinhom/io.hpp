#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace thinhom {

/// Shortest decimal text that reads back to exactly the same double.
std::string format_double(double v);

/// Writes `content` to a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace thinhom
