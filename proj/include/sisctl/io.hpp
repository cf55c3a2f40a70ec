#pragma once

#include <filesystem>
#include <string>

namespace sisctl {

/// Decimal rendering with 17 significant digits; round-trips exactly.
std::string format_g17(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace sisctl
