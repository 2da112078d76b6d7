#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace lisible {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace lisible
