#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace lava {

/// Hex-encoded SHA-256 digest of a byte buffer.
std::string sha256_hex(const void* data, std::size_t size);

/// Hex-encoded SHA-256 digest of a file's raw bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace lava
