#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace circmech {

// SHA-256 of a byte string, as a lowercase hex digest.
std::string sha256_hex(std::string_view bytes);

// SHA-256 of a file's contents. Throws std::runtime_error if the file
// cannot be opened.
std::string sha256_file_hex(const std::string& path);

// Derives an independent 64-bit seed for a named substream of a root seed.
// Hashes root_seed (little-endian) || label || index (little-endian) and
// takes the first 8 bytes of the digest. Stable across platforms.
std::uint64_t derive_substream(std::uint64_t root_seed, std::string_view label,
                               std::uint64_t index);

}  // namespace circmech
