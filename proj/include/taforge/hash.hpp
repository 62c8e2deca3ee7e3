#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace taforge {

// 64-bit FNV-1a. Stable across platforms; used for request fingerprints and
// artifact/manifest hashes.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string to_hex(std::uint64_t h);

inline std::string hash_hex(std::string_view data) { return to_hex(fnv1a64(data)); }

// Hash of a file's bytes. Throws ValidationError if the file cannot be read.
std::string hash_file(const std::string& path);

}  // namespace taforge
