#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace taforge::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180 serialization with LF line endings. Fields containing commas,
// quotes or newlines are quoted; quotes are doubled.
std::string serialize(const Table& table);

// Throws ValidationError naming the offending row on malformed input
// (unbalanced quotes, column count mismatch against the header).
Table parse(std::string_view data);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view data);

}  // namespace taforge::csv
