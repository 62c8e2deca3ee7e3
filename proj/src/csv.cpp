#include "taforge/csv.hpp"

#include <fstream>
#include <sstream>

#include "taforge/errors.hpp"

namespace taforge::csv {

namespace {

bool needs_quoting(std::string_view field) {
  return field.find_first_of(",\"\n\r") != std::string_view::npos;
}

void append_field(std::string& out, std::string_view field) {
  if (!needs_quoting(field)) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    append_field(out, row[i]);
  }
  out.push_back('\n');
}

}  // namespace

std::string serialize(const Table& table) {
  std::string out;
  append_row(out, table.header);
  for (const auto& row : table.rows) append_row(out, row);
  return out;
}

Table parse(std::string_view data) {
  Table table;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_open = false;
  std::size_t row_number = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    if (table.header.empty()) {
      table.header = std::move(row);
    } else {
      if (row.size() != table.header.size())
        throw ValidationError("csv: row " + std::to_string(row_number) + " has " +
                              std::to_string(row.size()) + " fields, expected " +
                              std::to_string(table.header.size()));
      table.rows.push_back(std::move(row));
    }
    row.clear();
    row_open = false;
    ++row_number;
  };

  for (std::size_t i = 0; i < data.size(); ++i) {
    char c = data[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          throw ValidationError("csv: row " + std::to_string(row_number) +
                                ": quote inside unquoted field");
        quoted = true;
        row_open = true;
        break;
      case ',':
        end_field();
        row_open = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        field.push_back(c);
        row_open = true;
        break;
    }
  }
  if (quoted)
    throw ValidationError("csv: row " + std::to_string(row_number) + ": unterminated quote");
  if (row_open || !field.empty() || !row.empty()) end_row();
  if (table.header.empty()) throw ValidationError("csv: missing header row");
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write file: " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace taforge::csv
