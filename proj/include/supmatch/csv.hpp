#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace supmatch::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name, -1 if absent.
  int column(const std::string& name) const;
};

/// Parse RFC-4180 style CSV: comma separated, double-quote escaping
/// (embedded quotes doubled), quoted fields may contain commas and
/// newlines, CRLF and LF both accepted, UTF-8 passed through unchanged.
/// The first record is the header. Throws IngestionError on unbalanced
/// quotes or on rows whose field count differs from the header.
Table read_file(const std::filesystem::path& path);
Table parse(const std::string& text, const std::string& origin);

std::string escape_field(const std::string& field);
void write_file(const std::filesystem::path& path, const Table& table);

}  // namespace supmatch::csv
