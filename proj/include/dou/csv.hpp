#pragma once

#include <istream>
#include <string>
#include <vector>

namespace dou {

// Minimal RFC-4180-ish CSV reader: quoted fields, embedded commas and
// doubled quotes, LF or CRLF line endings. One record per physical line
// (no embedded newlines; none of our schemas need them).
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads the next record into row; returns false at end of stream.
  bool next(std::vector<std::string>& row);

  // 1-based line number of the record last returned by next().
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);

}  // namespace dou
