#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace uam::report {

// A text table as written to disk. Cells are already formatted.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index; throws DomainError when absent.
  std::size_t column(std::string_view name) const;
  const std::string& cell(std::size_t row, std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;  // empty cell reads as 0
};

// RFC-4180: CRLF line ends, fields quoted only when needed.
void write_csv(std::ostream& out, const Table& t);
// Throws ParseError on unterminated quotes or ragged rows.
Table read_csv(std::istream& in);

std::string cell(double v);
std::string cell(std::int64_t v);
inline std::string cell(int v) { return cell(static_cast<std::int64_t>(v)); }
inline std::string cell(std::size_t v) { return cell(static_cast<std::int64_t>(v)); }

}  // namespace uam::report
