#include "uam/report/csv.hpp"

#include <cstdlib>
#include <istream>
#include <iterator>
#include <ostream>

#include "uam/error.hpp"
#include "uam/sim/event_log.hpp"

namespace uam::report {
namespace {

void write_field(std::ostream& out, const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw DomainError("no column " + std::string(name));
}

const std::string& Table::cell(std::size_t row, std::string_view name) const { return rows.at(row).at(column(name)); }

double Table::number(std::size_t row, std::string_view name) const {
  const auto& s = cell(row, name);
  if (s.empty()) return 0.0;
  return std::strtod(s.c_str(), nullptr);
}

void write_csv(std::ostream& out, const Table& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      write_field(out, cells[i]);
    }
    out << "\r\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

Table read_csv(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  int line_no = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line_no;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      lines.push_back(std::move(row));
      row.clear();
      ++line_no;
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError(line_no, 0, "unterminated quoted field");
  if (!field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    lines.push_back(std::move(row));
  }
  Table t;
  if (lines.empty()) return t;
  t.header = std::move(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != t.header.size())
      throw ParseError(static_cast<int>(i + 1), 0, "row has " + std::to_string(lines[i].size()) + " fields, header has " +
                                                      std::to_string(t.header.size()));
    t.rows.push_back(std::move(lines[i]));
  }
  return t;
}

std::string cell(double v) { return sim::format_value(v); }
std::string cell(std::int64_t v) { return sim::format_value(v); }

}  // namespace uam::report
