#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sntail {

// Renders a double with up to 17 significant digits (printf %.17g), which
// is enough for exact binary round-trips through text.
std::string format_g17(double v);

// One table cell: verbatim text, or a number rendered with format_g17.
struct Cell {
  std::string text;
  double number = 0.0;
  bool numeric = false;

  Cell(std::string s) : text(std::move(s)) {}
  Cell(const char* s) : text(s) {}
  Cell(double v) : number(v), numeric(true) {}
};

// Header row plus data rows. Rows are validated against the header width
// as they are appended, so the writers can assume a rectangular table.
struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;

  explicit Table(std::vector<std::string> hdrs) : headers(std::move(hdrs)) {}

  void append_row(std::vector<Cell> row);
};

// RFC 4180 quoting: fields containing commas, quotes, or line breaks are
// quoted, with embedded quotes doubled. One header row, LF line endings.
void write_csv(std::ostream& os, const Table& t);

// Array of flat row objects whose keys are exactly the CSV headers, in
// header order. Numbers that are NaN or infinite become null (JSON has no
// literal for them).
void write_json(std::ostream& os, const Table& t);

}  // namespace sntail
