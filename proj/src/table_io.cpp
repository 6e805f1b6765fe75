#include "sntail/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "sntail/errors.hpp"

namespace sntail {

namespace {

bool needs_csv_quoting(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

void write_csv_field(std::ostream& os, const std::string& s) {
  if (!needs_csv_quoting(s)) {
    os << s;
    return;
  }
  os << '"';
  for (char c : s) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

void write_json_string(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\b': os << "\\b"; break;
      case '\f': os << "\\f"; break;
      case '\n': os << "\\n"; break;
      case '\r': os << "\\r"; break;
      case '\t': os << "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          os << buf;
        } else {
          os << c;
        }
    }
  }
  os << '"';
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void Table::append_row(std::vector<Cell> row) {
  if (row.size() != headers.size()) {
    throw domain_error("table row width does not match header");
  }
  rows.push_back(std::move(row));
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t j = 0; j < t.headers.size(); ++j) {
    if (j) os << ',';
    write_csv_field(os, t.headers[j]);
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) os << ',';
      if (row[j].numeric) {
        os << format_g17(row[j].number);
      } else {
        write_csv_field(os, row[j].text);
      }
    }
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& t) {
  os << "[\n";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    os << '{';
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) os << ',';
      write_json_string(os, t.headers[j]);
      os << ':';
      if (row[j].numeric) {
        if (std::isfinite(row[j].number)) {
          os << format_g17(row[j].number);
        } else {
          os << "null";
        }
      } else {
        write_json_string(os, row[j].text);
      }
    }
    os << '}';
    if (i + 1 < t.rows.size()) os << ',';
    os << '\n';
  }
  os << "]\n";
}

}  // namespace sntail
