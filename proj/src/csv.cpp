#include "qfb/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace qfb::csv {

std::string number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

std::string field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Table::Table(std::vector<std::string> header) : columns_(header.size()) { append(header); }

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_) throw std::logic_error("csv row width does not match header");
  append(cells);
  ++rows_;
}

void Table::append(const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) text_ += ',';
    text_ += field(cells[k]);
  }
  text_ += '\n';
}

}  // namespace qfb::csv
