#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace qfb::csv {

/// Shortest representation that round-trips to the same double ("nan",
/// "inf" and "-inf" for non-finite values).
std::string number(double value);

/// RFC-4180 quoting when the field contains a comma, quote or line break.
std::string field(std::string_view text);

/// Accumulates LF-terminated rows.
class Table {
 public:
  explicit Table(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const noexcept { return rows_; }
  const std::string& str() const noexcept { return text_; }

 private:
  void append(const std::vector<std::string>& cells);

  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

}  // namespace qfb::csv
