#pragma once

/// \file
/// Minimal CSV emitter and reader for the tool's columnar outputs.
/// `#` lines are comments, the first other line is the header.

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace hvi::csv {

/// 12 significant digits, `.` decimal point regardless of locale.
std::string fmt(double v);

class Writer {
 public:
  Writer(std::ostream& os, const std::vector<std::string>& columns);

  void comment(const std::string& text);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
  std::size_t width_;
};

struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; throws std::out_of_range.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

/// Throws std::runtime_error on ragged rows or a missing header.
Table read(std::istream& is);

}  // namespace hvi::csv
