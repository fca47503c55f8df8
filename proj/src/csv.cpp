#include "hvi/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hvi::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

Writer::Writer(std::ostream& os, const std::vector<std::string>& columns)
    : os_(os), width_(columns.size()) {
  row(columns);
}

void Writer::comment(const std::string& text) { os_ << "# " << text << '\n'; }

void Writer::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("csv: row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    os_ << cells[i];
  }
  os_ << '\n';
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("csv: no column " + name);
}

double Table::number(std::size_t r, const std::string& name) const {
  const std::string& cell = rows.at(r).at(column(name));
  return std::stod(cell);
}

Table read(std::istream& is) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
      continue;
    }
    auto cells = split(line);
    if (!have_header) {
      t.columns = std::move(cells);
      have_header = true;
    } else if (cells.size() != t.columns.size()) {
      throw std::runtime_error("csv: ragged row: " + line);
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw std::runtime_error("csv: missing header row");
  return t;
}

}  // namespace hvi::csv
