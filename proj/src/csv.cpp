#include "qvi/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qvi {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::logic_error("write_csv: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_solution_csv(const std::string& path, const GridFunction& y,
                        const std::vector<double>& x) {
  if (x.size() != y.size())
    throw std::logic_error("write_solution_csv: coordinate count mismatch");
  std::vector<std::vector<std::string>> rows;
  rows.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    rows.push_back({std::to_string(i), format_double(x[i]), format_double(y.values[i])});
  write_csv(path, {"node", "x", "value"}, rows);
}

std::vector<double> read_solution_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {  // header
      first = false;
      continue;
    }
    if (line.empty()) continue;
    auto last = line.rfind(',');
    if (last == std::string::npos)
      throw std::runtime_error(path + ": malformed row: " + line);
    values.push_back(std::stod(line.substr(last + 1)));
  }
  return values;
}

}  // namespace qvi
