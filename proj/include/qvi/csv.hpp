#pragma once

#include <string>
#include <vector>

#include "qvi/lattice.hpp"

namespace qvi {

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

// Comma-separated, LF line endings, header row first; cells written
// verbatim (callers format numbers with format_double for determinism).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// (node, x, value) rows for a grid function; x supplied per node.
void write_solution_csv(const std::string& path, const GridFunction& y,
                        const std::vector<double>& x);

// Reads back the value column of a solution CSV.
std::vector<double> read_solution_csv(const std::string& path);

}  // namespace qvi
