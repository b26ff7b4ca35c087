#pragma once

#include <iosfwd>
#include <string>

#include "droplin/matrix.hpp"

namespace droplin {

// Matrix file format: a header line "rows,cols" followed by one line
// per row, entries comma-separated at 17 significant digits.  Both
// directions throw CsvError on malformed input.

void write_matrix_csv(std::ostream& out, const DenseMatrix& m);
void write_matrix_csv_file(const std::string& path, const DenseMatrix& m);

DenseMatrix read_matrix_csv(std::istream& in);
DenseMatrix read_matrix_csv_file(const std::string& path);

// Shortest-exact-roundtrip style formatting used by every CSV writer;
// fixed at 17 significant digits so repeated runs emit identical bytes.
std::string format_full(double v);

}  // namespace droplin
