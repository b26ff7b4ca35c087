#include "droplin/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "droplin/errors.hpp"

namespace droplin {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  out << m.rows() << "," << m.cols() << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_full(m(i, j));
    }
    out << "\n";
  }
}

void write_matrix_csv_file(const std::string& path, const DenseMatrix& m) {
  std::ofstream f(path);
  if (!f) throw CsvError("cannot open for writing: " + path);
  write_matrix_csv(f, m);
  if (!f) throw CsvError("write failed: " + path);
}

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t lineno) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    const std::string cell =
        line.substr(pos, comma == std::string::npos ? comma : comma - pos);
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw CsvError("line " + std::to_string(lineno) + ": bad number '" +
                     cell + "'");
    }
    while (used < cell.size() &&
           (cell[used] == ' ' || cell[used] == '\r' || cell[used] == '\t'))
      ++used;
    if (used != cell.size())
      throw CsvError("line " + std::to_string(lineno) + ": bad number '" +
                     cell + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

DenseMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("missing header line");
  unsigned long rows = 0, cols = 0;
  char sep = 0;
  std::istringstream hdr(line);
  if (!(hdr >> rows >> sep >> cols) || sep != ',')
    throw CsvError("header must be 'rows,cols', got '" + line + "'");
  std::string rest;
  hdr >> rest;
  if (!rest.empty()) throw CsvError("trailing junk in header: '" + line + "'");

  DenseMatrix m(rows, cols);
  for (unsigned long i = 0; i < rows; ++i) {
    if (!std::getline(in, line))
      throw CsvError("expected " + std::to_string(rows) + " rows, file ends at " +
                     std::to_string(i));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<double> vals = parse_row(line, i + 2);
    if (vals.size() != cols)
      throw CsvError("line " + std::to_string(i + 2) + ": expected " +
                     std::to_string(cols) + " entries, got " +
                     std::to_string(vals.size()));
    for (unsigned long j = 0; j < cols; ++j) m(i, j) = vals[j];
  }
  if (!m.all_finite()) throw CsvError("non-finite entry in matrix");
  return m;
}

DenseMatrix read_matrix_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CsvError("cannot open: " + path);
  try {
    return read_matrix_csv(f);
  } catch (const CsvError& e) {
    throw CsvError(path + ": " + e.what());
  }
}

}  // namespace droplin
