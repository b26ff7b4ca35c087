#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace droplin {

// Dense real matrix, row-major storage.  Value semantics throughout:
// operations return fresh matrices and never alias their inputs.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(const std::vector<double>& d);
  // Row-major literal, e.g. DenseMatrix::from_rows({{3, 0}, {0, 1}}).
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  DenseMatrix transposed() const;
  double frobenius_norm() const;
  double trace() const;
  bool all_finite() const;

  // Asymmetry gap ||A - A^T||_F; 0 for non-square is not meaningful,
  // callers check squareness first.
  double asymmetry() const;

  double column_sqnorm(std::size_t j) const;
  double column_dot(std::size_t j, std::size_t k) const;
  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, const std::vector<double>& v);

  // Columns [0, k) as a rows x k matrix; pads with zero columns when
  // k exceeds cols().
  DenseMatrix take_columns(std::size_t k) const;

  // In-place right rotation of columns p and q by (c, s):
  //   col_p <- c*col_p - s*col_q,  col_q <- s*col_p + c*col_q.
  void rotate_columns(std::size_t p, std::size_t q, double c, double s);

  // Scale column j by a.
  void scale_column(std::size_t j, double a);

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

// A^T * B without forming the transpose.
DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b);
// A * B^T without forming the transpose.
DenseMatrix multiply_a_bt(const DenseMatrix& a, const DenseMatrix& b);
// Column Gram matrix A^T A.
DenseMatrix gram(const DenseMatrix& a);

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x);
std::vector<double> matvec_transposed(const DenseMatrix& a,
                                      const std::vector<double>& x);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double sqnorm(const std::vector<double>& a);

}  // namespace droplin
