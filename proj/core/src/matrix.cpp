#include "droplin/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "droplin/errors.hpp"

namespace droplin {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr ? rows.begin()->size() : 0;
  DenseMatrix m(nr, nc);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != nc) throw DimensionMismatch("ragged row literal");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double DenseMatrix::trace() const {
  const std::size_t n = rows_ < cols_ ? rows_ : cols_;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (*this)(i, i);
  return s;
}

bool DenseMatrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

double DenseMatrix::asymmetry() const {
  double s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j) {
      const double d = (*this)(i, j) - (*this)(j, i);
      s += 2.0 * d * d;
    }
  return std::sqrt(s);
}

double DenseMatrix::column_sqnorm(std::size_t j) const {
  double s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    const double v = (*this)(i, j);
    s += v * v;
  }
  return s;
}

double DenseMatrix::column_dot(std::size_t j, std::size_t k) const {
  double s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, j) * (*this)(i, k);
  return s;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void DenseMatrix::set_column(std::size_t j, const std::vector<double>& v) {
  if (v.size() != rows_) throw DimensionMismatch("set_column length");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

DenseMatrix DenseMatrix::take_columns(std::size_t k) const {
  DenseMatrix m(rows_, k);
  const std::size_t keep = k < cols_ ? k : cols_;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < keep; ++j) m(i, j) = (*this)(i, j);
  return m;
}

void DenseMatrix::rotate_columns(std::size_t p, std::size_t q, double c,
                                 double s) {
  for (std::size_t i = 0; i < rows_; ++i) {
    const double vp = (*this)(i, p);
    const double vq = (*this)(i, q);
    (*this)(i, p) = c * vp - s * vq;
    (*this)(i, q) = s * vp + c * vq;
  }
}

void DenseMatrix::scale_column(std::size_t j, double a) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) *= a;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul shapes");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("add shapes");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("sub shapes");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("at_b shapes");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
    }
  return c;
}

DenseMatrix multiply_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("a_bt shapes");
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(j, k);
      c(i, j) = s;
    }
  return c;
}

DenseMatrix gram(const DenseMatrix& a) { return multiply_at_b(a, a); }

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x) {
  if (a.cols() != x.size()) throw DimensionMismatch("matvec shapes");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<double> matvec_transposed(const DenseMatrix& a,
                                      const std::vector<double>& x) {
  if (a.rows() != x.size()) throw DimensionMismatch("matvec_t shapes");
  std::vector<double> y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * xi;
  }
  return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sqnorm(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

}  // namespace droplin
