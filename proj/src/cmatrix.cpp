#include "qel/cmatrix.hpp"

#include <cmath>
#include <cstdlib>

#include "qel/error.hpp"

namespace qel {

namespace {
// Entry counts below these run serially; the parallel kernels have no
// cross-iteration state, so results are identical either way.
constexpr long kMatmulParThreshold = 1L << 15;  // flops r*c*k
constexpr long kKronParThreshold = 1L << 14;    // output entries
}  // namespace

CMatrix::CMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {
  if (rows < 0 || cols < 0) fail(Errc::internal, "negative matrix dimension");
}

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const int r = int(rows.size());
  const int c = r == 0 ? 0 : int(rows.begin()->size());
  CMatrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (int(row.size()) != c) fail(Errc::internal, "ragged initializer");
    int j = 0;
    for (Complex v : row) m.at(i, j++) = v;
    ++i;
  }
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m.at(j, i) = std::conj(at(i, j));
  return m;
}

CMatrix CMatrix::transpose() const {
  CMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
  return m;
}

Complex CMatrix::trace() const {
  Complex t = 0.0;
  const int n = rows_ < cols_ ? rows_ : cols_;
  for (int i = 0; i < n; ++i) t += at(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double CMatrix::frobenius() const {
  double s = 0.0;
  for (const Complex& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

bool CMatrix::is_finite() const {
  for (const Complex& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

CVec CMatrix::col(int c) const {
  CVec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = at(i, c);
  return v;
}

CVec CMatrix::row(int r) const {
  CVec v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = at(r, j);
  return v;
}

void CMatrix::set_col(int c, const CVec& v) {
  for (int i = 0; i < rows_; ++i) at(i, c) = v[i];
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(Errc::internal, "shape mismatch in +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(Errc::internal, "shape mismatch in -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (Complex& v : data_) v *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

namespace ref {

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) fail(Errc::internal, "shape mismatch in matmul");
  CMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const Complex aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (int ia = 0; ia < a.rows(); ++ia)
    for (int ja = 0; ja < a.cols(); ++ja) {
      const Complex v = a.at(ia, ja);
      if (v == 0.0) continue;
      for (int ib = 0; ib < b.rows(); ++ib)
        for (int jb = 0; jb < b.cols(); ++jb)
          c.at(ia * b.rows() + ib, ja * b.cols() + jb) = v * b.at(ib, jb);
    }
  return c;
}

}  // namespace ref

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) fail(Errc::internal, "shape mismatch in matmul");
  const long flops = long(a.rows()) * a.cols() * b.cols();
  if (flops < kMatmulParThreshold) return ref::matmul(a, b);
  CMatrix c(a.rows(), b.cols());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const Complex aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const long entries = long(a.rows()) * b.rows() * a.cols() * b.cols();
  if (entries < kKronParThreshold) return ref::kron(a, b);
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
#pragma omp parallel for schedule(static)
  for (int ia = 0; ia < a.rows(); ++ia)
    for (int ja = 0; ja < a.cols(); ++ja) {
      const Complex v = a.at(ia, ja);
      if (v == 0.0) continue;
      for (int ib = 0; ib < b.rows(); ++ib)
        for (int jb = 0; jb < b.cols(); ++jb)
          c.at(ia * b.rows() + ib, ja * b.cols() + jb) = v * b.at(ib, jb);
    }
  return c;
}

CVec matvec(const CMatrix& a, const CVec& x) {
  if (a.cols() != int(x.size())) fail(Errc::internal, "shape mismatch in matvec");
  CVec y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    Complex s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a.at(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Complex inner(const CVec& x, const CVec& y) {
  if (x.size() != y.size()) fail(Errc::internal, "length mismatch in inner");
  Complex s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += std::conj(x[k]) * y[k];
  return s;
}

double vec_norm(const CVec& x) {
  double s = 0.0;
  for (const Complex& v : x) s += std::norm(v);
  return std::sqrt(s);
}

double vec_max_abs(const CVec& x) {
  double m = 0.0;
  for (const Complex& v : x) m = std::max(m, std::abs(v));
  return m;
}

CVec operator+(CVec x, const CVec& y) {
  if (x.size() != y.size()) fail(Errc::internal, "length mismatch in vector +");
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += y[k];
  return x;
}

CVec operator-(CVec x, const CVec& y) {
  if (x.size() != y.size()) fail(Errc::internal, "length mismatch in vector -");
  for (std::size_t k = 0; k < x.size(); ++k) x[k] -= y[k];
  return x;
}

CVec operator*(Complex s, CVec x) {
  for (Complex& v : x) v *= s;
  return x;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) fail(Errc::internal, "shape mismatch in max_abs_diff");
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a.at(i, j) - b.at(i, j)));
  return m;
}

double max_abs_diff(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) fail(Errc::internal, "length mismatch in max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace qel
