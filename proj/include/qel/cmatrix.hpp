#ifndef QEL_CMATRIX_HPP
#define QEL_CMATRIX_HPP

#include <complex>
#include <initializer_list>
#include <vector>

namespace qel {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

/// Dense row-major complex matrix, the single numeric container of the
/// library.  Values are immutable in spirit: every operation returns a
/// fresh matrix, so sharing across threads is safe.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols);  // zero-filled
  static CMatrix identity(int n);
  static CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }

  Complex& at(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  const Complex& at(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }
  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  Complex trace() const;
  double max_abs() const;
  double frobenius() const;
  bool is_finite() const;

  CVec col(int c) const;
  CVec row(int r) const;
  void set_col(int c, const CVec& v);

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  CVec data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Complex s, CMatrix a);
CMatrix operator*(CMatrix a, Complex s);
CMatrix operator*(const CMatrix& a, const CMatrix& b);  // matmul

/// Matrix product; parallelized with OpenMP above a size threshold.
CMatrix matmul(const CMatrix& a, const CMatrix& b);
/// Kronecker product; parallelized with OpenMP above a size threshold.
CMatrix kron(const CMatrix& a, const CMatrix& b);

CVec matvec(const CMatrix& a, const CVec& x);

/// Serial reference kernels.  Kept as the ground truth the parallel
/// kernels are tested and benchmarked against.
namespace ref {
CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
}  // namespace ref

// Vector helpers (conjugation in the first slot of inner products).
Complex inner(const CVec& x, const CVec& y);
double vec_norm(const CVec& x);
double vec_max_abs(const CVec& x);
CVec operator+(CVec x, const CVec& y);
CVec operator-(CVec x, const CVec& y);
CVec operator*(Complex s, CVec x);

double max_abs_diff(const CMatrix& a, const CMatrix& b);
double max_abs_diff(const CVec& a, const CVec& b);

}  // namespace qel

#endif
