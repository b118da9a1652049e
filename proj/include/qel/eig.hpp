#ifndef QEL_EIG_HPP
#define QEL_EIG_HPP

#include <vector>

#include "qel/cmatrix.hpp"

namespace qel {

/// Eigendecomposition m = U diag(values) U* of a Hermitian matrix.
/// Eigenvalues sorted descending; inside a degenerate cluster the columns
/// of U are phase-fixed and ordered lexicographically on rounded
/// coordinates, so identical inputs give identical output.
struct HermEigResult {
  std::vector<double> values;
  CMatrix vectors;  // orthonormal columns
};

/// Cyclic complex Jacobi.  Throws NotHermitian when the symmetry defect
/// exceeds herm_tol * max|m|.
HermEigResult hermitian_eig(const CMatrix& m, double herm_tol = 1e-10);

/// Singular value decomposition via one-sided Jacobi on the columns.
/// singular_values sorted descending; right has orthonormal columns
/// (c x c); left columns are m v_j / sigma_j (zero where sigma_j ~ 0).
struct SvdResult {
  std::vector<double> singular_values;
  CMatrix left;   // r x c
  CMatrix right;  // c x c
};

SvdResult jacobi_svd(const CMatrix& m);

/// Orthonormal basis of { x : |m x| <= tol * |m| * |x| }, as columns.
/// Full space for m = 0; deterministic column order and phases.
CMatrix null_space(const CMatrix& m, double tol);

/// Orthonormal basis of the numerical column span (singular values above
/// tol * sigma_max kept).
CMatrix orthonormal_range(const CMatrix& m, double tol);

double operator_norm(const CMatrix& m);  // largest singular value
double trace_norm(const CMatrix& m);     // sum of singular values

/// Eigenvalues of a general complex matrix by Hessenberg reduction and
/// shifted QR.  Sorted by (-|z|, -Re z, -Im z).  Diagnostic use only.
CVec general_eigenvalues(CMatrix m);

/// LU factorization with partial pivoting for square complex systems.
class Lu {
 public:
  explicit Lu(CMatrix a);
  CVec solve(CVec b) const;
  CMatrix solve(const CMatrix& b) const;  // column-wise

 private:
  CMatrix lu_;
  std::vector<int> perm_;
};

}  // namespace qel

#endif
