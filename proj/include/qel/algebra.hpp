#ifndef QEL_ALGEBRA_HPP
#define QEL_ALGEBRA_HPP

#include <memory>
#include <string>
#include <vector>

#include "qel/cmatrix.hpp"

namespace qel {

/// Common surface of the coefficient algebras.  Elements are coefficient
/// vectors over a distinguished ordered basis; products and adjoints go
/// through precomputed structure constants, so they are exact coefficient
/// contractions.  Instances are immutable after construction.
class Algebra {
 public:
  virtual ~Algebra() = default;

  int dim() const { return dim_; }
  const std::string& label() const { return label_; }
  const CVec& unit_coeffs() const { return unit_; }

  CVec multiply(const CVec& x, const CVec& y) const;
  CVec adjoint_coeffs(const CVec& x) const;

  /// Concrete operator the coefficient vector represents.
  virtual CMatrix ambient(const CVec& coeffs) const = 0;
  virtual int ambient_dim() const = 0;

  /// Structure constants as a (dim*dim) x dim matrix; row i*dim+j holds
  /// the coefficients of basis_i * basis_j.
  const CMatrix& structure() const { return structure_; }
  /// Row i holds the coefficients of basis_i^*.
  const CMatrix& adjoint_rows() const { return adjoint_; }

 protected:
  Algebra() = default;
  int dim_ = 0;
  std::string label_;
  CVec unit_;
  CMatrix structure_;
  CMatrix adjoint_;
};

/// Finite-dimensional *-algebra in canonical block form: the full sum of
/// matrix blocks given by block_dims, carried with a distinguished basis
/// (arbitrary block-diagonal matrices spanning the whole algebra, matrix
/// units in the simplest presentations).  The canonical form makes
/// functional representatives, the dual norm and positivity exact.
class StarAlgebra final : public Algebra {
 public:
  /// Structural validation: block-diagonal support, linear independence,
  /// closure of the span under products and adjoints, unit in the span,
  /// and span equal to the declared block algebra.  Throws NotClosed,
  /// NoUnit or BadBlocks.
  static std::shared_ptr<const StarAlgebra> validate(std::vector<CMatrix> basis,
                                                     std::vector<int> block_dims,
                                                     double tol = 1e-9,
                                                     std::string label = "");

  const std::vector<int>& block_dims() const { return block_dims_; }
  const std::vector<CMatrix>& basis() const { return basis_; }

  CMatrix ambient(const CVec& coeffs) const override;
  int ambient_dim() const override { return ambient_dim_; }

  /// Block k of an ambient matrix.
  CMatrix block(const CMatrix& amb, int k) const;
  /// Coefficients of an ambient block-diagonal matrix in the basis.
  CVec coefficients(const CMatrix& amb) const;
  /// Block matrices X_k with f(a) = sum_k Tr(X_k a_k) for the functional
  /// with the given basis values.
  std::vector<CMatrix> representative(const CVec& values) const;

 private:
  StarAlgebra() = default;
  std::vector<int> block_dims_;
  std::vector<int> block_offsets_;
  int ambient_dim_ = 0;
  std::vector<CMatrix> basis_;
  std::shared_ptr<class Lu> coeff_solver_;  // B x = vec_block(amb)
  std::shared_ptr<class Lu> rep_solver_;    // B^T w = values
};

/// Tensor product of two block algebras, with basis all Kronecker pairs
/// (left basis) x (right basis) in lexicographic order.  Closure is
/// inherited from the factors; construction runs spot identity checks.
class TensorAlgebra final : public Algebra {
 public:
  TensorAlgebra(std::shared_ptr<const StarAlgebra> left, std::shared_ptr<const StarAlgebra> right);

  const std::shared_ptr<const StarAlgebra>& left() const { return left_; }
  const std::shared_ptr<const StarAlgebra>& right() const { return right_; }

  int pair_index(int i, int j) const { return i * right_->dim() + j; }
  std::pair<int, int> split_index(int p) const { return {p / right_->dim(), p % right_->dim()}; }

  CMatrix ambient(const CVec& coeffs) const override;
  int ambient_dim() const override { return left_->ambient_dim() * right_->ambient_dim(); }

 private:
  std::shared_ptr<const StarAlgebra> left_;
  std::shared_ptr<const StarAlgebra> right_;
};

/// Element of an algebra by its basis coefficients.
struct Element {
  std::shared_ptr<const Algebra> algebra;
  CVec coeffs;
};

Element unit_element(std::shared_ptr<const Algebra> a);
Element basis_element(std::shared_ptr<const Algebra> a, int i);
Element operator*(const Element& a, const Element& b);
Element operator+(Element a, const Element& b);
Element operator-(Element a, const Element& b);
Element operator*(Complex s, Element a);
Element adjoint(const Element& a);
CMatrix ambient(const Element& a);

/// Linear functional by its values on the basis.  In finite dimension
/// every linear functional is bounded and weak-* continuous, so no
/// continuity class is tracked.
struct Functional {
  std::shared_ptr<const Algebra> algebra;
  CVec values;

  Complex operator()(const Element& x) const;
  Complex at_unit() const;
};

Functional operator+(Functional f, const Functional& g);
Functional operator-(Functional f, const Functional& g);
Functional operator*(Complex s, Functional f);

/// Exact dual of the operator norm on a block algebra: the sum of the
/// trace norms of the block representatives.
double dual_norm(const Functional& f);
bool is_positive(const Functional& f, double tol = 1e-10);
bool is_state(const Functional& f, double tol = 1e-10);
/// Positivity check without shared ownership of the algebra.
bool values_positive(const StarAlgebra& a, const CVec& values, double tol = 1e-10);

/// f = mu (x) nu on the tensor algebra.
Functional tensor_functional(const Functional& mu, const Functional& nu,
                             std::shared_ptr<const TensorAlgebra> t);

/// Left slice map: applies mu to the left tensor factor of t.
Element slice_left(const Functional& mu, const Element& t);

/// Vector states from the frame {e_i, (e_i+e_j)/sqrt2, (e_i+i e_j)/sqrt2}
/// inside each block.  The family linearly spans the Hermitian dual, so
/// any state is a real-affine combination of its members (coefficients
/// sum to one by evaluating at the unit); quantifiers over all states
/// elsewhere in the library reduce to this family.  Spanning is verified
/// at construction.
std::vector<Functional> state_spanning_family(std::shared_ptr<const StarAlgebra> a);

/// Normalized ambient trace.
Functional trace_state(std::shared_ptr<const StarAlgebra> a);

}  // namespace qel

#endif
