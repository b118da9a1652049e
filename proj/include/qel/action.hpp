#ifndef QEL_ACTION_HPP
#define QEL_ACTION_HPP

#include <memory>
#include <optional>

#include "qel/quantum_group.hpp"

namespace qel {

struct ActionOptions {
  double tol = 1e-9;
  // Structural requirements enforced by default; the averaging engine
  // itself never uses injectivity, so callers may relax it.
  bool require_unital = true;
  bool require_injective = true;
};

/// Coaction alpha: A -> R (x) A of a quantum group (R, Delta) on a block
/// algebra A, stored as a dimA x (dimR*dimA) coefficient tensor:
/// alpha(a_i) = sum_{j,k} C(i, j*dimA + k) r_j (x) a_k.
/// Validation checks the *-homomorphism laws, unitality, injectivity and
/// the coaction identity (id (x) alpha) alpha = (Delta (x) id) alpha.
class Action {
 public:
  static Action validate(std::shared_ptr<const StarAlgebra> source,
                         std::shared_ptr<const QuantumGroup> group, CMatrix alpha,
                         ActionOptions opts = {});

  const std::shared_ptr<const StarAlgebra>& source() const { return source_; }
  const std::shared_ptr<const QuantumGroup>& group() const { return group_; }
  const std::shared_ptr<const TensorAlgebra>& range() const { return range_; }  // R (x) A
  const CMatrix& alpha() const { return alpha_; }
  bool unital() const { return unital_; }
  bool injective() const { return injective_; }
  double coaction_defect() const { return coaction_defect_; }
  double homomorphism_defect() const { return hom_defect_; }

  /// alpha applied to an element of A.
  Element apply(const Element& a) const;

 private:
  Action() = default;
  std::shared_ptr<const StarAlgebra> source_;
  std::shared_ptr<const QuantumGroup> group_;
  std::shared_ptr<const TensorAlgebra> range_;
  CMatrix alpha_;
  bool unital_ = false;
  bool injective_ = false;
  double coaction_defect_ = 0.0;
  double hom_defect_ = 0.0;
};

/// alpha = Delta: the group translating itself.
Action translation_action(std::shared_ptr<const QuantumGroup> qg);
/// alpha(a) = 1_R (x) a.
Action trivial_action(std::shared_ptr<const QuantumGroup> qg, std::shared_ptr<const StarAlgebra> source);

/// max over thetas and basis elements of |(theta (x) omega)(alpha(a)) - omega(a)|.
double invariance_check(const Functional& omega, const Action& act,
                        const std::vector<Functional>& thetas);

/// GNS data of (A, omega): gram = [omega(b_i* b_j)], an eigenvalue cutoff
/// removes the null directions, gamma maps coefficient vectors to
/// orthonormal coordinates and lift is its right inverse on the range.
struct GnsSpace {
  std::shared_ptr<const StarAlgebra> algebra;
  Functional omega;
  CMatrix gram;      // dimA x dimA
  CMatrix gamma;     // dimH x dimA
  CMatrix lift;      // dimA x dimH, gamma * lift = I_H
  CVec omega_vector; // gamma(1)
  int dim = 0;
  int kept_rank = 0;
  double cutoff = 0.0;          // relative eigenvalue cutoff used
  bool near_cutoff = false;     // gram spectrum crowds the cutoff

  CVec map(const Element& a) const;  // gamma(a)
};

GnsSpace gns(std::shared_ptr<const StarAlgebra> a, const Functional& omega, double cutoff = 1e-12);

/// The vector-valued slice integral: gamma((mu (x) id)(t)) for t in R (x) A.
CVec mu_tilde(const Functional& mu, const Element& t, const GnsSpace& g);

/// Matrix of the induced operator on the GNS space, with its operator
/// norm.  Construction checks the invariance identity
/// (mu (x) omega) o alpha = mu(1) omega for the given mu and verifies the
/// assembled matrix is consistent across the GNS null space.
struct TransferOperator {
  CMatrix matrix;  // dimH x dimH
  Functional mu;
  double op_norm = 0.0;
};

TransferOperator transfer_operator(const Functional& mu, const Action& act, const GnsSpace& g,
                                   double tol = 1e-9);

}  // namespace qel

#endif
