#ifndef QEL_QUANTUM_GROUP_HPP
#define QEL_QUANTUM_GROUP_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qel/algebra.hpp"

namespace qel {

/// Multiplication table of a finite group; element 0 is the identity.
struct CayleyTable {
  int order = 0;
  std::vector<std::vector<int>> table;

  /// Checks identity, associativity and invertibility; throws NotAGroup.
  static CayleyTable validate(std::vector<std::vector<int>> t);

  static CayleyTable cyclic(int n);
  static CayleyTable klein4();
  static CayleyTable symmetric3();

  int mul(int g, int h) const { return table[g][h]; }
  int inverse(int g) const;
  bool is_abelian() const;
  int element_order(int g) const;
  int exponent() const;
};

/// Block algebra with a validated comultiplication and its (always
/// present) bi-invariant Haar state.  The delta tensor D is stored as a
/// dim x dim^2 matrix: Delta(b_i) = sum_{j,k} D(i, j*dim+k) b_j (x) b_k.
class QuantumGroup {
 public:
  QuantumGroup(std::shared_ptr<const StarAlgebra> algebra, CMatrix delta,
               std::optional<CVec> declared_haar = std::nullopt, double tol = 1e-9,
               std::string name = "");

  const std::shared_ptr<const StarAlgebra>& algebra() const { return algebra_; }
  const CMatrix& delta() const { return delta_; }
  const Functional& haar() const { return *haar_; }
  double coassociativity_defect() const { return coassoc_defect_; }
  double homomorphism_defect() const { return hom_defect_; }
  const std::string& name() const { return name_; }

  /// Delta(x) as an element of algebra (x) algebra.
  Element comultiply(const CVec& coeffs) const;
  const std::shared_ptr<const TensorAlgebra>& square() const { return square_; }

 private:
  std::shared_ptr<const StarAlgebra> algebra_;
  CMatrix delta_;
  std::shared_ptr<const TensorAlgebra> square_;
  std::optional<Functional> haar_;
  double coassoc_defect_ = 0.0;
  double hom_defect_ = 0.0;
  std::string name_;
};

/// Max coefficient mismatch between (Delta (x) id) Delta and
/// (id (x) Delta) Delta over the basis.
double coassociativity_defect(const StarAlgebra& a, const CMatrix& delta);

/// Convolution (mu * nu)(b_i) = sum_{jk} D_i^{jk} mu(b_j) nu(b_k).
Functional convolve(const Functional& mu, const Functional& nu, const QuantumGroup& qg);

/// The stored bi-invariant state.
Functional haar_state(const QuantumGroup& qg);

/// Solves the two-sided invariance system for the normalized invariant
/// state; throws NoHaar / NonUniqueHaar / NotPositive.
CVec solve_haar(const StarAlgebra& a, const CMatrix& delta, double tol = 1e-9);

/// max over thetas of || theta * phi - phi || in the dual norm.
double amenability_defect(const Functional& phi, const QuantumGroup& qg,
                          const std::vector<Functional>& thetas);

/// Net of states fed to the averaging experiment.
struct AveragingNet {
  enum class Kind { constant_haar, cesaro };
  Kind kind;
  std::optional<Functional> generator;
  int length = 0;
  std::vector<Functional> states;  // states[n-1] = phi_n

  const Functional& at(int n) const { return states[n - 1]; }
  std::string description() const;
};

/// phi_n = (1/n) sum_{k<=n} mu^{*k}; every phi_n is checked to be a state.
AveragingNet cesaro_net(const Functional& mu, int n_max, const QuantumGroup& qg);
AveragingNet constant_haar_net(int n_max, const QuantumGroup& qg);

/// C(G): functions on the group with Delta f (g,h) = f(gh).
std::shared_ptr<const QuantumGroup> build_function_algebra(const CayleyTable& g);

/// Group algebra of an abelian group in its character block form; for a
/// nonabelian group an explicit complete family of pairwise inequivalent
/// unitary irreducible representations must be supplied (one matrix per
/// group element for each representation).
std::shared_ptr<const QuantumGroup> build_group_algebra(const CayleyTable& g);
std::shared_ptr<const QuantumGroup> build_group_algebra(
    const CayleyTable& g, const std::vector<std::vector<CMatrix>>& irreps);

/// The complete list of characters of an abelian group, each as the
/// vector of exponents a_g with chi(g) = exp(2 pi i a_g / exponent).
std::vector<std::vector<int>> abelian_characters(const CayleyTable& g);

/// Unitary irreducible representations of the builtin symmetric group S3
/// (trivial, sign, standard 2-dim), indexed like CayleyTable::symmetric3.
std::vector<std::vector<CMatrix>> symmetric3_irreps();

}  // namespace qel

#endif
