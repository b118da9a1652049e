#ifndef QEL_CLASSICAL_HPP
#define QEL_CLASSICAL_HPP

#include <optional>
#include <vector>

#include "qel/action.hpp"
#include "qel/quantum_group.hpp"

namespace qel {

/// Classical averaging setup: a finite group acting by contractions on a
/// finite-dimensional space, or a single contraction generating a
/// truncated integer action.  Averaging sets are element prefixes for a
/// finite group and {0..n-1} powers for the integer case.
struct ClassicalSystem {
  enum class Kind { finite_group, integers };
  Kind kind = Kind::integers;
  std::optional<CayleyTable> group;
  std::vector<CMatrix> operators;  // per element, or the single generator

  /// Finite group representation; checks U_e = I and U_g U_h = U_{gh}.
  static ClassicalSystem finite_group(CayleyTable g, std::vector<CMatrix> reps, double tol = 1e-10);
  /// Single contraction (||u|| <= 1).
  static ClassicalSystem integers(CMatrix u, double tol = 1e-10);

  int space_dim() const { return operators.front().rows(); }
};

/// A_n: the mean of the first n operators (group prefix or powers
/// U^0..U^{n-1}).
CMatrix folner_average(const ClassicalSystem& sys, int n);

/// Orthogonal projection onto the joint fixed space of the operators.
CMatrix classical_fixed_projection(const ClassicalSystem& sys, double rank_tol = 1e-8);

/// A finite group action on points carried into the coaction framework:
/// the function algebra of the group acts on the function algebra of the
/// point set, the invariant measure becomes the invariant state.
struct BridgedSystem {
  std::shared_ptr<const QuantumGroup> group;       // C(G)
  std::shared_ptr<const StarAlgebra> algebra;      // C(X)
  std::optional<Action> action;
  Functional omega;                                // the measure
  std::vector<std::vector<int>> point_action;      // g, x -> g.x
};

/// point_action[g][x] = g.x; measure must be invariant (NotInvariantMeasure).
BridgedSystem bridge_to_quantum(const CayleyTable& g,
                                const std::vector<std::vector<int>>& point_action,
                                const std::vector<double>& measure);

/// Matrix of the composition operator f -> f o (action of g) expressed in
/// the GNS coordinates of (C(X), measure); unitary for invariant measures.
CMatrix koopman_matrix(const BridgedSystem& sys, const GnsSpace& g, int element);

}  // namespace qel

#endif
