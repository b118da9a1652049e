#ifndef QEL_ERGODIC_HPP
#define QEL_ERGODIC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qel/action.hpp"

namespace qel {

/// Orthonormal basis (as columns) of the joint fixed space
/// V = { x : K_theta x = x for every theta in the family }.
/// The family spans the Hermitian dual, so V equals the fixed space over
/// all states.
CMatrix fixed_space(const Action& act, const GnsSpace& g, const std::vector<Functional>& thetas,
                    double rank_tol = 1e-8);

/// Orthogonal projection onto the fixed space.
CMatrix mean_projection(const Action& act, const GnsSpace& g, const std::vector<Functional>& thetas,
                        double rank_tol = 1e-8);

/// Orthonormal basis of N = span{ x - K_theta x }, the space the averages
/// annihilate; numerically the orthogonal complement of V.
CMatrix difference_space(const Action& act, const GnsSpace& g, const std::vector<Functional>& thetas,
                         double rank_tol = 1e-8);

/// || P Omega - Omega ||; tiny whenever the action is unital.
double cyclic_vector_check(const Action& act, const GnsSpace& g,
                           const std::vector<Functional>& thetas);

struct DeviationRow {
  int n = 0;
  double dev = 0.0;                 // max matrix entry of K_n - P in GNS coordinates
  double amenability_defect = 0.0;  // max_theta || theta * phi_n - phi_n ||
  double correlation_defect = 0.0;  // max over test pairs of the factorization gap
};

struct ErgodicReport {
  std::string scenario;
  std::string net;
  int dim_H = 0;
  int dim_V = 0;
  std::optional<double> cyclic_vector_residual;  // absent for non-unital actions
  std::vector<DeviationRow> rows;
  double final_dev = 0.0;
  double final_amenability = 0.0;
  double final_correlation = 0.0;
  double final_tolerance = 0.0;
  bool converged = false;
  std::string verdict;  // "ergodic" | "non-ergodic"
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;
};

struct ExperimentOptions {
  double validation_tol = 1e-9;
  double final_tol = 5e-3;
  bool assert_verdict = true;  // throw InconsistentVerdict when the criteria disagree
  bool parallel = true;        // spread net indices over OpenMP threads
  std::uint64_t seed = 0;      // recorded in the report
  /// Correlation test pairs (a, b); all basis pairs when empty.
  std::vector<std::pair<Element, Element>> test_pairs;
};

/// Runs the averaging experiment: per net index the transfer operator of
/// phi_n, its entrywise distance to the mean projection, the averaging
/// defect of phi_n, and the correlation factorization gap.  Ends with the
/// ergodicity verdict (fixed-space dimension against correlation decay).
ErgodicReport ergodic_average_experiment(const AveragingNet& net, const Action& act,
                                         const GnsSpace& g, const std::vector<Functional>& thetas,
                                         const ExperimentOptions& opts = {});

/// The two ergodicity criteria must agree: dim V = 1 together with a
/// correlation gap below tol, or dim V > 1 with the gap staying above it.
/// Throws InconsistentVerdict otherwise (bug or non-convergent net).
std::string ergodicity_verdict(int dim_V, double final_correlation, double tol);

}  // namespace qel

#endif
