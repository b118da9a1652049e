#include "qel/classical.hpp"

#include <cmath>

#include "qel/eig.hpp"
#include "qel/error.hpp"

namespace qel {

ClassicalSystem ClassicalSystem::finite_group(CayleyTable g, std::vector<CMatrix> reps, double tol) {
  if (int(reps.size()) != g.order) fail(Errc::internal, "one operator per group element expected");
  const int d = reps.front().rows();
  for (const CMatrix& u : reps)
    if (u.rows() != d || u.cols() != d) fail(Errc::internal, "operators differ in size");
  if (max_abs_diff(reps[0], CMatrix::identity(d)) > tol)
    fail(Errc::internal, "identity element must act as the identity");
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      if (max_abs_diff(matmul(reps[a], reps[b]), reps[g.mul(a, b)]) > tol)
        fail(Errc::internal, "operators do not represent the group law");
  ClassicalSystem sys;
  sys.kind = Kind::finite_group;
  sys.group = std::move(g);
  sys.operators = std::move(reps);
  return sys;
}

ClassicalSystem ClassicalSystem::integers(CMatrix u, double tol) {
  if (u.rows() != u.cols()) fail(Errc::internal, "generator must be square");
  if (operator_norm(u) > 1.0 + tol) fail(Errc::internal, "generator is not a contraction");
  ClassicalSystem sys;
  sys.kind = Kind::integers;
  sys.operators = {std::move(u)};
  return sys;
}

CMatrix folner_average(const ClassicalSystem& sys, int n) {
  if (n < 1) fail(Errc::internal, "averaging set must be nonempty");
  const int d = sys.space_dim();
  CMatrix sum(d, d);
  if (sys.kind == ClassicalSystem::Kind::finite_group) {
    if (n > int(sys.operators.size())) fail(Errc::internal, "prefix exceeds the group order");
    for (int k = 0; k < n; ++k) sum += sys.operators[k];
  } else {
    CMatrix power = CMatrix::identity(d);
    sum += power;
    for (int k = 1; k < n; ++k) {
      power = matmul(power, sys.operators.front());
      sum += power;
    }
  }
  return sum * Complex(1.0 / n);
}

CMatrix classical_fixed_projection(const ClassicalSystem& sys, double rank_tol) {
  const int d = sys.space_dim();
  const int m = int(sys.operators.size());
  CMatrix stacked(m * d, d);
  for (int t = 0; t < m; ++t)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        stacked.at(t * d + i, j) = sys.operators[t].at(i, j) - (i == j ? 1.0 : 0.0);
  const CMatrix v = null_space(stacked, rank_tol);
  return matmul(v, v.adjoint());
}

BridgedSystem bridge_to_quantum(const CayleyTable& g,
                                const std::vector<std::vector<int>>& point_action,
                                const std::vector<double>& measure) {
  const int n = g.order;
  if (int(point_action.size()) != n) fail(Errc::not_a_group, "one point map per group element expected");
  const int x = int(point_action.front().size());
  for (const auto& row : point_action) {
    if (int(row.size()) != x) fail(Errc::not_a_group, "point maps differ in length");
    std::vector<bool> seen(x, false);
    for (int v : row) {
      if (v < 0 || v >= x || seen[v]) fail(Errc::not_a_group, "point map is not a permutation");
      seen[v] = true;
    }
  }
  for (int p = 0; p < x; ++p)
    if (point_action[0][p] != p) fail(Errc::not_a_group, "identity must fix every point");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int p = 0; p < x; ++p)
        if (point_action[g.mul(a, b)][p] != point_action[a][point_action[b][p]])
          fail(Errc::not_a_group, "point maps do not compose along the group law");

  if (int(measure.size()) != x) fail(Errc::not_invariant_measure, "measure length mismatch");
  double total = 0.0;
  for (double m : measure) {
    if (m < 0.0) fail(Errc::not_invariant_measure, "measure has a negative weight");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-10) fail(Errc::not_invariant_measure, "measure is not normalized");
  for (int a = 0; a < n; ++a)
    for (int p = 0; p < x; ++p)
      if (std::abs(measure[point_action[a][p]] - measure[p]) > 1e-10)
        fail(Errc::not_invariant_measure, "measure is not invariant under the action");

  BridgedSystem sys;
  sys.group = build_function_algebra(g);
  std::vector<CMatrix> basis;
  for (int p = 0; p < x; ++p) {
    CMatrix e(x, x);
    e.at(p, p) = 1.0;
    basis.push_back(std::move(e));
  }
  sys.algebra = StarAlgebra::validate(std::move(basis), std::vector<int>(x, 1), 1e-9,
                                      "C(X" + std::to_string(x) + ")");

  // alpha(delta_p) = sum_g delta_g (x) delta_{g^{-1}.p}: the slice at g of
  // alpha(f) is f o (action of g).
  CMatrix alpha(x, n * x);
  for (int p = 0; p < x; ++p)
    for (int gi = 0; gi < n; ++gi) alpha.at(p, gi * x + point_action[g.inverse(gi)][p]) = 1.0;
  sys.action = Action::validate(sys.algebra, sys.group, std::move(alpha));

  CVec omega(x);
  for (int p = 0; p < x; ++p) omega[p] = measure[p];
  sys.omega = Functional{sys.algebra, std::move(omega)};
  sys.point_action = point_action;
  return sys;
}

CMatrix koopman_matrix(const BridgedSystem& sys, const GnsSpace& g, int element) {
  if (g.algebra.get() != sys.algebra.get())
    fail(Errc::algebra_mismatch, "GNS space does not match the bridged algebra");
  const int x = sys.algebra->dim();
  // (f o T_g) as coefficients: out_p = f_{g.p}.
  CMatrix comp(x, x);
  for (int p = 0; p < x; ++p) comp.at(p, sys.point_action[element][p]) = 1.0;
  return matmul(matmul(g.gamma, comp), g.lift);
}

}  // namespace qel
