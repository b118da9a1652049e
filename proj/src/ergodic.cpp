#include "qel/ergodic.hpp"

#include <cmath>
#include <exception>

#include "qel/eig.hpp"
#include "qel/error.hpp"

namespace qel {

CMatrix fixed_space(const Action& act, const GnsSpace& g, const std::vector<Functional>& thetas,
                    double rank_tol) {
  if (thetas.empty()) fail(Errc::internal, "fixed_space needs a nonempty family");
  const int h = g.dim;
  CMatrix stacked(int(thetas.size()) * h, h);
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    const TransferOperator k = transfer_operator(thetas[t], act, g);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j)
        stacked.at(int(t) * h + i, j) = k.matrix.at(i, j) - (i == j ? 1.0 : 0.0);
  }
  return null_space(stacked, rank_tol);
}

CMatrix mean_projection(const Action& act, const GnsSpace& g, const std::vector<Functional>& thetas,
                        double rank_tol) {
  const CMatrix v = fixed_space(act, g, thetas, rank_tol);
  return matmul(v, v.adjoint());
}

CMatrix difference_space(const Action& act, const GnsSpace& g, const std::vector<Functional>& thetas,
                         double rank_tol) {
  const int h = g.dim;
  CMatrix cols(h, int(thetas.size()) * h);
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    const TransferOperator k = transfer_operator(thetas[t], act, g);
    for (int j = 0; j < h; ++j)
      for (int i = 0; i < h; ++i)
        cols.at(i, int(t) * h + j) = (i == j ? 1.0 : 0.0) - k.matrix.at(i, j);
  }
  return orthonormal_range(cols, rank_tol);
}

double cyclic_vector_check(const Action& act, const GnsSpace& g,
                           const std::vector<Functional>& thetas) {
  if (!act.unital()) fail(Errc::not_unital, "cyclic vector check expects a unital action");
  const CMatrix p = mean_projection(act, g, thetas);
  return vec_norm(matvec(p, g.omega_vector) - g.omega_vector);
}

std::string ergodicity_verdict(int dim_V, double final_correlation, double tol) {
  const bool one_dimensional = dim_V == 1;
  const bool factorizes = final_correlation <= tol;
  if (one_dimensional && factorizes) return "ergodic";
  if (!one_dimensional && !factorizes) return "non-ergodic";
  fail(Errc::inconsistent_verdict,
       "fixed space dimension " + std::to_string(dim_V) + " vs final correlation defect " +
           std::to_string(final_correlation) + " at tolerance " + std::to_string(tol));
}

ErgodicReport ergodic_average_experiment(const AveragingNet& net, const Action& act,
                                         const GnsSpace& g, const std::vector<Functional>& thetas,
                                         const ExperimentOptions& opts) {
  const double inv_defect = invariance_check(g.omega, act, thetas);
  if (inv_defect > opts.validation_tol)
    fail(Errc::not_invariant, "invariance defect " + std::to_string(inv_defect));

  const QuantumGroup& qg = *act.group();
  const int h = g.dim;
  const int da = act.source()->dim();
  const int dr = qg.algebra()->dim();

  ErgodicReport report;
  report.net = net.description();
  report.dim_H = h;
  report.final_tolerance = opts.final_tol;
  report.seed = opts.seed;
  if (g.near_cutoff) report.warnings.push_back("gram spectrum close to the GNS rank cutoff");

  const CMatrix v = fixed_space(act, g, thetas);
  report.dim_V = v.cols();
  const CMatrix p = matmul(v, v.adjoint());
  if (act.unital()) report.cyclic_vector_residual = vec_norm(matvec(p, g.omega_vector) - g.omega_vector);

  // Correlation rows: for a pair (a, b) the gap at index n is
  // | sum_r phi_n(r) w_ab[r] - omega(a) omega(b) | with
  // w_ab[r] = sum_k coeffs([1 (x) a] alpha(b))_{(r,k)} omega(a_k).
  std::vector<std::pair<Element, Element>> pairs = opts.test_pairs;
  if (pairs.empty())
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        pairs.emplace_back(basis_element(act.source(), i), basis_element(act.source(), j));
  const auto range = std::static_pointer_cast<const Algebra>(act.range());
  std::vector<CVec> corr_rows;
  std::vector<Complex> corr_target;
  corr_rows.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    CVec embedded(range->dim(), 0.0);
    const CVec& ur = qg.algebra()->unit_coeffs();
    for (int r = 0; r < dr; ++r) {
      if (ur[r] == 0.0) continue;
      for (int k = 0; k < da; ++k) embedded[r * da + k] = ur[r] * a.coeffs[k];
    }
    const CVec prod = range->multiply(embedded, act.apply(b).coeffs);
    CVec w(dr, 0.0);
    for (int r = 0; r < dr; ++r) {
      Complex s = 0.0;
      for (int k = 0; k < da; ++k) s += prod[std::size_t(r) * da + k] * g.omega.values[k];
      w[r] = s;
    }
    corr_rows.push_back(std::move(w));
    corr_target.push_back(g.omega(a) * g.omega(b));
  }

  report.rows.resize(net.length);
  auto run_index = [&](int n) {
    const Functional& phi = net.at(n);
    const TransferOperator k = transfer_operator(phi, act, g, opts.validation_tol);
    DeviationRow row;
    row.n = n;
    row.dev = max_abs_diff(k.matrix, p);
    row.amenability_defect = amenability_defect(phi, qg, thetas);
    double corr = 0.0;
    for (std::size_t t = 0; t < corr_rows.size(); ++t) {
      Complex s = 0.0;
      for (int r = 0; r < dr; ++r) s += phi.values[r] * corr_rows[t][r];
      corr = std::max(corr, std::abs(s - corr_target[t]));
    }
    row.correlation_defect = corr;
    report.rows[n - 1] = row;
  };

  if (opts.parallel) {
    // Exceptions must not unwind through the parallel region; collect per
    // index and rethrow the earliest so failures stay deterministic.
    std::vector<std::exception_ptr> errors(net.length);
#pragma omp parallel for schedule(static)
    for (int n = 1; n <= net.length; ++n) {
      try {
        run_index(n);
      } catch (...) {
        errors[n - 1] = std::current_exception();
      }
    }
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (int n = 1; n <= net.length; ++n) run_index(n);
  }

  const DeviationRow& last = report.rows.back();
  report.final_dev = last.dev;
  report.final_amenability = last.amenability_defect;
  report.final_correlation = last.correlation_defect;
  report.converged = report.final_dev <= opts.final_tol;

  if (opts.assert_verdict) {
    report.verdict = ergodicity_verdict(report.dim_V, report.final_correlation, opts.final_tol);
  } else {
    report.verdict = report.dim_V == 1 && report.final_correlation <= opts.final_tol
                         ? "ergodic"
                         : "non-ergodic";
  }
  return report;
}

}  // namespace qel
