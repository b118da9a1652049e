#include "qel/action.hpp"

#include <cmath>

#include "qel/eig.hpp"
#include "qel/error.hpp"

namespace qel {

Action Action::validate(std::shared_ptr<const StarAlgebra> source,
                        std::shared_ptr<const QuantumGroup> group, CMatrix alpha,
                        ActionOptions opts) {
  const int da = source->dim();
  const int dr = group->algebra()->dim();
  if (alpha.rows() != da || alpha.cols() != dr * da) fail(Errc::bad_blocks, "alpha tensor shape");
  if (!alpha.is_finite()) fail(Errc::bad_blocks, "non-finite alpha coefficient");

  Action act;
  act.source_ = std::move(source);
  act.group_ = std::move(group);
  act.range_ = std::make_shared<TensorAlgebra>(act.group_->algebra(), act.source_);
  act.alpha_ = std::move(alpha);
  const StarAlgebra& a = *act.source_;
  const TensorAlgebra& range = *act.range_;

  // *-homomorphism: multiplicativity and adjoints.
  for (int i = 0; i < da; ++i) {
    CVec lhs(dr * da, 0.0);
    for (int k = 0; k < da; ++k) {
      const Complex c = a.adjoint_rows().at(i, k);
      if (c == 0.0) continue;
      for (int t = 0; t < dr * da; ++t) lhs[t] += c * act.alpha_.at(k, t);
    }
    act.hom_defect_ = std::max(act.hom_defect_, max_abs_diff(lhs, range.adjoint_coeffs(act.alpha_.row(i))));
    if (act.hom_defect_ > opts.tol) fail(Errc::not_homomorphism, "alpha does not respect adjoints");
  }
  for (int i = 0; i < da; ++i) {
    const CVec ai = act.alpha_.row(i);
    for (int j = 0; j < da; ++j) {
      CVec lhs(dr * da, 0.0);
      for (int k = 0; k < da; ++k) {
        const Complex c = a.structure().at(i * da + j, k);
        if (c == 0.0) continue;
        for (int t = 0; t < dr * da; ++t) lhs[t] += c * act.alpha_.at(k, t);
      }
      act.hom_defect_ = std::max(act.hom_defect_, max_abs_diff(lhs, range.multiply(ai, act.alpha_.row(j))));
      if (act.hom_defect_ > opts.tol)
        fail(Errc::not_homomorphism, "alpha is not multiplicative at pair (" + std::to_string(i) +
                                         "," + std::to_string(j) + ")");
    }
  }

  // Unitality.
  CVec alpha_unit(dr * da, 0.0);
  for (int i = 0; i < da; ++i) {
    const Complex c = a.unit_coeffs()[i];
    if (c == 0.0) continue;
    for (int t = 0; t < dr * da; ++t) alpha_unit[t] += c * act.alpha_.at(i, t);
  }
  act.unital_ = max_abs_diff(alpha_unit, range.unit_coeffs()) <= opts.tol;
  if (opts.require_unital && !act.unital_) fail(Errc::not_unital, "alpha(1) differs from 1 (x) 1");

  // Injectivity: full column rank of the coefficient map.
  CMatrix coef(dr * da, da);
  for (int i = 0; i < da; ++i) coef.set_col(i, act.alpha_.row(i));
  const SvdResult svd = jacobi_svd(coef);
  act.injective_ = svd.singular_values.back() > 1e-9;
  if (opts.require_injective && !act.injective_)
    fail(Errc::not_injective, "alpha coefficient matrix is column rank deficient");

  // Coaction identity (id (x) alpha) alpha = (Delta (x) id) alpha.
  const CMatrix& delta = act.group_->delta();
  double defect = 0.0;
  std::vector<Complex> lhs(std::size_t(dr) * dr * da), rhs(std::size_t(dr) * dr * da);
  for (int i = 0; i < da; ++i) {
    std::fill(lhs.begin(), lhs.end(), Complex(0.0));
    std::fill(rhs.begin(), rhs.end(), Complex(0.0));
    for (int p = 0; p < dr; ++p)
      for (int k = 0; k < da; ++k) {
        const Complex c = act.alpha_.at(i, p * da + k);
        if (c == 0.0) continue;
        for (int q = 0; q < dr; ++q)
          for (int s = 0; s < da; ++s)
            lhs[(std::size_t(p) * dr + q) * da + s] += c * act.alpha_.at(k, q * da + s);
      }
    for (int j = 0; j < dr; ++j)
      for (int s = 0; s < da; ++s) {
        const Complex c = act.alpha_.at(i, j * da + s);
        if (c == 0.0) continue;
        for (int p = 0; p < dr; ++p)
          for (int q = 0; q < dr; ++q)
            rhs[(std::size_t(p) * dr + q) * da + s] += c * delta.at(j, p * dr + q);
      }
    for (std::size_t t = 0; t < lhs.size(); ++t) defect = std::max(defect, std::abs(lhs[t] - rhs[t]));
  }
  act.coaction_defect_ = defect;
  if (defect > opts.tol)
    fail(Errc::not_coaction, "coaction identity defect " + std::to_string(defect));
  return act;
}

Element Action::apply(const Element& e) const {
  if (e.algebra.get() != source_.get()) fail(Errc::algebra_mismatch, "element not in the acted algebra");
  CVec out(range_->dim(), 0.0);
  for (int i = 0; i < source_->dim(); ++i) {
    if (e.coeffs[i] == 0.0) continue;
    for (int t = 0; t < range_->dim(); ++t) out[t] += e.coeffs[i] * alpha_.at(i, t);
  }
  return {std::static_pointer_cast<const Algebra>(range_), std::move(out)};
}

Action translation_action(std::shared_ptr<const QuantumGroup> qg) {
  CMatrix alpha = qg->delta();
  auto src = qg->algebra();
  return Action::validate(src, std::move(qg), std::move(alpha));
}

Action trivial_action(std::shared_ptr<const QuantumGroup> qg,
                      std::shared_ptr<const StarAlgebra> source) {
  const int da = source->dim();
  const int dr = qg->algebra()->dim();
  const CVec& u = qg->algebra()->unit_coeffs();
  CMatrix alpha(da, dr * da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < dr; ++j) alpha.at(i, j * da + i) = u[j];
  return Action::validate(std::move(source), std::move(qg), std::move(alpha));
}

double invariance_check(const Functional& omega, const Action& act,
                        const std::vector<Functional>& thetas) {
  if (omega.algebra.get() != act.source().get())
    fail(Errc::algebra_mismatch, "state not on the acted algebra");
  const int da = act.source()->dim();
  const int dr = act.group()->algebra()->dim();
  double defect = 0.0;
  for (const Functional& theta : thetas) {
    if (theta.algebra.get() != act.group()->algebra().get())
      fail(Errc::algebra_mismatch, "theta not on the group algebra");
    for (int i = 0; i < da; ++i) {
      Complex s = 0.0;
      for (int j = 0; j < dr; ++j) {
        if (theta.values[j] == 0.0) continue;
        for (int k = 0; k < da; ++k) {
          const Complex c = act.alpha().at(i, j * da + k);
          if (c != 0.0) s += c * theta.values[j] * omega.values[k];
        }
      }
      defect = std::max(defect, std::abs(s - omega.values[i]));
    }
  }
  return defect;
}

GnsSpace gns(std::shared_ptr<const StarAlgebra> a, const Functional& omega, double cutoff) {
  if (omega.algebra.get() != a.get()) fail(Errc::algebra_mismatch, "state not on the given algebra");
  if (!is_state(omega, 1e-8)) fail(Errc::not_a_state, "gns requires a state");
  const int d = a->dim();

  // gram_{ij} = omega(b_i^* b_j) through the structure constants.
  CMatrix pair_val(d, d);  // omega(b_p b_j)
  for (int p = 0; p < d; ++p)
    for (int j = 0; j < d; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < d; ++k) s += a->structure().at(p * d + j, k) * omega.values[k];
      pair_val.at(p, j) = s;
    }
  CMatrix gram(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Complex s = 0.0;
      for (int p = 0; p < d; ++p) {
        const Complex c = a->adjoint_rows().at(i, p);
        if (c != 0.0) s += c * pair_val.at(p, j);
      }
      gram.at(i, j) = s;
    }

  const HermEigResult eig = hermitian_eig(gram, 1e-8);
  const double lmax = eig.values.empty() ? 0.0 : std::max(eig.values.front(), 0.0);
  const double cut = cutoff * lmax;
  int kept = 0;
  bool near = false;
  for (double l : eig.values) {
    if (l > cut) ++kept;
    if (lmax > 0.0 && l > 0.1 * cut && l <= 10.0 * cut) near = true;
  }
  if (kept == 0) fail(Errc::not_a_state, "gram matrix vanishes");

  GnsSpace g;
  g.algebra = a;
  g.omega = omega;
  g.gram = gram;
  g.dim = kept;
  g.kept_rank = kept;
  g.cutoff = cutoff;
  g.near_cutoff = near;
  g.gamma = CMatrix(kept, d);
  g.lift = CMatrix(d, kept);
  for (int r = 0; r < kept; ++r) {
    const double s = std::sqrt(eig.values[r]);
    for (int c = 0; c < d; ++c) {
      g.gamma.at(r, c) = s * std::conj(eig.vectors.at(c, r));
      g.lift.at(c, r) = eig.vectors.at(c, r) / s;
    }
  }
  g.omega_vector = matvec(g.gamma, a->unit_coeffs());
  return g;
}

CVec GnsSpace::map(const Element& a) const {
  if (a.algebra.get() != algebra.get()) fail(Errc::algebra_mismatch, "element not in the GNS algebra");
  return matvec(gamma, a.coeffs);
}

CVec mu_tilde(const Functional& mu, const Element& t, const GnsSpace& g) {
  return g.map(slice_left(mu, t));
}

TransferOperator transfer_operator(const Functional& mu, const Action& act, const GnsSpace& g,
                                   double tol) {
  if (g.algebra.get() != act.source().get())
    fail(Errc::algebra_mismatch, "GNS space does not match the acted algebra");
  if (mu.algebra.get() != act.group()->algebra().get())
    fail(Errc::algebra_mismatch, "functional not on the group algebra");
  const int da = act.source()->dim();
  const int dr = act.group()->algebra()->dim();
  const Complex mu1 = mu.at_unit();
  const double scale = std::max(1.0, vec_max_abs(mu.values));

  // Invariance for this mu: (mu (x) omega)(alpha(a_i)) = mu(1) omega(a_i).
  for (int i = 0; i < da; ++i) {
    Complex s = 0.0;
    for (int j = 0; j < dr; ++j) {
      if (mu.values[j] == 0.0) continue;
      for (int k = 0; k < da; ++k) {
        const Complex c = act.alpha().at(i, j * da + k);
        if (c != 0.0) s += c * mu.values[j] * g.omega.values[k];
      }
    }
    if (std::abs(s - mu1 * g.omega.values[i]) > tol * scale)
      fail(Errc::not_invariant, "omega is not invariant for the given functional");
  }

  // Column i of the slice matrix holds (mu (x) id)(alpha(a_i)).
  CMatrix slice(da, da);
  for (int i = 0; i < da; ++i)
    for (int k = 0; k < da; ++k) {
      Complex s = 0.0;
      for (int j = 0; j < dr; ++j) {
        const Complex c = act.alpha().at(i, j * da + k);
        if (c != 0.0) s += c * mu.values[j];
      }
      slice.at(k, i) = s;
    }

  TransferOperator op;
  op.mu = mu;
  const CMatrix gs = matmul(g.gamma, slice);
  op.matrix = matmul(gs, g.lift);

  // Consistency across the GNS null space: K gamma = gamma S on all of A.
  const double residual = max_abs_diff(matmul(op.matrix, g.gamma), gs);
  if (residual > tol * scale)
    fail(Errc::not_invariant,
         "transfer operator is inconsistent across the GNS null space (residual " +
             std::to_string(residual) + ")");

  op.op_norm = operator_norm(op.matrix);
  const double mu_norm = dual_norm(mu);
  if (op.op_norm > mu_norm + tol)
    fail(Errc::internal, "transfer operator norm exceeds the functional norm");
  const bool positive = std::abs(mu_norm - mu1.real()) <= 1e-8 && std::abs(mu1.imag()) <= 1e-8;
  if (act.unital() && positive && std::abs(op.op_norm - mu_norm) > 1e-8 * std::max(1.0, mu_norm))
    fail(Errc::internal, "transfer operator norm misses the unital equality");
  return op;
}

}  // namespace qel
