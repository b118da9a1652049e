#include "qel/algebra.hpp"

#include <cmath>

#include "qel/eig.hpp"
#include "qel/error.hpp"

namespace qel {

namespace {

// Stacked block entries (row-major inside each block) of a block-diagonal
// matrix; the coordinate space in which basis solves happen.
CVec block_vec(const CMatrix& amb, const std::vector<int>& dims, const std::vector<int>& offs) {
  std::size_t total = 0;
  for (int d : dims) total += std::size_t(d) * d;
  CVec v;
  v.reserve(total);
  for (std::size_t k = 0; k < dims.size(); ++k)
    for (int p = 0; p < dims[k]; ++p)
      for (int q = 0; q < dims[k]; ++q) v.push_back(amb.at(offs[k] + p, offs[k] + q));
  return v;
}

double off_block_mass(const CMatrix& amb, const std::vector<int>& dims, const std::vector<int>& offs) {
  double m = 0.0;
  for (int i = 0; i < amb.rows(); ++i)
    for (int j = 0; j < amb.cols(); ++j) {
      bool inside = false;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (i >= offs[k] && i < offs[k] + dims[k] && j >= offs[k] && j < offs[k] + dims[k]) {
          inside = true;
          break;
        }
      if (!inside) m = std::max(m, std::abs(amb.at(i, j)));
    }
  return m;
}

}  // namespace

CVec Algebra::multiply(const CVec& x, const CVec& y) const {
  if (int(x.size()) != dim_ || int(y.size()) != dim_) fail(Errc::algebra_mismatch, "coefficient length");
  CVec z(dim_, 0.0);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      const Complex f = x[i] * y[j];
      if (f == 0.0) continue;
      const Complex* row = structure_.data() + (std::size_t(i) * dim_ + j) * dim_;
      for (int k = 0; k < dim_; ++k) z[k] += f * row[k];
    }
  }
  return z;
}

CVec Algebra::adjoint_coeffs(const CVec& x) const {
  if (int(x.size()) != dim_) fail(Errc::algebra_mismatch, "coefficient length");
  CVec z(dim_, 0.0);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    const Complex c = std::conj(x[i]);
    for (int k = 0; k < dim_; ++k) z[k] += c * adjoint_.at(i, k);
  }
  return z;
}

std::shared_ptr<const StarAlgebra> StarAlgebra::validate(std::vector<CMatrix> basis,
                                                         std::vector<int> block_dims,
                                                         double tol, std::string label) {
  if (basis.empty()) fail(Errc::bad_blocks, "empty basis");
  const int amb = basis.front().rows();
  for (const CMatrix& b : basis) {
    if (b.rows() != amb || b.cols() != amb) fail(Errc::bad_blocks, "basis matrices differ in size");
    if (!b.is_finite()) fail(Errc::bad_blocks, "non-finite basis entry");
  }
  int total = 0;
  for (int d : block_dims) {
    if (d <= 0) fail(Errc::bad_blocks, "non-positive block dimension");
    total += d;
  }
  if (total != amb) fail(Errc::bad_blocks, "block_dims sum differs from ambient size");

  auto alg = std::shared_ptr<StarAlgebra>(new StarAlgebra());
  alg->block_dims_ = std::move(block_dims);
  alg->ambient_dim_ = amb;
  alg->label_ = std::move(label);
  alg->block_offsets_.resize(alg->block_dims_.size());
  int off = 0;
  for (std::size_t k = 0; k < alg->block_dims_.size(); ++k) {
    alg->block_offsets_[k] = off;
    off += alg->block_dims_[k];
  }

  double scale = 0.0;
  for (const CMatrix& b : basis) scale = std::max(scale, b.max_abs());
  for (const CMatrix& b : basis)
    if (off_block_mass(b, alg->block_dims_, alg->block_offsets_) > tol * std::max(scale, 1.0))
      fail(Errc::bad_blocks, "basis matrix has mass outside the declared blocks");

  const int m = int(basis.size());
  int coord_dim = 0;
  for (int d : alg->block_dims_) coord_dim += d * d;
  if (m > coord_dim) fail(Errc::bad_blocks, "more basis elements than the block algebra dimension");

  CMatrix b_mat(coord_dim, m);
  for (int j = 0; j < m; ++j)
    b_mat.set_col(j, block_vec(basis[j], alg->block_dims_, alg->block_offsets_));

  const SvdResult svd = jacobi_svd(b_mat);
  const double smax = svd.singular_values.front();
  if (smax <= 0.0 || svd.singular_values[m - 1] <= 1e-9 * smax)
    fail(Errc::bad_blocks, "basis is numerically linearly dependent");

  // Least-squares expansion in the span; the residual is the closure test.
  auto expand = [&](const CMatrix& target, double* residual) {
    const CVec y = block_vec(target, alg->block_dims_, alg->block_offsets_);
    CVec uy(m, 0.0);
    for (int j = 0; j < m; ++j) {
      Complex s = 0.0;
      for (int i = 0; i < coord_dim; ++i) s += std::conj(svd.left.at(i, j)) * y[i];
      uy[j] = s / svd.singular_values[j];
    }
    CVec coeffs(m, 0.0);
    for (int i = 0; i < m; ++i) {
      Complex s = 0.0;
      for (int j = 0; j < m; ++j) s += svd.right.at(i, j) * uy[j];
      coeffs[i] = s;
    }
    if (residual) {
      const CVec back = matvec(b_mat, coeffs);
      double r = 0.0;
      for (int i = 0; i < coord_dim; ++i) r = std::max(r, std::abs(back[i] - y[i]));
      *residual = r;
    }
    return coeffs;
  };

  CMatrix structure(m * m, m);
  CMatrix adj(m, m);
  for (int i = 0; i < m; ++i) {
    double res = 0.0;
    const CVec star = expand(basis[i].adjoint(), &res);
    if (res > tol) fail(Errc::not_closed, "adjoint of basis element " + std::to_string(i) + " leaves the span");
    for (int k = 0; k < m; ++k) adj.at(i, k) = star[k];
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double res = 0.0;
      const CVec prod = expand(matmul(basis[i], basis[j]), &res);
      if (res > tol)
        fail(Errc::not_closed, "product of basis elements " + std::to_string(i) + "," + std::to_string(j) +
                                   " leaves the span");
      for (int k = 0; k < m; ++k) structure.at(i * m + j, k) = prod[k];
    }

  double unit_res = 0.0;
  const CVec unit = expand(CMatrix::identity(amb), &unit_res);
  if (unit_res > tol) fail(Errc::no_unit, "identity is not in the span");

  if (m < coord_dim)
    fail(Errc::bad_blocks, "basis spans a proper subalgebra of the declared blocks; "
                           "re-declare block_dims in canonical form");

  alg->dim_ = m;
  alg->basis_ = std::move(basis);
  alg->unit_ = unit;
  alg->structure_ = std::move(structure);
  alg->adjoint_ = std::move(adj);
  alg->coeff_solver_ = std::make_shared<Lu>(b_mat);
  alg->rep_solver_ = std::make_shared<Lu>(b_mat.transpose());
  return alg;
}

CMatrix StarAlgebra::ambient(const CVec& coeffs) const {
  if (int(coeffs.size()) != dim_) fail(Errc::algebra_mismatch, "coefficient length");
  CMatrix a(ambient_dim_, ambient_dim_);
  for (int i = 0; i < dim_; ++i) {
    if (coeffs[i] == 0.0) continue;
    const CMatrix& b = basis_[i];
    for (int r = 0; r < ambient_dim_; ++r)
      for (int c = 0; c < ambient_dim_; ++c) a.at(r, c) += coeffs[i] * b.at(r, c);
  }
  return a;
}

CMatrix StarAlgebra::block(const CMatrix& amb, int k) const {
  const int d = block_dims_[k], o = block_offsets_[k];
  CMatrix b(d, d);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) b.at(p, q) = amb.at(o + p, o + q);
  return b;
}

CVec StarAlgebra::coefficients(const CMatrix& amb) const {
  if (amb.rows() != ambient_dim_ || amb.cols() != ambient_dim_)
    fail(Errc::algebra_mismatch, "ambient size");
  return coeff_solver_->solve(block_vec(amb, block_dims_, block_offsets_));
}

std::vector<CMatrix> StarAlgebra::representative(const CVec& values) const {
  if (int(values.size()) != dim_) fail(Errc::algebra_mismatch, "value length");
  const CVec w = rep_solver_->solve(values);
  std::vector<CMatrix> reps;
  reps.reserve(block_dims_.size());
  std::size_t pos = 0;
  for (std::size_t k = 0; k < block_dims_.size(); ++k) {
    const int d = block_dims_[k];
    CMatrix x(d, d);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q) x.at(q, p) = w[pos++];  // f(a) = Tr(X a) pairing
    reps.push_back(std::move(x));
  }
  return reps;
}

TensorAlgebra::TensorAlgebra(std::shared_ptr<const StarAlgebra> left,
                             std::shared_ptr<const StarAlgebra> right)
    : left_(std::move(left)), right_(std::move(right)) {
  const int dl = left_->dim(), dr = right_->dim();
  dim_ = dl * dr;
  label_ = left_->label() + " (x) " + right_->label();

  unit_.assign(dim_, 0.0);
  for (int i = 0; i < dl; ++i)
    for (int j = 0; j < dr; ++j) unit_[pair_index(i, j)] = left_->unit_coeffs()[i] * right_->unit_coeffs()[j];

  adjoint_ = CMatrix(dim_, dim_);
  const CMatrix& al = left_->adjoint_rows();
  const CMatrix& ar = right_->adjoint_rows();
  for (int i1 = 0; i1 < dl; ++i1)
    for (int i2 = 0; i2 < dr; ++i2)
      for (int k1 = 0; k1 < dl; ++k1)
        for (int k2 = 0; k2 < dr; ++k2)
          adjoint_.at(pair_index(i1, i2), pair_index(k1, k2)) = al.at(i1, k1) * ar.at(i2, k2);

  structure_ = CMatrix(dim_ * dim_, dim_);
  const CMatrix& sl = left_->structure();
  const CMatrix& sr = right_->structure();
  for (int i1 = 0; i1 < dl; ++i1)
    for (int j1 = 0; j1 < dl; ++j1) {
      const Complex* lrow = sl.data() + (std::size_t(i1) * dl + j1) * dl;
      for (int i2 = 0; i2 < dr; ++i2)
        for (int j2 = 0; j2 < dr; ++j2) {
          const Complex* rrow = sr.data() + (std::size_t(i2) * dr + j2) * dr;
          const std::size_t row = std::size_t(pair_index(i1, i2)) * dim_ + pair_index(j1, j2);
          Complex* out = structure_.data() + row * dim_;
          for (int k1 = 0; k1 < dl; ++k1) {
            if (lrow[k1] == 0.0) continue;
            for (int k2 = 0; k2 < dr; ++k2) out[pair_index(k1, k2)] = lrow[k1] * rrow[k2];
          }
        }
    }

  // Spot identity checks: coefficient products must match ambient products.
  const int checks[3] = {0, dim_ / 2, dim_ - 1};
  for (int idx : checks) {
    CVec ei(dim_, 0.0), ej(dim_, 0.0);
    ei[idx] = 1.0;
    ej[dim_ - 1 - idx] = 1.0;
    const CMatrix lhs = ambient(multiply(ei, ej));
    const CMatrix rhs = matmul(ambient(ei), ambient(ej));
    if (max_abs_diff(lhs, rhs) > 1e-9 * std::max(1.0, rhs.max_abs()))
      fail(Errc::internal, "tensor algebra closure spot check failed");
  }
}

CMatrix TensorAlgebra::ambient(const CVec& coeffs) const {
  if (int(coeffs.size()) != dim_) fail(Errc::algebra_mismatch, "coefficient length");
  const int n = ambient_dim();
  CMatrix a(n, n);
  for (int i = 0; i < left_->dim(); ++i)
    for (int j = 0; j < right_->dim(); ++j) {
      const Complex c = coeffs[pair_index(i, j)];
      if (c == 0.0) continue;
      const CMatrix k = kron(left_->basis()[i], right_->basis()[j]);
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) a.at(r, s) += c * k.at(r, s);
    }
  return a;
}

Element unit_element(std::shared_ptr<const Algebra> a) {
  CVec u = a->unit_coeffs();
  return {std::move(a), std::move(u)};
}

Element basis_element(std::shared_ptr<const Algebra> a, int i) {
  CVec c(a->dim(), 0.0);
  c[i] = 1.0;
  return {std::move(a), std::move(c)};
}

namespace {
void require_same(const std::shared_ptr<const Algebra>& a, const std::shared_ptr<const Algebra>& b) {
  if (a.get() != b.get()) fail(Errc::algebra_mismatch, "operands live on different algebras");
}
}  // namespace

Element operator*(const Element& a, const Element& b) {
  require_same(a.algebra, b.algebra);
  return {a.algebra, a.algebra->multiply(a.coeffs, b.coeffs)};
}

Element operator+(Element a, const Element& b) {
  require_same(a.algebra, b.algebra);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += b.coeffs[i];
  return a;
}

Element operator-(Element a, const Element& b) {
  require_same(a.algebra, b.algebra);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] -= b.coeffs[i];
  return a;
}

Element operator*(Complex s, Element a) {
  for (Complex& c : a.coeffs) c *= s;
  return a;
}

Element adjoint(const Element& a) { return {a.algebra, a.algebra->adjoint_coeffs(a.coeffs)}; }

CMatrix ambient(const Element& a) { return a.algebra->ambient(a.coeffs); }

Complex Functional::operator()(const Element& x) const {
  require_same(algebra, x.algebra);
  Complex s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * x.coeffs[i];
  return s;
}

Complex Functional::at_unit() const {
  Complex s = 0.0;
  const CVec& u = algebra->unit_coeffs();
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * u[i];
  return s;
}

Functional operator+(Functional f, const Functional& g) {
  require_same(f.algebra, g.algebra);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += g.values[i];
  return f;
}

Functional operator-(Functional f, const Functional& g) {
  require_same(f.algebra, g.algebra);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] -= g.values[i];
  return f;
}

Functional operator*(Complex s, Functional f) {
  for (Complex& v : f.values) v *= s;
  return f;
}

namespace {
const StarAlgebra* as_block_algebra(const Functional& f, const char* who) {
  const auto* a = dynamic_cast<const StarAlgebra*>(f.algebra.get());
  if (!a) fail(Errc::algebra_mismatch, std::string(who) + " requires a block algebra functional");
  return a;
}
}  // namespace

double dual_norm(const Functional& f) {
  const StarAlgebra* a = as_block_algebra(f, "dual_norm");
  double s = 0.0;
  for (const CMatrix& x : a->representative(f.values)) s += trace_norm(x);
  return s;
}

bool is_positive(const Functional& f, double tol) {
  return values_positive(*as_block_algebra(f, "is_positive"), f.values, tol);
}

bool values_positive(const StarAlgebra& a, const CVec& values, double tol) {
  for (const CMatrix& x : a.representative(values)) {
    const int d = x.rows();
    double herm = 0.0;
    for (int p = 0; p < d; ++p)
      for (int q = p; q < d; ++q) herm = std::max(herm, std::abs(x.at(p, q) - std::conj(x.at(q, p))));
    if (herm > tol) return false;
    CMatrix h(d, d);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q) h.at(p, q) = 0.5 * (x.at(p, q) + std::conj(x.at(q, p)));
    const HermEigResult e = hermitian_eig(h, 1e-6);
    if (!e.values.empty() && e.values.back() < -tol) return false;
  }
  return true;
}

bool is_state(const Functional& f, double tol) {
  return is_positive(f, tol) && std::abs(f.at_unit() - 1.0) <= tol;
}

Functional tensor_functional(const Functional& mu, const Functional& nu,
                             std::shared_ptr<const TensorAlgebra> t) {
  require_same(mu.algebra, std::static_pointer_cast<const Algebra>(t->left()));
  require_same(nu.algebra, std::static_pointer_cast<const Algebra>(t->right()));
  CVec v(t->dim(), 0.0);
  for (int i = 0; i < t->left()->dim(); ++i)
    for (int j = 0; j < t->right()->dim(); ++j) v[t->pair_index(i, j)] = mu.values[i] * nu.values[j];
  return {std::move(t), std::move(v)};
}

Element slice_left(const Functional& mu, const Element& t) {
  const auto* ta = dynamic_cast<const TensorAlgebra*>(t.algebra.get());
  if (!ta) fail(Errc::algebra_mismatch, "slice_left expects a tensor algebra element");
  if (mu.algebra.get() != ta->left().get())
    fail(Errc::algebra_mismatch, "functional does not live on the left tensor factor");
  const int dl = ta->left()->dim(), dr = ta->right()->dim();
  CVec out(dr, 0.0);
  for (int j = 0; j < dl; ++j) {
    if (mu.values[j] == 0.0) continue;
    for (int k = 0; k < dr; ++k) out[k] += mu.values[j] * t.coeffs[ta->pair_index(j, k)];
  }
  return {ta->right(), std::move(out)};
}

std::vector<Functional> state_spanning_family(std::shared_ptr<const StarAlgebra> a) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Functional> family;
  for (std::size_t k = 0; k < a->block_dims().size(); ++k) {
    const int d = a->block_dims()[k];
    std::vector<CVec> frame;
    for (int i = 0; i < d; ++i) {
      CVec e(d, 0.0);
      e[i] = 1.0;
      frame.push_back(e);
    }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        CVec e(d, 0.0);
        e[i] = inv_sqrt2;
        e[j] = inv_sqrt2;
        frame.push_back(e);
        CVec f(d, 0.0);
        f[i] = inv_sqrt2;
        f[j] = Complex(0.0, inv_sqrt2);
        frame.push_back(f);
      }
    for (const CVec& xi : frame) {
      CVec values(a->dim(), 0.0);
      for (int b = 0; b < a->dim(); ++b) {
        const CMatrix blk = a->block(a->basis()[b], int(k));
        Complex s = 0.0;
        for (int p = 0; p < d; ++p)
          for (int q = 0; q < d; ++q) s += std::conj(xi[p]) * blk.at(p, q) * xi[q];
        values[b] = s;
      }
      family.push_back({a, std::move(values)});
    }
  }

  // The family must span the full dual of the block algebra.
  CMatrix m(int(family.size()), a->dim());
  for (std::size_t r = 0; r < family.size(); ++r)
    for (int c = 0; c < a->dim(); ++c) m.at(int(r), c) = family[r].values[c];
  const SvdResult svd = jacobi_svd(m);
  const int rank_needed = a->dim();
  if (int(svd.singular_values.size()) < rank_needed ||
      svd.singular_values[rank_needed - 1] <= 1e-8 * svd.singular_values.front())
    fail(Errc::internal, "state spanning family fails its rank check");
  return family;
}

Functional trace_state(std::shared_ptr<const StarAlgebra> a) {
  CVec v(a->dim());
  const double n = a->ambient_dim();
  for (int i = 0; i < a->dim(); ++i) v[i] = a->basis()[i].trace() / n;
  return {std::move(a), std::move(v)};
}

}  // namespace qel
