#include "qel/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qel/error.hpp"

namespace qel {

namespace {

constexpr double kEps = 2.220446049250313e-16;

// Deterministic canonical form for orthonormal columns: rotate each
// column so its largest-modulus entry is real positive, then order
// columns by (key desc, rounded coordinates desc, index).
void phase_fix_column(CMatrix& m, int c) {
  double best = 0.0;
  for (int i = 0; i < m.rows(); ++i) best = std::max(best, std::abs(m.at(i, c)));
  if (best == 0.0) return;
  int idx = 0;
  for (int i = 0; i < m.rows(); ++i)
    if (std::abs(m.at(i, c)) >= best * (1.0 - 1e-12)) {
      idx = i;
      break;
    }
  const Complex v = m.at(idx, c);
  const Complex phase = std::conj(v) / std::abs(v);
  for (int i = 0; i < m.rows(); ++i) m.at(i, c) *= phase;
  m.at(idx, c) = Complex(std::abs(m.at(idx, c)), 0.0);
}

long long round_key(double x, double grid) { return llround(x / grid); }

std::vector<int> canonical_order(const CMatrix& vecs, const std::vector<double>& keys) {
  double scale = 1.0;
  for (double k : keys) scale = std::max(scale, std::abs(k));
  const double kgrid = 1e-9 * scale;
  const double cgrid = 1e-9;
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const long long ka = round_key(keys[a], kgrid), kb = round_key(keys[b], kgrid);
    if (ka != kb) return ka > kb;
    for (int i = 0; i < vecs.rows(); ++i) {
      const Complex va = vecs.at(i, a), vb = vecs.at(i, b);
      const long long ra = round_key(va.real(), cgrid), rb = round_key(vb.real(), cgrid);
      if (ra != rb) return ra > rb;
      const long long ia = round_key(va.imag(), cgrid), ib = round_key(vb.imag(), cgrid);
      if (ia != ib) return ia > ib;
    }
    return a < b;
  });
  return order;
}

CMatrix select_columns(const CMatrix& m, const std::vector<int>& order) {
  CMatrix out(m.rows(), int(order.size()));
  for (int j = 0; j < int(order.size()); ++j)
    for (int i = 0; i < m.rows(); ++i) out.at(i, j) = m.at(i, order[j]);
  return out;
}

// Unitary Jacobi rotation J diagonalizing the Hermitian 2x2 block
// [[a, b], [conj b, d]] with b = |b| e^{i phi}:
//   J = [[c, s], [-s ph, c ph]],  ph = e^{-i phi},  c,s real.
struct Rotation {
  double c;
  double s;
  Complex ph;
};

Rotation make_rotation(double a, double d, Complex b) {
  const double babs = std::abs(b);
  const Complex ph = std::conj(b) / babs;
  const double tau = (d - a) / (2.0 * babs);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
  const double c = 1.0 / std::hypot(1.0, t);
  return {c, t * c, ph};
}

// In-place column update (p, q) <- (c p - s ph q, s p + c ph q).
void rotate_columns(CMatrix& m, int p, int q, const Rotation& r) {
  for (int i = 0; i < m.rows(); ++i) {
    const Complex xp = m.at(i, p), xq = m.at(i, q);
    m.at(i, p) = r.c * xp - r.s * r.ph * xq;
    m.at(i, q) = r.s * xp + r.c * r.ph * xq;
  }
}

// In-place row update with J*: (p, q) <- (c p - s conj(ph) q, s p + c conj(ph) q).
void rotate_rows(CMatrix& m, int p, int q, const Rotation& r) {
  const Complex pc = std::conj(r.ph);
  for (int j = 0; j < m.cols(); ++j) {
    const Complex xp = m.at(p, j), xq = m.at(q, j);
    m.at(p, j) = r.c * xp - r.s * pc * xq;
    m.at(q, j) = r.s * xp + r.c * pc * xq;
  }
}

}  // namespace

HermEigResult hermitian_eig(const CMatrix& m, double herm_tol) {
  if (m.rows() != m.cols()) fail(Errc::not_hermitian, "matrix not square");
  const int n = m.rows();
  const double scale = m.max_abs();
  double herm_defect = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      herm_defect = std::max(herm_defect, std::abs(m.at(i, j) - std::conj(m.at(j, i))));
  if (herm_defect > herm_tol * std::max(scale, 1e-300))
    fail(Errc::not_hermitian, "symmetry defect " + std::to_string(herm_defect));

  // Work on the symmetrized part; the defect above is within tolerance.
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.at(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
  CMatrix v = CMatrix::identity(n);

  const double thresh = 1e-15 * scale;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const Complex apq = a.at(p, q);
        if (std::abs(apq) <= thresh) continue;
        rotated = true;
        const Rotation r = make_rotation(a.at(p, p).real(), a.at(q, q).real(), apq);
        rotate_columns(a, p, q, r);
        rotate_rows(a, p, q, r);
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        rotate_columns(v, p, q, r);
      }
    if (!rotated) break;
    if (sweep == 59) fail(Errc::internal, "jacobi eigensolver did not converge");
  }

  HermEigResult res;
  std::vector<double> values(n);
  for (int i = 0; i < n; ++i) values[i] = a.at(i, i).real();
  for (int c = 0; c < n; ++c) phase_fix_column(v, c);
  const std::vector<int> order = canonical_order(v, values);
  res.vectors = select_columns(v, order);
  res.values.resize(n);
  for (int j = 0; j < n; ++j) res.values[j] = values[order[j]];
  return res;
}

SvdResult jacobi_svd(const CMatrix& m) {
  const int r = m.rows(), c = m.cols();
  CMatrix w = m;
  CMatrix v = CMatrix::identity(c);

  for (int sweep = 0; sweep < 100; ++sweep) {
    // Columns below machine precision relative to the largest column are
    // numerically zero; rotating against them only chases rounding noise.
    double colmax2 = 0.0;
    for (int j = 0; j < c; ++j) {
      double s = 0.0;
      for (int i = 0; i < r; ++i) s += std::norm(w.at(i, j));
      colmax2 = std::max(colmax2, s);
    }
    const double floor2 = kEps * kEps * colmax2;

    bool rotated = false;
    for (int p = 0; p < c - 1; ++p)
      for (int q = p + 1; q < c; ++q) {
        double app = 0.0, aqq = 0.0;
        Complex apq = 0.0;
        for (int i = 0; i < r; ++i) {
          app += std::norm(w.at(i, p));
          aqq += std::norm(w.at(i, q));
          apq += std::conj(w.at(i, p)) * w.at(i, q);
        }
        if (app <= floor2 || aqq <= floor2) continue;
        // The slack absorbs the rounding floor of the Gram entries.
        if (std::abs(apq) <= 1e-13 * std::sqrt(app * aqq)) continue;
        rotated = true;
        const Rotation rot = make_rotation(app, aqq, apq);
        rotate_columns(w, p, q, rot);
        rotate_columns(v, p, q, rot);
      }
    if (!rotated) break;
    if (sweep == 99) fail(Errc::internal, "jacobi svd did not converge");
  }

  std::vector<double> sigma(c);
  for (int j = 0; j < c; ++j) {
    double s = 0.0;
    for (int i = 0; i < r; ++i) s += std::norm(w.at(i, j));
    sigma[j] = std::sqrt(s);
  }

  // Canonical phases come from the right singular vectors; the same
  // phase is applied to the matching left column so m v_j = sigma_j u_j.
  for (int j = 0; j < c; ++j) {
    const CVec before = v.col(j);
    phase_fix_column(v, j);
    Complex phase = 1.0;
    for (int i = 0; i < c; ++i)
      if (std::abs(before[i]) > 1e-14) {
        phase = v.at(i, j) / before[i];
        break;
      }
    for (int i = 0; i < r; ++i) w.at(i, j) *= phase;
  }
  const std::vector<int> order = canonical_order(v, sigma);

  SvdResult res;
  res.right = select_columns(v, order);
  res.singular_values.resize(c);
  res.left = CMatrix(r, c);
  for (int j = 0; j < c; ++j) {
    const int src = order[j];
    res.singular_values[j] = sigma[src];
    if (sigma[src] > 0.0)
      for (int i = 0; i < r; ++i) res.left.at(i, j) = w.at(i, src) / sigma[src];
  }
  return res;
}

CMatrix null_space(const CMatrix& m, double tol) {
  if (tol <= 0.0) fail(Errc::internal, "null_space requires tol > 0");
  const SvdResult svd = jacobi_svd(m);
  const double smax = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
  std::vector<int> keep;
  for (int j = 0; j < m.cols(); ++j)
    if (svd.singular_values[j] <= tol * smax) keep.push_back(j);
  return select_columns(svd.right, keep);
}

CMatrix orthonormal_range(const CMatrix& m, double tol) {
  const SvdResult svd = jacobi_svd(m);
  const double smax = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
  std::vector<int> keep;
  for (int j = 0; j < m.cols(); ++j)
    if (svd.singular_values[j] > tol * smax) keep.push_back(j);
  return select_columns(svd.left, keep);
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const SvdResult svd = jacobi_svd(m);
  return svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
}

double trace_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const SvdResult svd = jacobi_svd(m);
  double s = 0.0;
  for (double x : svd.singular_values) s += x;
  return s;
}

namespace {

// Givens pair with c real: G* [a; b] = [r; 0].
struct Givens {
  double c;
  Complex s;
};

Givens make_givens(Complex a, Complex b) {
  const double bn = std::abs(b);
  if (bn == 0.0) return {1.0, 0.0};
  const double an = std::abs(a);
  const double r = std::hypot(an, bn);
  if (an == 0.0) return {0.0, -std::conj(b) / bn};
  return {an / r, -(a / an) * std::conj(b) / r};
}

Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex tr = a + d;
  const Complex det = a * d - b * c;
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  const Complex r1 = 0.5 * (tr + disc), r2 = 0.5 * (tr - disc);
  return std::abs(r1 - d) < std::abs(r2 - d) ? r1 : r2;
}

}  // namespace

CVec general_eigenvalues(CMatrix h) {
  if (h.rows() != h.cols()) fail(Errc::internal, "eigenvalues of non-square matrix");
  const int n = h.rows();
  CVec eig;
  if (n == 0) return eig;

  // Householder reduction to upper Hessenberg form.
  for (int k = 0; k + 2 < n; ++k) {
    double colnorm = 0.0;
    for (int i = k + 1; i < n; ++i) colnorm += std::norm(h.at(i, k));
    colnorm = std::sqrt(colnorm);
    if (colnorm <= 1e-300) continue;
    CVec u(n, 0.0);
    const Complex x0 = h.at(k + 1, k);
    const Complex ph = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    for (int i = k + 1; i < n; ++i) u[i] = h.at(i, k);
    u[k + 1] += ph * colnorm;
    double un = 0.0;
    for (int i = k + 1; i < n; ++i) un += std::norm(u[i]);
    if (un <= 1e-300) continue;
    const double beta = 2.0 / un;
    for (int j = k; j < n; ++j) {  // H <- P H
      Complex s = 0.0;
      for (int i = k + 1; i < n; ++i) s += std::conj(u[i]) * h.at(i, j);
      s *= beta;
      for (int i = k + 1; i < n; ++i) h.at(i, j) -= s * u[i];
    }
    for (int i = 0; i < n; ++i) {  // H <- H P
      Complex s = 0.0;
      for (int j = k + 1; j < n; ++j) s += h.at(i, j) * u[j];
      s *= beta;
      for (int j = k + 1; j < n; ++j) h.at(i, j) -= s * std::conj(u[j]);
    }
    for (int i = k + 2; i < n; ++i) h.at(i, k) = 0.0;
  }

  // Shifted QR with deflation.
  int hi = n - 1;
  int its = 0;
  while (hi >= 0) {
    if (hi == 0) {
      eig.push_back(h.at(0, 0));
      --hi;
      continue;
    }
    int lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h.at(lo, lo - 1));
      if (sub <= kEps * (std::abs(h.at(lo - 1, lo - 1)) + std::abs(h.at(lo, lo))) + 1e-300) {
        h.at(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig.push_back(h.at(hi, hi));
      --hi;
      its = 0;
      continue;
    }
    ++its;
    if (its > 30 * n + 100) fail(Errc::internal, "qr eigensolver did not converge");
    Complex shift;
    if (its % 12 == 0) {
      shift = h.at(hi, hi) + Complex(1.5 * std::abs(h.at(hi, hi - 1)), 0.0);
    } else {
      shift = wilkinson_shift(h.at(hi - 1, hi - 1), h.at(hi - 1, hi), h.at(hi, hi - 1), h.at(hi, hi));
    }
    for (int i = lo; i <= hi; ++i) h.at(i, i) -= shift;
    std::vector<Givens> rot(hi - lo);
    for (int k = lo; k < hi; ++k) {  // left rotations: H <- G* H
      const Givens g = make_givens(h.at(k, k), h.at(k + 1, k));
      rot[k - lo] = g;
      for (int j = k; j <= hi; ++j) {
        const Complex a = h.at(k, j), b = h.at(k + 1, j);
        h.at(k, j) = g.c * a - g.s * b;
        h.at(k + 1, j) = std::conj(g.s) * a + g.c * b;
      }
      h.at(k + 1, k) = 0.0;
    }
    for (int k = lo; k < hi; ++k) {  // right rotations: H <- H G
      const Givens g = rot[k - lo];
      for (int i = lo; i <= std::min(k + 1, hi); ++i) {
        const Complex a = h.at(i, k), b = h.at(i, k + 1);
        h.at(i, k) = g.c * a - std::conj(g.s) * b;
        h.at(i, k + 1) = g.s * a + g.c * b;
      }
    }
    for (int i = lo; i <= hi; ++i) h.at(i, i) += shift;
  }

  std::sort(eig.begin(), eig.end(), [](Complex a, Complex b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return eig;
}

Lu::Lu(CMatrix a) : lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols()) fail(Errc::internal, "lu of non-square matrix");
  const int n = lu_.rows();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), 0);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(lu_.at(k, k));
    for (int i = k + 1; i < n; ++i)
      if (std::abs(lu_.at(i, k)) > best) {
        best = std::abs(lu_.at(i, k));
        piv = i;
      }
    if (best <= 1e-300) fail(Errc::internal, "singular matrix in lu");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(lu_.at(k, j), lu_.at(piv, j));
      std::swap(perm_[k], perm_[piv]);
    }
    const Complex d = lu_.at(k, k);
    for (int i = k + 1; i < n; ++i) {
      const Complex f = lu_.at(i, k) / d;
      lu_.at(i, k) = f;
      for (int j = k + 1; j < n; ++j) lu_.at(i, j) -= f * lu_.at(k, j);
    }
  }
}

CVec Lu::solve(CVec b) const {
  const int n = lu_.rows();
  if (int(b.size()) != n) fail(Errc::internal, "rhs length mismatch in lu solve");
  CVec x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= lu_.at(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= lu_.at(i, j) * x[j];
    x[i] /= lu_.at(i, i);
  }
  return x;
}

CMatrix Lu::solve(const CMatrix& b) const {
  CMatrix x(b.rows(), b.cols());
  for (int j = 0; j < b.cols(); ++j) {
    const CVec sol = solve(b.col(j));
    x.set_col(j, sol);
  }
  return x;
}

}  // namespace qel
