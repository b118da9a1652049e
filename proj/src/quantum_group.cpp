#include "qel/quantum_group.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qel/eig.hpp"
#include "qel/error.hpp"

namespace qel {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

CayleyTable CayleyTable::validate(std::vector<std::vector<int>> t) {
  const int n = int(t.size());
  if (n == 0) fail(Errc::not_a_group, "empty table");
  for (const auto& row : t) {
    if (int(row.size()) != n) fail(Errc::not_a_group, "table is not square");
    for (int v : row)
      if (v < 0 || v >= n) fail(Errc::not_a_group, "table entry out of range");
  }
  for (int i = 0; i < n; ++i)
    if (t[0][i] != i || t[i][0] != i) fail(Errc::not_a_group, "element 0 is not an identity");
  for (int i = 0; i < n; ++i) {
    std::vector<bool> seen_row(n, false), seen_col(n, false);
    for (int j = 0; j < n; ++j) {
      if (seen_row[t[i][j]]) fail(Errc::not_a_group, "row " + std::to_string(i) + " repeats an element");
      seen_row[t[i][j]] = true;
      if (seen_col[t[j][i]]) fail(Errc::not_a_group, "column " + std::to_string(i) + " repeats an element");
      seen_col[t[j][i]] = true;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (t[t[i][j]][k] != t[i][t[j][k]]) fail(Errc::not_a_group, "table is not associative");
  CayleyTable g;
  g.order = n;
  g.table = std::move(t);
  return g;
}

CayleyTable CayleyTable::cyclic(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return validate(std::move(t));
}

CayleyTable CayleyTable::klein4() {
  std::vector<std::vector<int>> t(4, std::vector<int>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t[i][j] = i ^ j;
  return validate(std::move(t));
}

CayleyTable CayleyTable::symmetric3() {
  // Permutations of {0,1,2} in lexicographic one-line order.
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  auto index_of = [&](const int p[3]) {
    for (int i = 0; i < 6; ++i)
      if (perms[i][0] == p[0] && perms[i][1] == p[1] && perms[i][2] == p[2]) return i;
    return -1;
  };
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      int comp[3];
      for (int x = 0; x < 3; ++x) comp[x] = perms[i][perms[j][x]];  // (p_i o p_j)(x)
      t[i][j] = index_of(comp);
    }
  return validate(std::move(t));
}

int CayleyTable::inverse(int g) const {
  for (int h = 0; h < order; ++h)
    if (table[g][h] == 0) return h;
  fail(Errc::not_a_group, "element has no inverse");
}

bool CayleyTable::is_abelian() const {
  for (int i = 0; i < order; ++i)
    for (int j = i + 1; j < order; ++j)
      if (table[i][j] != table[j][i]) return false;
  return true;
}

int CayleyTable::element_order(int g) const {
  int x = g, k = 1;
  while (x != 0) {
    x = table[x][g];
    ++k;
  }
  return k;
}

int CayleyTable::exponent() const {
  long long l = 1;
  for (int g = 0; g < order; ++g) l = std::lcm(l, (long long)element_order(g));
  return int(l);
}

double coassociativity_defect(const StarAlgebra& a, const CMatrix& delta) {
  const int d = a.dim();
  if (delta.rows() != d || delta.cols() != d * d) fail(Errc::bad_blocks, "delta tensor shape");
  double defect = 0.0;
  std::vector<Complex> lhs(std::size_t(d) * d * d), rhs(std::size_t(d) * d * d);
  for (int i = 0; i < d; ++i) {
    std::fill(lhs.begin(), lhs.end(), Complex(0.0));
    std::fill(rhs.begin(), rhs.end(), Complex(0.0));
    // (Delta (x) id): coefficient of b_p (x) b_q (x) b_s is sum_j D_i^{js} D_j^{pq}
    for (int j = 0; j < d; ++j)
      for (int s = 0; s < d; ++s) {
        const Complex c = delta.at(i, j * d + s);
        if (c == 0.0) continue;
        for (int p = 0; p < d; ++p)
          for (int q = 0; q < d; ++q) lhs[(std::size_t(p) * d + q) * d + s] += c * delta.at(j, p * d + q);
      }
    // (id (x) Delta): coefficient of b_p (x) b_q (x) b_s is sum_k D_i^{pk} D_k^{qs}
    for (int p = 0; p < d; ++p)
      for (int k = 0; k < d; ++k) {
        const Complex c = delta.at(i, p * d + k);
        if (c == 0.0) continue;
        for (int q = 0; q < d; ++q)
          for (int s = 0; s < d; ++s) rhs[(std::size_t(p) * d + q) * d + s] += c * delta.at(k, q * d + s);
      }
    for (std::size_t t = 0; t < lhs.size(); ++t) defect = std::max(defect, std::abs(lhs[t] - rhs[t]));
  }
  return defect;
}

QuantumGroup::QuantumGroup(std::shared_ptr<const StarAlgebra> algebra, CMatrix delta,
                           std::optional<CVec> declared_haar, double tol, std::string name)
    : algebra_(std::move(algebra)), delta_(std::move(delta)), name_(std::move(name)) {
  const int d = algebra_->dim();
  if (delta_.rows() != d || delta_.cols() != d * d) fail(Errc::bad_blocks, "delta tensor shape");
  if (!delta_.is_finite()) fail(Errc::bad_blocks, "non-finite delta coefficient");

  coassoc_defect_ = qel::coassociativity_defect(*algebra_, delta_);
  if (coassoc_defect_ > tol)
    fail(Errc::not_coassociative, "coassociativity defect " + std::to_string(coassoc_defect_));

  square_ = std::make_shared<TensorAlgebra>(algebra_, algebra_);

  // Delta(1) = 1 (x) 1.
  CVec delta_unit(d * d, 0.0);
  for (int i = 0; i < d; ++i) {
    if (algebra_->unit_coeffs()[i] == 0.0) continue;
    for (int c = 0; c < d * d; ++c) delta_unit[c] += algebra_->unit_coeffs()[i] * delta_.at(i, c);
  }
  if (max_abs_diff(delta_unit, square_->unit_coeffs()) > tol)
    fail(Errc::not_homomorphism, "comultiplication is not unital");

  // Adjoint compatibility and multiplicativity.
  for (int i = 0; i < d; ++i) {
    CVec lhs(d * d, 0.0);
    for (int k = 0; k < d; ++k) {
      const Complex c = algebra_->adjoint_rows().at(i, k);
      if (c == 0.0) continue;
      for (int t = 0; t < d * d; ++t) lhs[t] += c * delta_.at(k, t);
    }
    const CVec rhs = square_->adjoint_coeffs(delta_.row(i));
    hom_defect_ = std::max(hom_defect_, max_abs_diff(lhs, rhs));
    if (hom_defect_ > tol)
      fail(Errc::not_homomorphism, "comultiplication does not respect adjoints");
  }
  for (int i = 0; i < d; ++i) {
    const CVec di = delta_.row(i);
    for (int j = 0; j < d; ++j) {
      const CVec prod = square_->multiply(di, delta_.row(j));
      CVec lhs(d * d, 0.0);
      for (int k = 0; k < d; ++k) {
        const Complex c = algebra_->structure().at(i * d + j, k);
        if (c == 0.0) continue;
        for (int t = 0; t < d * d; ++t) lhs[t] += c * delta_.at(k, t);
      }
      hom_defect_ = std::max(hom_defect_, max_abs_diff(lhs, prod));
      if (hom_defect_ > tol)
        fail(Errc::not_homomorphism, "comultiplication is not multiplicative at pair (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }

  CVec haar_values;
  if (declared_haar) {
    haar_values = std::move(*declared_haar);
    if (int(haar_values.size()) != d) fail(Errc::bad_blocks, "declared haar value count");
    const CVec& u = algebra_->unit_coeffs();
    for (int i = 0; i < d; ++i)
      for (int m = 0; m < d; ++m) {
        Complex left = 0.0, right = 0.0;
        for (int k = 0; k < d; ++k) left += delta_.at(i, m * d + k) * haar_values[k];
        for (int j = 0; j < d; ++j) right += delta_.at(i, j * d + m) * haar_values[j];
        if (std::abs(left - u[m] * haar_values[i]) > tol || std::abs(right - u[m] * haar_values[i]) > tol)
          fail(Errc::not_invariant, "declared haar state fails invariance");
      }
    Functional h{algebra_, haar_values};
    if (!is_state(h, 1e-8)) fail(Errc::not_a_state, "declared haar is not a state");
  } else {
    haar_values = solve_haar(*algebra_, delta_, tol);
  }
  haar_ = Functional{algebra_, std::move(haar_values)};
}

Element QuantumGroup::comultiply(const CVec& coeffs) const {
  const int d = algebra_->dim();
  if (int(coeffs.size()) != d) fail(Errc::algebra_mismatch, "coefficient length");
  CVec out(d * d, 0.0);
  for (int i = 0; i < d; ++i) {
    if (coeffs[i] == 0.0) continue;
    for (int c = 0; c < d * d; ++c) out[c] += coeffs[i] * delta_.at(i, c);
  }
  return {square_, std::move(out)};
}

CVec solve_haar(const StarAlgebra& a, const CMatrix& delta, double tol) {
  const int d = a.dim();
  const CVec& u = a.unit_coeffs();
  CMatrix sys(2 * d * d, d);
  for (int i = 0; i < d; ++i)
    for (int m = 0; m < d; ++m) {
      const int r1 = i * d + m, r2 = d * d + i * d + m;
      for (int k = 0; k < d; ++k) sys.at(r1, k) = delta.at(i, m * d + k);
      sys.at(r1, i) -= u[m];
      for (int j = 0; j < d; ++j) sys.at(r2, j) = delta.at(i, j * d + m);
      sys.at(r2, i) -= u[m];
    }
  const CMatrix null = null_space(sys, tol);
  if (null.cols() == 0) fail(Errc::no_haar, "invariance system has no solution");
  if (null.cols() > 1)
    fail(Errc::non_unique_haar, "invariance system has a " + std::to_string(null.cols()) +
                                    "-dimensional solution space");
  CVec h = null.col(0);
  Complex at_unit = 0.0;
  for (int i = 0; i < d; ++i) at_unit += u[i] * h[i];
  if (std::abs(at_unit) < 1e-12) fail(Errc::no_haar, "invariant solution vanishes at the unit");
  for (Complex& v : h) v /= at_unit;
  if (!values_positive(a, h, 1e-10))
    fail(Errc::not_positive, "normalized invariant functional is not positive");
  return h;
}

Functional convolve(const Functional& mu, const Functional& nu, const QuantumGroup& qg) {
  if (mu.algebra.get() != qg.algebra().get() || nu.algebra.get() != qg.algebra().get())
    fail(Errc::algebra_mismatch, "convolution operands live off the group algebra");
  const int d = qg.algebra()->dim();
  const CMatrix& delta = qg.delta();
  CVec out(d, 0.0);
  for (int i = 0; i < d; ++i) {
    Complex s = 0.0;
    for (int j = 0; j < d; ++j) {
      if (mu.values[j] == 0.0) continue;
      for (int k = 0; k < d; ++k) {
        const Complex c = delta.at(i, j * d + k);
        if (c != 0.0) s += c * mu.values[j] * nu.values[k];
      }
    }
    out[i] = s;
  }
  return {qg.algebra(), std::move(out)};
}

Functional haar_state(const QuantumGroup& qg) { return qg.haar(); }

double amenability_defect(const Functional& phi, const QuantumGroup& qg,
                          const std::vector<Functional>& thetas) {
  if (thetas.empty()) fail(Errc::internal, "amenability defect needs a nonempty family");
  double defect = 0.0;
  for (const Functional& theta : thetas)
    defect = std::max(defect, dual_norm(convolve(theta, phi, qg) - phi));
  return defect;
}

std::string AveragingNet::description() const {
  const char* k = kind == Kind::constant_haar ? "constant-haar" : "cesaro";
  return std::string(k) + "[" + std::to_string(length) + "]";
}

AveragingNet cesaro_net(const Functional& mu, int n_max, const QuantumGroup& qg) {
  if (n_max < 1) fail(Errc::internal, "cesaro net needs n_max >= 1");
  if (!is_state(mu, 1e-8)) fail(Errc::not_a_state, "cesaro generator is not a state");
  AveragingNet net;
  net.kind = AveragingNet::Kind::cesaro;
  net.generator = mu;
  net.length = n_max;
  net.states.reserve(n_max);
  Functional power = mu;
  CVec sum = mu.values;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) {
      power = convolve(power, mu, qg);
      for (int i = 0; i < int(sum.size()); ++i) sum[i] += power.values[i];
    }
    CVec avg(sum.size());
    for (std::size_t i = 0; i < sum.size(); ++i) avg[i] = sum[i] / double(n);
    Functional phi{mu.algebra, std::move(avg)};
    if (!is_state(phi, 1e-10))
      fail(Errc::not_a_state, "cesaro average at n=" + std::to_string(n) + " is not a state");
    net.states.push_back(std::move(phi));
  }
  return net;
}

AveragingNet constant_haar_net(int n_max, const QuantumGroup& qg) {
  if (n_max < 1) fail(Errc::internal, "net needs n_max >= 1");
  AveragingNet net;
  net.kind = AveragingNet::Kind::constant_haar;
  net.length = n_max;
  net.states.assign(n_max, qg.haar());
  return net;
}

std::shared_ptr<const QuantumGroup> build_function_algebra(const CayleyTable& g) {
  const int n = g.order;
  std::vector<CMatrix> basis;
  for (int i = 0; i < n; ++i) {
    CMatrix e(n, n);
    e.at(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  auto alg = StarAlgebra::validate(std::move(basis), std::vector<int>(n, 1), 1e-9,
                                   "C(G" + std::to_string(n) + ")");
  CMatrix delta(n, n * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) delta.at(g.table[j][k], j * n + k) = 1.0;
  CVec haar(n, Complex(1.0 / n));
  return std::make_shared<QuantumGroup>(alg, std::move(delta), std::move(haar), 1e-9,
                                        "function-algebra(" + std::to_string(n) + ")");
}

std::vector<std::vector<int>> abelian_characters(const CayleyTable& g) {
  if (!g.is_abelian()) fail(Errc::missing_block_data, "characters require an abelian group");
  const int n = g.order;
  const int ex = g.exponent();
  std::vector<std::vector<int>> out;
  std::vector<int> a(n, -1);
  a[0] = 0;

  // Close a partial assignment under the group law; false on conflict.
  auto propagate = [&](std::vector<int>& v) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < n; ++i) {
        if (v[i] < 0) continue;
        for (int j = 0; j < n; ++j) {
          if (v[j] < 0) continue;
          const int t = g.table[i][j];
          const int want = (v[i] + v[j]) % ex;
          if (v[t] < 0) {
            v[t] = want;
            changed = true;
          } else if (v[t] != want) {
            return false;
          }
        }
      }
    }
    return true;
  };

  std::vector<std::vector<int>> stack{a};
  while (!stack.empty()) {
    std::vector<int> cur = std::move(stack.back());
    stack.pop_back();
    if (!propagate(cur)) continue;
    int next = -1;
    for (int i = 0; i < n; ++i)
      if (cur[i] < 0) {
        next = i;
        break;
      }
    if (next < 0) {
      out.push_back(cur);
      continue;
    }
    const int ord = g.element_order(next);
    const int step = ex / ord;
    for (int k = ord - 1; k >= 0; --k) {
      std::vector<int> branch = cur;
      branch[next] = k * step;
      stack.push_back(std::move(branch));
    }
  }
  std::sort(out.begin(), out.end());
  if (int(out.size()) != n) fail(Errc::internal, "character search found " + std::to_string(out.size()) +
                                                     " characters for order " + std::to_string(n));
  return out;
}

std::shared_ptr<const QuantumGroup> build_group_algebra(const CayleyTable& g) {
  if (!g.is_abelian())
    fail(Errc::missing_block_data,
         "group algebra of a nonabelian group needs an explicit block decomposition");
  const int n = g.order;
  const int ex = g.exponent();
  const auto chars = abelian_characters(g);
  std::vector<CMatrix> basis;
  for (int gi = 0; gi < n; ++gi) {
    CMatrix lam(n, n);
    for (int c = 0; c < n; ++c) lam.at(c, c) = std::polar(1.0, 2.0 * kPi * chars[c][gi] / ex);
    basis.push_back(std::move(lam));
  }
  auto alg = StarAlgebra::validate(std::move(basis), std::vector<int>(n, 1), 1e-9,
                                   "Group(G" + std::to_string(n) + ")");
  CMatrix delta(n, n * n);
  for (int gi = 0; gi < n; ++gi) delta.at(gi, gi * n + gi) = 1.0;
  CVec haar(n, 0.0);
  haar[0] = 1.0;
  return std::make_shared<QuantumGroup>(alg, std::move(delta), std::move(haar), 1e-9,
                                        "group-algebra(" + std::to_string(n) + ")");
}

std::shared_ptr<const QuantumGroup> build_group_algebra(
    const CayleyTable& g, const std::vector<std::vector<CMatrix>>& irreps) {
  const int n = g.order;
  int sq = 0;
  std::vector<int> block_dims;
  for (const auto& rep : irreps) {
    if (int(rep.size()) != n) fail(Errc::missing_block_data, "representation matrix count");
    const int d = rep.front().rows();
    block_dims.push_back(d);
    sq += d * d;
  }
  if (sq != n)
    fail(Errc::missing_block_data, "squared representation dimensions must sum to the group order");
  int amb = 0;
  for (int d : block_dims) amb += d;
  std::vector<CMatrix> basis;
  for (int gi = 0; gi < n; ++gi) {
    CMatrix lam(amb, amb);
    int off = 0;
    for (std::size_t r = 0; r < irreps.size(); ++r) {
      const CMatrix& m = irreps[r][gi];
      for (int p = 0; p < block_dims[r]; ++p)
        for (int q = 0; q < block_dims[r]; ++q) lam.at(off + p, off + q) = m.at(p, q);
      off += block_dims[r];
    }
    basis.push_back(std::move(lam));
  }
  auto alg = StarAlgebra::validate(std::move(basis), block_dims, 1e-9, "Group(G" + std::to_string(n) + ")");
  CMatrix delta(n, n * n);
  for (int gi = 0; gi < n; ++gi) delta.at(gi, gi * n + gi) = 1.0;
  CVec haar(n, 0.0);
  haar[0] = 1.0;
  return std::make_shared<QuantumGroup>(alg, std::move(delta), std::move(haar), 1e-9,
                                        "group-algebra(" + std::to_string(n) + ")");
}

std::vector<std::vector<CMatrix>> symmetric3_irreps() {
  const CayleyTable s3 = CayleyTable::symmetric3();
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  auto parity = [&](int gi) {
    int inv = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        if (perms[gi][a] > perms[gi][b]) ++inv;
    return inv % 2 == 0 ? 1.0 : -1.0;
  };
  // Standard representation on the plane orthogonal to (1,1,1).
  const double v1[3] = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0};
  const double v2[3] = {1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0)};
  const double* vs[2] = {v1, v2};

  std::vector<std::vector<CMatrix>> irreps(3);
  for (int gi = 0; gi < 6; ++gi) {
    irreps[0].push_back(CMatrix::from_rows({{1.0}}));
    irreps[1].push_back(CMatrix::from_rows({{parity(gi)}}));
    CMatrix rho(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double s = 0.0;
        for (int x = 0; x < 3; ++x) s += vs[a][perms[gi][x]] * vs[b][x];  // <v_a, P v_b>
        rho.at(a, b) = s;
      }
    irreps[2].push_back(std::move(rho));
  }
  (void)s3;
  return irreps;
}

}  // namespace qel
