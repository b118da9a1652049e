#include "support.hpp"

#include <cstring>

#include "qel/error.hpp"

using namespace qel;
using qel::test::Rng;

TEST_CASE("hermitian_eig small exact cases") {
  CMatrix d(2, 2);
  d.at(0, 0) = 2.0;
  d.at(1, 1) = 1.0;
  const HermEigResult e = hermitian_eig(d);
  CHECK(e.values[0] == doctest::Approx(2.0));
  CHECK(e.values[1] == doctest::Approx(1.0));
  CHECK(max_abs_diff(e.vectors, CMatrix::identity(2)) <= 1e-15);

  const CMatrix sx = CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  const HermEigResult es = hermitian_eig(sx);
  CHECK(es.values[0] == doctest::Approx(1.0));
  CHECK(es.values[1] == doctest::Approx(-1.0));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(es.vectors.at(0, 0) - r) <= 1e-12);
  CHECK(std::abs(es.vectors.at(1, 0) - r) <= 1e-12);
  CHECK(std::abs(es.vectors.at(0, 1) - r) <= 1e-12);
  CHECK(std::abs(es.vectors.at(1, 1) + r) <= 1e-12);

  const HermEigResult ez = hermitian_eig(CMatrix(3, 3));
  for (double v : ez.values) CHECK(v == 0.0);
  CHECK(max_abs_diff(matmul(ez.vectors, ez.vectors.adjoint()), CMatrix::identity(3)) <= 1e-14);
}

TEST_CASE("hermitian_eig rejects asymmetric input") {
  CMatrix a = CMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
  CHECK_THROWS_AS(hermitian_eig(a), Error);
}

TEST_CASE("hermitian_eig reconstruction and orthonormality up to n=64") {
  Rng rng(21);
  for (int n : {2, 3, 5, 8, 16, 33, 64}) {
    const CMatrix m = qel::test::random_hermitian(n, rng);
    const HermEigResult e = hermitian_eig(m);
    CMatrix lam(n, n);
    for (int i = 0; i < n; ++i) lam.at(i, i) = e.values[i];
    const CMatrix rec = matmul(matmul(e.vectors, lam), e.vectors.adjoint());
    CHECK(max_abs_diff(rec, m) <= 1e-9 * std::max(1.0, m.max_abs()));
    CHECK(max_abs_diff(matmul(e.vectors.adjoint(), e.vectors), CMatrix::identity(n)) <= 1e-12);
    for (int i = 0; i + 1 < n; ++i) CHECK(e.values[i] >= e.values[i + 1]);
  }
}

TEST_CASE("hermitian_eig is bit-deterministic") {
  Rng rng(22);
  const CMatrix m = qel::test::random_hermitian(12, rng);
  const HermEigResult a = hermitian_eig(m);
  const HermEigResult b = hermitian_eig(m);
  CHECK(std::memcmp(a.vectors.data(), b.vectors.data(), sizeof(Complex) * a.vectors.size()) == 0);
  CHECK(a.values == b.values);
}

TEST_CASE("null_space examples") {
  CHECK(null_space(CMatrix::identity(3), 1e-10).cols() == 0);
  CHECK(null_space(CMatrix(3, 3), 1e-10).cols() == 3);

  const CMatrix m = CMatrix::from_rows({{1.0, -1.0}, {0.0, 0.0}});
  const CMatrix ns = null_space(m, 1e-10);
  REQUIRE(ns.cols() == 1);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(ns.at(0, 0) - r) <= 1e-12);
  CHECK(std::abs(ns.at(1, 0) - r) <= 1e-12);
}

TEST_CASE("null_space orthonormality on random rank-deficient input") {
  Rng rng(23);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 6, r = 3;
    const CMatrix a = qel::test::random_matrix(n, r, rng);
    const CMatrix b = qel::test::random_matrix(r, n, rng);
    const CMatrix m = matmul(a, b);  // rank <= 3
    const CMatrix ns = null_space(m, 1e-10);
    CHECK(ns.cols() == n - r);
    const CMatrix gram = matmul(ns.adjoint(), ns);
    CHECK(max_abs_diff(gram, CMatrix::identity(ns.cols())) <= 1e-10);
    CHECK(matmul(m, ns).max_abs() <= 1e-9 * m.max_abs());
  }
}

TEST_CASE("jacobi_svd factorization") {
  Rng rng(24);
  for (int rep = 0; rep < 6; ++rep) {
    const CMatrix m = qel::test::random_matrix(7, 5, rng);
    const SvdResult s = jacobi_svd(m);
    CMatrix sigma(5, 5);
    for (int i = 0; i < 5; ++i) sigma.at(i, i) = s.singular_values[i];
    CHECK(max_abs_diff(matmul(matmul(s.left, sigma), s.right.adjoint()), m) <= 1e-12 * m.max_abs() * 100);
    CHECK(max_abs_diff(matmul(s.right.adjoint(), s.right), CMatrix::identity(5)) <= 1e-12);
    for (int i = 0; i + 1 < 5; ++i) CHECK(s.singular_values[i] >= s.singular_values[i + 1]);
  }
}

TEST_CASE("operator and trace norms") {
  CMatrix d(2, 2);
  d.at(0, 0) = 3.0;
  d.at(1, 1) = -4.0;
  CHECK(operator_norm(d) == doctest::Approx(4.0));
  CHECK(trace_norm(d) == doctest::Approx(7.0));
}

TEST_CASE("general eigenvalues: companion of unity and trace checks") {
  CMatrix comp(3, 3);
  comp.at(0, 2) = 1.0;
  comp.at(1, 0) = 1.0;
  comp.at(2, 1) = 1.0;
  const CVec ev = general_eigenvalues(comp);
  REQUIRE(ev.size() == 3);
  for (Complex z : ev) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-12);
  CHECK(std::abs(ev[0] - Complex(1.0)) <= 1e-10);

  Rng rng(25);
  for (int rep = 0; rep < 4; ++rep) {
    const CMatrix g = qel::test::random_matrix(8, 8, rng);
    const CVec vals = general_eigenvalues(g);
    Complex sum = 0.0;
    for (Complex z : vals) sum += z;
    CHECK(std::abs(sum - g.trace()) <= 1e-10);
  }
  // Agreement with the Hermitian solver.
  const CMatrix h = qel::test::random_hermitian(6, rng);
  const CVec gv = general_eigenvalues(h);
  const HermEigResult he = hermitian_eig(h);
  std::vector<double> re;
  for (Complex z : gv) {
    CHECK(std::abs(z.imag()) <= 1e-10);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end(), std::greater<>());
  for (int i = 0; i < 6; ++i) CHECK(re[i] == doctest::Approx(he.values[i]).epsilon(1e-9));
}

TEST_CASE("lu solves") {
  Rng rng(26);
  const CMatrix a = qel::test::random_matrix(9, 9, rng);
  const Lu lu(a);
  CVec b(9);
  for (Complex& v : b) v = qel::test::random_complex(rng);
  const CVec x = lu.solve(b);
  CHECK(max_abs_diff(matvec(a, x), b) <= 1e-11);
  CHECK_THROWS_AS(Lu(CMatrix(3, 3)), Error);
}
