#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

using namespace qel;
using qel::test::Rng;

TEST_CASE("kron identities") {
  CHECK(max_abs_diff(kron(CMatrix::identity(2), CMatrix::identity(2)), CMatrix::identity(4)) == 0.0);

  CMatrix d12(2, 2), d34(2, 2);
  d12.at(0, 0) = 1.0;
  d12.at(1, 1) = 2.0;
  d34.at(0, 0) = 3.0;
  d34.at(1, 1) = 4.0;
  const CMatrix k = kron(d12, d34);
  CMatrix expect(4, 4);
  expect.at(0, 0) = 3.0;
  expect.at(1, 1) = 4.0;
  expect.at(2, 2) = 6.0;
  expect.at(3, 3) = 8.0;
  CHECK(max_abs_diff(k, expect) == 0.0);

  const CMatrix sx = CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  const CMatrix sxsx = kron(sx, sx);
  CHECK(max_abs_diff(matmul(sxsx, sxsx), CMatrix::identity(4)) <= 1e-15);
}

TEST_CASE("kron mixed-product rule on random inputs") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + int(rng() % 3), m = 2 + int(rng() % 3);
    const CMatrix a = qel::test::random_matrix(n, n, rng);
    const CMatrix b = qel::test::random_matrix(m, m, rng);
    const CMatrix c = qel::test::random_matrix(n, n, rng);
    const CMatrix d = qel::test::random_matrix(m, m, rng);
    CHECK(max_abs_diff(matmul(kron(a, b), kron(c, d)), kron(matmul(a, c), matmul(b, d))) <= 1e-12);
  }
}

TEST_CASE("kron associativity and bilinearity") {
  Rng rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    const CMatrix a = qel::test::random_matrix(3, 2, rng);
    const CMatrix b = qel::test::random_matrix(2, 4, rng);
    const CMatrix c = qel::test::random_matrix(2, 2, rng);
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) <= 1e-12);

    const Complex s = qel::test::random_complex(rng);
    const CMatrix a2 = qel::test::random_matrix(3, 2, rng);
    CHECK(max_abs_diff(kron(a + s * a2, b), kron(a, b) + s * kron(a2, b)) <= 1e-12);
  }
}

TEST_CASE("parallel kernels match the serial reference") {
  Rng rng(13);
  // Sizes straddling the parallel thresholds.
  for (int n : {8, 40, 90}) {
    const CMatrix a = qel::test::random_matrix(n, n + 3, rng);
    const CMatrix b = qel::test::random_matrix(n + 3, n - 1, rng);
    CHECK(max_abs_diff(matmul(a, b), ref::matmul(a, b)) == 0.0);
  }
  for (int n : {3, 17}) {
    const CMatrix a = qel::test::random_matrix(n, n, rng);
    const CMatrix b = qel::test::random_matrix(12, 9, rng);
    CHECK(max_abs_diff(kron(a, b), ref::kron(a, b)) == 0.0);
  }
}

TEST_CASE("vector helpers") {
  const CVec x{{1.0, 1.0}, {0.0, -2.0}};
  const CVec y{{2.0, 0.0}, {0.0, 1.0}};
  CHECK(std::abs(inner(x, y) - Complex(0.0, -2.0)) <= 1e-15);
  CHECK(vec_norm(x) == doctest::Approx(std::sqrt(6.0)));
  CHECK(vec_max_abs(x) == doctest::Approx(2.0));

  CMatrix a = CMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const CVec v{1.0, -1.0};
  const CVec av = matvec(a, v);
  CHECK(std::abs(av[0] - Complex(-1.0)) <= 1e-15);
  CHECK(std::abs(av[1] - Complex(-1.0)) <= 1e-15);
  CHECK(std::abs(a.trace() - Complex(5.0)) <= 1e-15);
  CHECK(a.adjoint().at(0, 1) == Complex(3.0));
}

TEST_CASE("finiteness guard") {
  CMatrix a(2, 2);
  CHECK(a.is_finite());
  a.at(0, 1) = Complex(1.0 / 0.0, 0.0);
  CHECK_FALSE(a.is_finite());
}
