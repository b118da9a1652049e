#include "support.hpp"

#include <functional>

#include "qel/error.hpp"
#include "qel/quantum_group.hpp"

using namespace qel;
using qel::test::Rng;

namespace {

CMatrix unit_matrix(int n, int p, int q) {
  CMatrix e(n, n);
  e.at(p, q) = 1.0;
  return e;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal;
}

}  // namespace

TEST_CASE("validate_algebra accepts canonical presentations") {
  auto m2 = qel::test::m2_algebra();
  CHECK(m2->dim() == 4);
  CHECK(m2->ambient_dim() == 2);

  auto c2 = StarAlgebra::validate({unit_matrix(2, 0, 0), unit_matrix(2, 1, 1)}, {1, 1});
  CHECK(c2->dim() == 2);
  CHECK(max_abs_diff(c2->unit_coeffs(), CVec{1.0, 1.0}) <= 1e-12);
}

TEST_CASE("validate_algebra rejections") {
  // adjoint of e12 leaves the span
  CHECK(code_of([] {
          StarAlgebra::validate({unit_matrix(2, 0, 0), unit_matrix(2, 0, 1), unit_matrix(2, 1, 1)},
                                {2});
        }) == Errc::not_closed);
  // closed proper subalgebra declared as the full block
  CHECK(code_of([] {
          StarAlgebra::validate({unit_matrix(2, 0, 0), unit_matrix(2, 1, 1)}, {2});
        }) == Errc::bad_blocks);
  // block sizes inconsistent with the ambient size
  CHECK(code_of([] { StarAlgebra::validate({unit_matrix(2, 0, 0)}, {1, 1, 1}); }) == Errc::bad_blocks);
  // mass outside the declared blocks
  CHECK(code_of([] {
          StarAlgebra::validate({unit_matrix(2, 0, 0), unit_matrix(2, 0, 1), unit_matrix(2, 1, 0),
                                 unit_matrix(2, 1, 1)},
                                {1, 1});
        }) == Errc::bad_blocks);
  // dependent basis
  CHECK(code_of([] {
          auto e = unit_matrix(2, 0, 0);
          StarAlgebra::validate({e, e, unit_matrix(2, 0, 1), unit_matrix(2, 1, 0)}, {2});
        }) == Errc::bad_blocks);
}

TEST_CASE("coefficient products agree with ambient products") {
  Rng rng(31);
  auto m2 = qel::test::m2_algebra();
  auto z3 = build_function_algebra(CayleyTable::cyclic(3))->algebra();
  for (const auto& alg : {m2, z3}) {
    for (int rep = 0; rep < 6; ++rep) {
      const Element x = qel::test::random_element(alg, rng);
      const Element y = qel::test::random_element(alg, rng);
      CHECK(max_abs_diff(ambient(x * y), matmul(ambient(x), ambient(y))) <= 1e-12 * 100);
      CHECK(max_abs_diff(ambient(adjoint(x)), ambient(x).adjoint()) <= 1e-12);
    }
  }
  auto t = std::make_shared<TensorAlgebra>(m2, z3);
  auto ta = std::static_pointer_cast<const Algebra>(t);
  for (int rep = 0; rep < 4; ++rep) {
    const Element x = qel::test::random_element(ta, rng);
    const Element y = qel::test::random_element(ta, rng);
    CHECK(max_abs_diff(ambient(x * y), matmul(ambient(x), ambient(y))) <= 1e-10);
  }
}

TEST_CASE("slice map basics") {
  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  auto t = std::make_shared<TensorAlgebra>(z2->algebra(), z2->algebra());
  auto ta = std::static_pointer_cast<const Algebra>(t);

  // unit slice: mu applied to 1 (x) a gives mu(1) a
  Functional mu{z2->algebra(), {0.3, 0.7}};
  Element one_a{ta, CVec(4, 0.0)};
  one_a.coeffs[t->pair_index(0, 1)] = 1.0;  // delta_0 (x) delta_1
  one_a.coeffs[t->pair_index(1, 1)] = 1.0;  // + delta_1 (x) delta_1 = 1 (x) delta_1
  const Element s = slice_left(mu, one_a);
  CHECK(std::abs(s.coeffs[0]) <= 1e-15);
  CHECK(std::abs(s.coeffs[1] - Complex(1.0)) <= 1e-15);  // mu(1) = 1

  // evaluation row: slicing the comultiplied function at a group point
  Functional d1{z2->algebra(), {0.0, 1.0}};
  const Element df = z2->comultiply({1.0, 0.0});  // Delta(delta_0)
  const Element row = slice_left(d1, df);
  CHECK(std::abs(row.coeffs[0]) <= 1e-15);
  CHECK(std::abs(row.coeffs[1] - Complex(1.0)) <= 1e-15);  // delta_0(1 * h) = [h = 1]

  // zero functional slices to zero
  Functional zero{z2->algebra(), {0.0, 0.0}};
  const Element z = slice_left(zero, one_a);
  CHECK(vec_max_abs(z.coeffs) == 0.0);

  // mismatches
  auto z3 = build_function_algebra(CayleyTable::cyclic(3));
  Functional wrong{z3->algebra(), CVec(3, 0.0)};
  CHECK_THROWS_AS(slice_left(wrong, one_a), Error);
  CHECK_THROWS_AS(slice_left(mu, Element{z2->algebra(), {1.0, 0.0}}), Error);
}

TEST_CASE("slice map compatibility with the paired evaluation") {
  Rng rng(32);
  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  auto m2 = qel::test::m2_algebra();
  for (const auto& right : {z2->algebra(), m2}) {
    auto t = std::make_shared<TensorAlgebra>(z2->algebra(), right);
    auto ta = std::static_pointer_cast<const Algebra>(t);
    const Functional omega = qel::test::random_state(right, rng);
    const Functional mu = qel::test::random_positive(z2->algebra(), rng);
    for (int rep = 0; rep < 10; ++rep) {
      const Element big = qel::test::random_element(ta, rng);
      for (int d = 0; d < right->dim(); ++d) {
        const Element bd = basis_element(right, d);
        // omega(d* . slice(mu, T)) = (mu (x) omega)([1 (x) d]* T)
        const Complex lhs = omega(adjoint(bd) * slice_left(mu, big));
        Element one_d{ta, CVec(t->dim(), 0.0)};
        for (int r = 0; r < z2->algebra()->dim(); ++r) {
          if (z2->algebra()->unit_coeffs()[r] == 0.0) continue;
          one_d.coeffs[t->pair_index(r, d)] = z2->algebra()->unit_coeffs()[r];
        }
        const Functional muomega = tensor_functional(mu, omega, t);
        const Complex rhs = muomega(adjoint(one_d) * big);
        CHECK(std::abs(lhs - rhs) <= 1e-9);
      }
    }
  }
}

TEST_CASE("dual norm") {
  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  CHECK(dual_norm(Functional{z2->algebra(), {1.0, -1.0}}) == doctest::Approx(2.0));
  CHECK(dual_norm(Functional{z2->algebra(), {0.0, 0.0}}) == 0.0);

  Rng rng(33);
  auto m2 = qel::test::m2_algebra();
  auto ks3 = build_group_algebra(CayleyTable::symmetric3(), symmetric3_irreps());
  for (const auto& alg : {z2->algebra(), m2, ks3->algebra()}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Functional st = qel::test::random_state(alg, rng);
      CHECK(dual_norm(st) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  // matrix-unit presentations: the dual norm never exceeds the value sum
  for (int rep = 0; rep < 5; ++rep) {
    Functional f{m2, CVec(4)};
    for (Complex& v : f.values) v = qel::test::random_complex(rng);
    double sum = 0.0;
    for (Complex v : f.values) sum += std::abs(v);
    CHECK(dual_norm(f) <= sum + 1e-10);
  }
}

TEST_CASE("tensor functional is multiplicative on simple tensors") {
  Rng rng(34);
  auto z3 = build_function_algebra(CayleyTable::cyclic(3));
  auto m2 = qel::test::m2_algebra();
  auto t = std::make_shared<TensorAlgebra>(z3->algebra(), m2);
  const Functional mu = qel::test::random_state(z3->algebra(), rng);
  const Functional nu = qel::test::random_state(m2, rng);
  const Functional both = tensor_functional(mu, nu, t);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) {
      Element e{std::static_pointer_cast<const Algebra>(t), CVec(12, 0.0)};
      e.coeffs[t->pair_index(i, j)] = 1.0;
      CHECK(std::abs(both(e) - mu.values[i] * nu.values[j]) <= 1e-12);
    }
}

TEST_CASE("state spanning family") {
  auto c1 = StarAlgebra::validate({CMatrix::identity(1)}, {1});
  CHECK(state_spanning_family(c1).size() == 1);

  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  const auto fam2 = state_spanning_family(z2->algebra());
  CHECK(fam2.size() == 2);

  auto m2 = qel::test::m2_algebra();
  const auto fam4 = state_spanning_family(m2);
  CHECK(fam4.size() == 4);
  for (const Functional& f : fam4) CHECK(is_state(f));

  // Kac-Paljutkin blocks (1,1,1,1,2): 4 + 4 states
  std::vector<CMatrix> units;
  for (int b = 0; b < 4; ++b) units.push_back(unit_matrix(6, b, b));
  for (int p = 4; p < 6; ++p)
    for (int q = 4; q < 6; ++q) units.push_back(unit_matrix(6, p, q));
  auto kp_alg = StarAlgebra::validate(units, {1, 1, 1, 1, 2});
  CHECK(state_spanning_family(kp_alg).size() == 8);
}

TEST_CASE("positive functionals are nonnegative on squares") {
  Rng rng(35);
  auto m2 = qel::test::m2_algebra();
  auto ks3 = build_group_algebra(CayleyTable::symmetric3(), symmetric3_irreps());
  for (const auto& alg : {m2, ks3->algebra()}) {
    const Functional f = qel::test::random_positive(alg, rng);
    REQUIRE(is_positive(f));
    for (int rep = 0; rep < 20; ++rep) {
      const Element a = qel::test::random_element(alg, rng);
      CHECK((f(adjoint(a) * a)).real() >= -1e-10);
      CHECK(std::abs((f(adjoint(a) * a)).imag()) <= 1e-9 * (1.0 + std::abs(f(adjoint(a) * a))));
    }
  }
}

TEST_CASE("positivity and state checks") {
  auto m2 = qel::test::m2_algebra();
  const Functional tau = trace_state(m2);
  CHECK(is_state(tau));
  CHECK(std::abs(tau.values[0] - Complex(0.5)) <= 1e-15);

  Functional notpos{m2, {1.0, 0.0, 0.0, -0.5}};  // diag(1, -1/2)
  CHECK_FALSE(is_positive(notpos));
  Functional nonherm{m2, {0.5, 1.0, 0.0, 0.5}};
  CHECK_FALSE(is_positive(nonherm));
  Functional unnormalized{m2, {1.0, 0.0, 0.0, 1.0}};
  CHECK(is_positive(unnormalized));
  CHECK_FALSE(is_state(unnormalized));
}
