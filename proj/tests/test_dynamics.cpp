#include "support.hpp"

#include "qel/action.hpp"
#include "qel/error.hpp"
#include "qel/io.hpp"

using namespace qel;
using qel::test::Rng;

TEST_CASE("action validation: translation and trivial") {
  auto z3 = build_function_algebra(CayleyTable::cyclic(3));
  const Action tr = translation_action(z3);
  CHECK(tr.unital());
  CHECK(tr.injective());
  CHECK(tr.coaction_defect() <= 1e-12);

  auto m2 = qel::test::m2_algebra();
  const Action triv = trivial_action(z3, m2);
  CHECK(triv.unital());
  CHECK(triv.coaction_defect() <= 1e-12);
}

TEST_CASE("action validation failures") {
  auto z3 = build_function_algebra(CayleyTable::cyclic(3));

  // comultiplication composed with a non-translation point permutation is
  // still a homomorphism but fails the coaction identity
  CMatrix alpha(3, 9);
  const int swap01[3] = {1, 0, 2};
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 9; ++c) alpha.at(swap01[i], c) = z3->delta().at(i, c);
  try {
    Action::validate(z3->algebra(), z3, alpha);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_coaction);
  }

  // rank-deficient character embedding is a homomorphism but not injective
  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  CMatrix onto_unit(2, 4);
  // alpha(delta_0) = 1 (x) 1, alpha(delta_1) = 0
  onto_unit.at(0, 0 * 2 + 0) = 1.0;
  onto_unit.at(0, 0 * 2 + 1) = 1.0;
  onto_unit.at(0, 1 * 2 + 0) = 1.0;
  onto_unit.at(0, 1 * 2 + 1) = 1.0;
  try {
    Action::validate(z2->algebra(), z2, onto_unit);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_injective);
  }
  ActionOptions loose;
  loose.require_injective = false;
  const Action a = Action::validate(z2->algebra(), z2, onto_unit, loose);
  CHECK_FALSE(a.injective());

  // corrupting a coefficient breaks the homomorphism laws
  CMatrix bad = z3->delta();
  bad.at(0, 0) += 0.25;
  CHECK_THROWS_AS(Action::validate(z3->algebra(), z3, bad), Error);
}

TEST_CASE("invariance defects") {
  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  const Action tr = translation_action(z2);
  const auto thetas = state_spanning_family(z2->algebra());
  CHECK(invariance_check(z2->haar(), tr, thetas) <= 1e-12);

  // independent oracle for the skewed measure: the shifted measure gap
  Functional skew{z2->algebra(), {0.9, 0.1}};
  double oracle = 0.0;
  for (int g = 0; g < 2; ++g) {  // theta = delta_g evaluation
    for (int i = 0; i < 2; ++i) {
      const double shifted = skew.values[(i + 2 - g) % 2].real();
      oracle = std::max(oracle, std::abs(shifted - skew.values[i].real()));
    }
  }
  CHECK(oracle == doctest::Approx(0.8));
  CHECK(invariance_check(skew, tr, thetas) == doctest::Approx(oracle));

  auto z3 = build_function_algebra(CayleyTable::cyclic(3));
  const Action triv = trivial_action(z3, z2->algebra());
  const auto thetas3 = state_spanning_family(z3->algebra());
  CHECK(invariance_check(skew, triv, thetas3) <= 1e-15);
}

TEST_CASE("gns construction") {
  auto m2 = qel::test::m2_algebra();
  const GnsSpace faithful = gns(m2, trace_state(m2));
  CHECK(faithful.dim == 4);
  CHECK(vec_norm(faithful.omega_vector) == doctest::Approx(1.0));

  Functional pure{m2, {1.0, 0.0, 0.0, 0.0}};  // rho = diag(1, 0)
  const GnsSpace degenerate = gns(m2, pure);
  CHECK(degenerate.dim == 2);

  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  const GnsSpace g2 = gns(z2->algebra(), z2->haar());
  CHECK(g2.dim == 2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(g2.omega_vector[0] - r) <= 1e-12);
  CHECK(std::abs(g2.omega_vector[1] - r) <= 1e-12);

  // inner products reproduce omega(a* b)
  Rng rng(51);
  for (int rep = 0; rep < 10; ++rep) {
    const Element a = qel::test::random_element(m2, rng);
    const Element b = qel::test::random_element(m2, rng);
    const Complex lhs = inner(faithful.map(a), faithful.map(b));
    const Complex rhs = trace_state(m2)(adjoint(a) * b);
    CHECK(std::abs(lhs - rhs) <= 1e-9);
  }

  Functional not_state{m2, {1.0, 0.0, 0.0, 1.0}};
  CHECK_THROWS_AS(gns(m2, not_state), Error);
}

TEST_CASE("gns flags spectra that crowd the rank cutoff") {
  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  Functional nearly_pure{z2->algebra(), {1.0 - 5e-13, 5e-13}};
  const GnsSpace g = gns(z2->algebra(), nearly_pure);
  CHECK(g.dim == 1);
  CHECK(g.near_cutoff);
  const GnsSpace safe = gns(z2->algebra(), z2->haar());
  CHECK_FALSE(safe.near_cutoff);
}

TEST_CASE("mu_tilde on simple tensors and the pairing identity") {
  Rng rng(52);
  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  auto m2 = qel::test::m2_algebra();

  for (const auto& right : {z2->algebra(), m2}) {
    const Functional omega = qel::test::random_state(right, rng);
    const GnsSpace g = gns(right, omega);
    auto t = std::make_shared<TensorAlgebra>(z2->algebra(), right);
    auto ta = std::static_pointer_cast<const Algebra>(t);

    // rank-one tensor r (x) a
    const Functional mu = qel::test::random_positive(z2->algebra(), rng);
    const Element a = qel::test::random_element(right, rng);
    Element ra{ta, CVec(t->dim(), 0.0)};
    for (int k = 0; k < right->dim(); ++k) ra.coeffs[t->pair_index(1, k)] = a.coeffs[k];
    CHECK(max_abs_diff(mu_tilde(mu, ra, g), mu.values[1] * g.map(a)) <= 1e-10);

    // both characterizations agree and the norm bound holds
    for (int rep = 0; rep < 10; ++rep) {
      const Element big = qel::test::random_element(ta, rng);
      const CVec v = mu_tilde(mu, big, g);
      const Functional muomega = tensor_functional(mu, omega, t);
      for (int d = 0; d < right->dim(); ++d) {
        Element one_d{ta, CVec(t->dim(), 0.0)};
        for (int r = 0; r < 2; ++r) one_d.coeffs[t->pair_index(r, d)] = z2->algebra()->unit_coeffs()[r];
        const Complex lhs = inner(g.map(basis_element(right, d)), v);
        const Complex rhs = muomega(adjoint(one_d) * big);
        const Complex rhs2 = omega(adjoint(basis_element(right, d)) * slice_left(mu, big));
        CHECK(std::abs(lhs - rhs) <= 1e-10);
        CHECK(std::abs(lhs - rhs2) <= 1e-10);
      }
      CHECK(vec_norm(v) <= dual_norm(mu) * operator_norm(ambient(big)) + 1e-9);
    }
  }
}

TEST_CASE("transfer operators: identity, spectrum, idempotent") {
  auto z4 = build_function_algebra(CayleyTable::cyclic(4));
  const Action tr = translation_action(z4);
  const GnsSpace g = gns(z4->algebra(), z4->haar());

  Functional d0{z4->algebra(), {1.0, 0.0, 0.0, 0.0}};
  const TransferOperator k0 = transfer_operator(d0, tr, g);
  CHECK(max_abs_diff(k0.matrix, CMatrix::identity(4)) <= 1e-12);

  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  const Action tr2 = translation_action(z2);
  const GnsSpace g2 = gns(z2->algebra(), z2->haar());
  Functional p{z2->algebra(), {0.8, 0.2}};
  const TransferOperator kp2 = transfer_operator(p, tr2, g2);
  const CVec eigs = general_eigenvalues(kp2.matrix);
  CHECK(std::abs(eigs[0] - Complex(1.0)) <= 1e-10);
  CHECK(std::abs(eigs[1] - Complex(0.6)) <= 1e-10);

  auto kp = io::load_quantum_group(qel::test::source_dir() / "data/kac_paljutkin.json");
  for (const auto& qg : {z4, kp}) {
    const Action t = translation_action(qg);
    const GnsSpace gh = gns(qg->algebra(), qg->haar());
    const TransferOperator kh = transfer_operator(qg->haar(), t, gh);
    CHECK(max_abs_diff(matmul(kh.matrix, kh.matrix), kh.matrix) <= 1e-9);
  }
}

TEST_CASE("transfer operator norms and contraction") {
  Rng rng(53);
  auto z5 = build_function_algebra(CayleyTable::cyclic(5));
  const Action tr = translation_action(z5);
  const GnsSpace g = gns(z5->algebra(), z5->haar());
  for (int rep = 0; rep < 20; ++rep) {
    const Functional mu = qel::test::random_positive(z5->algebra(), rng);
    const TransferOperator k = transfer_operator(mu, tr, g);
    CHECK(k.op_norm <= dual_norm(mu) + 1e-9);
    CHECK(std::abs(k.op_norm - dual_norm(mu)) <= 1e-8 * std::max(1.0, dual_norm(mu)));
  }
  for (int rep = 0; rep < 10; ++rep) {
    const Functional st = qel::test::random_state(z5->algebra(), rng);
    const TransferOperator k = transfer_operator(st, tr, g);
    const SvdResult svd = jacobi_svd(k.matrix);
    for (double s : svd.singular_values) CHECK(s <= 1.0 + 1e-9);
  }
}

TEST_CASE("unital actions scale the cyclic vector by the functional mass") {
  Rng rng(55);
  auto s3 = build_function_algebra(CayleyTable::symmetric3());
  const Action tr = translation_action(s3);
  const GnsSpace g = gns(s3->algebra(), s3->haar());
  for (int rep = 0; rep < 8; ++rep) {
    const Functional mu = qel::test::random_positive(s3->algebra(), rng);
    const TransferOperator k = transfer_operator(mu, tr, g);
    const CVec expected = mu.at_unit() * g.omega_vector;
    CHECK(max_abs_diff(matvec(k.matrix, g.omega_vector), expected) <= 1e-9);
  }
}

TEST_CASE("convolution functoriality with order reversal") {
  Rng rng(54);
  auto s3 = build_function_algebra(CayleyTable::symmetric3());
  auto gz4 = build_group_algebra(CayleyTable::cyclic(4));
  for (const auto& qg : {s3, gz4}) {
    const Action tr = translation_action(qg);
    const GnsSpace g = gns(qg->algebra(), qg->haar());
    for (int rep = 0; rep < 10; ++rep) {
      const Functional mu = qel::test::random_state(qg->algebra(), rng);
      const Functional nu = qel::test::random_state(qg->algebra(), rng);
      const TransferOperator kmu = transfer_operator(mu, tr, g);
      const TransferOperator knu = transfer_operator(nu, tr, g);
      const TransferOperator kconv = transfer_operator(convolve(mu, nu, *qg), tr, g);
      CHECK(operator_norm(kconv.matrix - matmul(knu.matrix, kmu.matrix)) <= 1e-9);
    }
  }
}

TEST_CASE("transfer operator requires invariance for the given functional") {
  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  const Action tr = translation_action(z2);
  Functional skew{z2->algebra(), {0.9, 0.1}};
  const GnsSpace g = gns(z2->algebra(), skew);
  Functional d1{z2->algebra(), {0.0, 1.0}};
  try {
    transfer_operator(d1, tr, g);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_invariant);
  }
}

TEST_CASE("action data file round trip through the scenario loader") {
  // emit an action document equivalent to the translation action of C(Z2)
  auto z2 = build_function_algebra(CayleyTable::cyclic(2));
  io::json doc;
  doc["group"] = io::quantum_group_to_json(*z2);
  doc["algebra"] = io::algebra_to_json(*z2->algebra(), "C2");
  io::json alpha = io::json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const Complex c = z2->delta().at(i, j * 2 + k);
        if (c != 0.0) alpha.push_back(io::json::array({i, j, k, c.real(), c.imag()}));
      }
  doc["alpha"] = std::move(alpha);

  const auto tmp = std::filesystem::temp_directory_path() / "qel_test_action.json";
  io::write_text_atomic(tmp, doc.dump());

  auto group2 = io::quantum_group_from_json(doc["group"]);
  auto algebra2 = io::algebra_from_json(doc["algebra"]);
  CMatrix alpha2(2, 4);
  for (const auto& t : doc["alpha"])
    alpha2.at(t[0].get<int>(), t[1].get<int>() * 2 + t[2].get<int>()) =
        Complex(t[3].get<double>(), t[4].get<double>());
  const Action act = Action::validate(algebra2, group2, alpha2);
  CHECK(act.coaction_defect() <= 1e-12);
  std::filesystem::remove(tmp);
}
