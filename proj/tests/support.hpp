#ifndef QEL_TESTS_SUPPORT_HPP
#define QEL_TESTS_SUPPORT_HPP

#include <filesystem>
#include <random>
#include <string>

#include "doctest.h"
#include "qel/algebra.hpp"
#include "qel/eig.hpp"

namespace qel::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng) {
  return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
}

inline Complex random_complex(Rng& rng) { return {uniform(rng), uniform(rng)}; }

inline CMatrix random_matrix(int r, int c, Rng& rng) {
  CMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = random_complex(rng);
  return m;
}

inline CMatrix random_hermitian(int n, Rng& rng) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = uniform(rng);
    for (int j = i + 1; j < n; ++j) {
      m.at(i, j) = random_complex(rng);
      m.at(j, i) = std::conj(m.at(i, j));
    }
  }
  return m;
}

/// Random positive functional via a PSD block representative.
inline Functional random_positive(std::shared_ptr<const StarAlgebra> a, Rng& rng) {
  std::vector<CMatrix> reps;
  for (int d : a->block_dims()) {
    const CMatrix g = random_matrix(d, d, rng);
    reps.push_back(matmul(g, g.adjoint()));
  }
  CVec values(a->dim(), 0.0);
  for (int i = 0; i < a->dim(); ++i) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < reps.size(); ++k)
      s += matmul(reps[k], a->block(a->basis()[i], int(k))).trace();
    values[i] = s;
  }
  return {std::move(a), std::move(values)};
}

inline Functional random_state(std::shared_ptr<const StarAlgebra> a, Rng& rng) {
  Functional f = random_positive(a, rng);
  const Complex total = f.at_unit();
  for (Complex& v : f.values) v /= total;
  return f;
}

inline Element random_element(std::shared_ptr<const Algebra> a, Rng& rng) {
  CVec c(a->dim());
  for (Complex& v : c) v = random_complex(rng);
  return {std::move(a), std::move(c)};
}

inline std::shared_ptr<const StarAlgebra> m2_algebra() {
  std::vector<CMatrix> basis;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      CMatrix e(2, 2);
      e.at(p, q) = 1.0;
      basis.push_back(std::move(e));
    }
  return StarAlgebra::validate(std::move(basis), {2}, 1e-9, "M2");
}

inline std::filesystem::path source_dir() { return std::filesystem::path(QEL_SOURCE_DIR); }

}  // namespace qel::test

#endif
