// Generates data/kac_paljutkin.json: the 8-dimensional quantum group with
// block structure C^4 + M2 that is neither commutative nor cocommutative.
//
// The algebra is the plain block algebra C^4 + M2 with central idempotents
// d_{ij} (i,j in Z2) and matrix units e_{mn}; all the structure sits in
// the coproduct, which convolves the d's over Z2 x Z2 and couples them to
// the matrix block through phase functions built from two unit phases
// h0, h1:
//
//   Delta(d_ij) = sum_{mn} d_mn (x) d_{i+m,j+n}
//               + (1/2) sum_{mn} phi_ij(m,n)   e_mn (x) e_{m+j,n+j}
//   Delta(e_mn) = sum_{ij} psi_ij(m,n) d_ij (x) e_{m+j,n+j}
//               + sum_{ij} xi_ij(m,n)  e_{m+j,n+j} (x) d_ij
//
// with phi_ij(m,n) = (-1)^{i(m-n)} h_j(m) conj(h_j(n)) and psi, xi the
// induced coboundary ratios (h_j(0) = 1, h_j(1) = h_j).  This shape
// already satisfies the local consistency identities; the remaining
// axioms select the pair (h0, h1), searched over eighth roots of unity
// and accepted only when the full validation passes (unital
// *-homomorphism, coassociativity, unique positive invariant state) with
// a genuinely noncocommutative coproduct.  By the classification of
// eight-dimensional quantum groups this is then the Kac-Paljutkin object.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "qel/error.hpp"
#include "qel/io.hpp"

using namespace qel;

namespace {

int didx(int i, int j) { return 2 * i + j; }
int eidx(int m, int n) { return 4 + 2 * m + n; }

CMatrix ambient_of(int b) {
  CMatrix m(6, 6);
  if (b < 4)
    m.at(b, b) = 1.0;
  else
    m.at(4 + (b - 4) / 2, 4 + (b - 4) % 2) = 1.0;
  return m;
}

struct Phases {
  Complex h0, h1;
  Complex h(int j, int m) const { return m == 0 ? Complex(1.0) : (j == 0 ? h0 : h1); }

  Complex phi(int i, int j, int m, int n) const {
    const double sign = (i && ((m + n) % 2)) ? -1.0 : 1.0;
    return sign * h(j, m) * std::conj(h(j, n));
  }
  Complex psi(int i, int j, int m, int n) const {
    const double sign = (i && ((m + n) % 2)) ? -1.0 : 1.0;
    if (j == 0) return sign;
    return sign * h(1, (m + 1) % 2) * std::conj(h(1, (n + 1) % 2)) /
           (h(0, m) * std::conj(h(0, n)));
  }
  Complex xi(int i, int j, int m, int n) const {
    const double sign = (i && ((m + n) % 2)) ? -1.0 : 1.0;
    if (j == 0) return sign;
    return sign * h(1, m) * std::conj(h(1, n)) / (h(0, m) * std::conj(h(0, n)));
  }
};

CMatrix delta_for(const Phases& p) {
  const int n = 8;
  CMatrix delta(n, n * n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const int row = didx(i, j);
      for (int m = 0; m < 2; ++m)
        for (int nn = 0; nn < 2; ++nn) {
          delta.at(row, didx(m, nn) * n + didx((i + m) % 2, (j + nn) % 2)) += 1.0;
          delta.at(row, eidx(m, nn) * n + eidx((m + j) % 2, (nn + j) % 2)) +=
              0.5 * p.phi(i, j, m, nn);
        }
    }
  for (int m = 0; m < 2; ++m)
    for (int nn = 0; nn < 2; ++nn) {
      const int row = eidx(m, nn);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const int shifted = eidx((m + j) % 2, (nn + j) % 2);
          delta.at(row, didx(i, j) * n + shifted) += p.psi(i, j, m, nn);
          delta.at(row, shifted * n + didx(i, j)) += p.xi(i, j, m, nn);
        }
    }
  return delta;
}

double cocommutativity_defect(const CMatrix& delta, int n) {
  double d = 0.0;
  for (int t = 0; t < n; ++t)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        d = std::max(d, std::abs(delta.at(t, p * n + q) - delta.at(t, q * n + p)));
  return d;
}

double snap(double x) {
  double r = std::round(x * 1024.0) / 1024.0;
  if (r == 0.0) r = 0.0;  // no negative zeros in the data file
  return std::abs(x - r) < 1e-12 ? r : x;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out = argc > 1 ? argv[1] : "data/kac_paljutkin.json";
  constexpr double kPi = 3.14159265358979323846;

  std::vector<CMatrix> basis;
  for (int b = 0; b < 8; ++b) basis.push_back(ambient_of(b));
  auto alg = StarAlgebra::validate(basis, {1, 1, 1, 1, 2}, 1e-9, "kac_paljutkin");

  std::optional<CMatrix> found;
  int found_k0 = -1, found_k1 = -1;
  for (int k0 = 0; k0 < 8 && !found; ++k0)
    for (int k1 = 0; k1 < 8 && !found; ++k1) {
      Phases p{std::polar(1.0, 2.0 * kPi * k0 / 8.0), std::polar(1.0, 2.0 * kPi * k1 / 8.0)};
      CMatrix delta = delta_for(p);
      if (cocommutativity_defect(delta, 8) < 0.1) continue;
      try {
        QuantumGroup qg(alg, delta, std::nullopt, 1e-9, "candidate");
      } catch (const Error&) {
        continue;
      }
      found = std::move(delta);
      found_k0 = k0;
      found_k1 = k1;
    }
  if (!found) {
    std::fprintf(stderr, "no phase pair passed validation\n");
    return 1;
  }
  std::printf("phase exponents: h0 = zeta_8^%d, h1 = zeta_8^%d\n", found_k0, found_k1);

  CMatrix delta = *found;
  for (int t = 0; t < 8; ++t)
    for (int c = 0; c < 64; ++c) {
      Complex& z = delta.at(t, c);
      z = Complex(snap(z.real()), snap(z.imag()));
      if (std::abs(z) < 1e-12) z = 0.0;
    }

  auto kp = std::make_shared<QuantumGroup>(alg, delta, std::nullopt, 1e-9, "kac_paljutkin");
  std::printf("validated: coassociativity defect %.3e, cocommutativity defect %.3f\n",
              kp->coassociativity_defect(), cocommutativity_defect(delta, 8));
  std::printf("haar:");
  for (int i = 0; i < 8; ++i)
    std::printf(" %.6f%+.6fi", kp->haar().values[i].real(), kp->haar().values[i].imag());
  std::printf("\n");

  io::json doc = io::quantum_group_to_json(*kp, /*include_haar=*/false);
  io::write_text_atomic(out, doc.dump(2) + "\n");
  std::printf("wrote %s\n", out.string().c_str());

  auto back = io::load_quantum_group(out);
  std::printf("reload ok: haar(1) = %.12f\n", back->haar().at_unit().real());
  return 0;
}
