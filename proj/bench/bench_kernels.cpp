// Wall-clock comparison of the OpenMP kernels against the serial
// reference implementations, plus the per-index averaging loop in both
// modes.  Build with -DCMAKE_BUILD_TYPE=Release for meaningful numbers.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qel/ergodic.hpp"

using namespace qel;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

CMatrix random_matrix(int r, int c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = Complex(u(rng), u(rng));
  return m;
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e30;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clk::now();
    f();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp not enabled; both columns run the serial path\n");
#endif
  std::mt19937_64 rng(7);

  std::printf("\n%-28s %12s %12s %8s\n", "kernel", "serial [s]", "parallel [s]", "check");
  for (int n : {128, 256, 384}) {
    const CMatrix a = random_matrix(n, n, rng);
    const CMatrix b = random_matrix(n, n, rng);
    CMatrix rs, rp;
    const double ts = time_best_of(3, [&] { rs = ref::matmul(a, b); });
    const double tp = time_best_of(3, [&] { rp = matmul(a, b); });
    std::printf("matmul %4dx%-4d              %12.4f %12.4f %8.1e\n", n, n, ts, tp,
                max_abs_diff(rs, rp));
  }
  for (int n : {48, 64}) {
    const CMatrix a = random_matrix(n, n, rng);
    const CMatrix b = random_matrix(16, 16, rng);
    CMatrix rs, rp;
    const double ts = time_best_of(3, [&] { rs = ref::kron(a, b); });
    const double tp = time_best_of(3, [&] { rp = kron(a, b); });
    std::printf("kron   %4dx%-4d (x) 16x16    %12.4f %12.4f %8.1e\n", n, n, ts, tp,
                max_abs_diff(rs, rp));
  }

  // Averaging experiment: per-index transfer operators sequential vs
  // spread over threads.
  auto z6 = build_function_algebra(CayleyTable::cyclic(6));
  Action tr = translation_action(z6);
  GnsSpace g = gns(z6->algebra(), z6->haar());
  auto thetas = state_spanning_family(z6->algebra());
  Functional lazy{z6->algebra(), {0.5, 0.5, 0.0, 0.0, 0.0, 0.0}};
  auto net = cesaro_net(lazy, 4000, *z6);

  ExperimentOptions serial_opts, par_opts;
  serial_opts.parallel = false;
  par_opts.parallel = true;
  ErgodicReport rs, rp;
  const double ts = time_best_of(2, [&] { rs = ergodic_average_experiment(net, tr, g, thetas, serial_opts); });
  const double tp = time_best_of(2, [&] { rp = ergodic_average_experiment(net, tr, g, thetas, par_opts); });
  double diff = 0.0;
  for (std::size_t i = 0; i < rs.rows.size(); ++i)
    diff = std::max({diff, std::abs(rs.rows[i].dev - rp.rows[i].dev),
                     std::abs(rs.rows[i].amenability_defect - rp.rows[i].amenability_defect)});
  std::printf("experiment n_max=4000         %12.4f %12.4f %8.1e\n", ts, tp, diff);
  return 0;
}
