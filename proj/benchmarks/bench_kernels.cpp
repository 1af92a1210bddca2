// Serial vs OpenMP timings for the lattice-inversion kernel and the batch
// test harness. Build target: bench_kernels.

#include <chrono>
#include <cstdio>

#include "cdrum/lp_test.hpp"
#include "cdrum/mobius.hpp"
#include "cdrum/simulate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cdrum;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

void bench_mobius(const Universe& u, int periods, int reps) {
  auto draw = random_mixture<double>(u, periods, 6, 99);
  volatile double sink = 0.0;
  double serial = time_best_of(reps, [&] {
    auto q = mobius_inverse(draw.rule, Exec::Serial);
    sink = sink + to_double(q.value.begin()->second);
  });
  double parallel = time_best_of(reps, [&] {
    auto q = mobius_inverse(draw.rule, Exec::Parallel);
    sink = sink + to_double(q.value.begin()->second);
  });
  std::printf("mobius  n=%d T=%d   serial %8.4fs   parallel %8.4fs   speedup %.2fx\n", u.size(),
              periods, serial, parallel, serial / parallel);
}

void bench_oracle(int trials) {
  Universe u({"a", "b", "c"});
#ifdef _OPENMP
  int max_threads = omp_get_max_threads();
#else
  int max_threads = 1;
#endif
#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  auto start = std::chrono::steady_clock::now();
  oracle_agreement(u, trials, 7);
  double serial = seconds_since(start);
#ifdef _OPENMP
  omp_set_num_threads(max_threads);
#endif
  start = std::chrono::steady_clock::now();
  oracle_agreement(u, trials, 7);
  double parallel = seconds_since(start);
  std::printf("oracle  trials=%d  1 thread %8.4fs   %d threads %8.4fs   speedup %.2fx\n", trials,
              serial, max_threads, parallel, serial / parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("openmp disabled; parallel paths run serially\n");
#endif
  bench_mobius(Universe({"a", "b", "c", "d", "e"}), 2, 3);
  bench_mobius(Universe({"a", "b", "c", "d", "e", "f"}), 2, 3);
  bench_mobius(Universe({"a", "b", "c"}), 3, 3);
  bench_oracle(40);
  return 0;
}
