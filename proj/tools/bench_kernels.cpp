// Times the serial reference implementations against the OpenMP kernels:
// energy-expansion coefficients over the catalog and the candidate scan.
#include <chrono>
#include <cstdio>

#include "rkstab/catalog.hpp"
#include "rkstab/expansion.hpp"
#include "rkstab/search.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace rkstab;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double bench_expansion(Exec exec, int reps) {
  auto names = catalog_names();
  auto t0 = Clock::now();
  Rational checksum;
  for (int r = 0; r < reps; ++r)
    for (const auto& name : names) {
      auto exp = expansion_coefficients(*find_catalog_method(name), 8, exec);
      checksum += exp.terms.back().coeff;
    }
  double dt = seconds_since(t0);
  if (checksum.is_zero()) std::printf("(unexpected zero checksum)\n");
  return dt;
}

double bench_scan(Exec exec, long iterations, long* successes) {
  SearchSpec spec;
  spec.nodes = {Rational(0), Rational(1), Rational(0), Rational(1)};
  spec.target_order = 2;
  spec.seed = 99;
  spec.max_iterations = iterations;
  auto t0 = Clock::now();
  auto stats = scan_candidates(spec, exec);
  *successes = stats.successes;
  return seconds_since(t0);
}

}  // namespace

int main(int argc, char** argv) {
  int reps = argc > 1 ? std::atoi(argv[1]) : 20;
  long iters = argc > 2 ? std::atol(argv[2]) : 20000;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (no OpenMP)\n");
#endif

  double es = bench_expansion(Exec::serial, reps);
  double ep = bench_expansion(Exec::parallel, reps);
  std::printf("expansion n_tot=8 x catalog x %d     serial %8.3f s   parallel %8.3f s   speedup %.2fx\n",
              reps, es, ep, es / ep);

  long ss = 0, sp = 0;
  double ts = bench_scan(Exec::serial, iters, &ss);
  double tp = bench_scan(Exec::parallel, iters, &sp);
  std::printf("candidate scan %ld iterations        serial %8.3f s   parallel %8.3f s   speedup %.2fx\n",
              iters, ts, tp, ts / tp);
  std::printf("scan successes: serial %ld, parallel %ld%s\n", ss, sp,
              ss == sp ? "" : "  MISMATCH");
  return ss == sp ? 0 : 1;
}
