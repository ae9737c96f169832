// Timing harness comparing the OpenMP kernels against the serial reference
// loops. Sizes run past desk scale so the parallel speedup is visible; the
// two variants are also cross-checked on every shape.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mqpt/kernels.hpp"
#include "mqpt/rng.hpp"

using mqpt::kernels::cplx;

namespace {

std::vector<cplx> random_block(std::size_t n, std::uint64_t seed) {
  mqpt::Xorshift64Star rng(seed);
  std::vector<cplx> v(n);
  for (auto& c : v) c = cplx(rng.next_gaussian(), rng.next_gaussian());
  return v;
}

template <typename F>
double time_ms(F&& f, int reps) {
  // one warmup, then best of reps
  f();
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
                        .count());
  }
  return best;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

void bench_matmul(std::size_t n, int reps) {
  const auto a = random_block(n * n, 1);
  const auto b = random_block(n * n, 2);
  std::vector<cplx> out_par(n * n), out_ser(n * n);
  const double tp = time_ms(
      [&] { mqpt::kernels::matmul(a.data(), b.data(), out_par.data(), n, n, n); }, reps);
  const double ts = time_ms(
      [&] { mqpt::kernels::serial::matmul(a.data(), b.data(), out_ser.data(), n, n, n); }, reps);
  std::printf("matmul      n=%4zu        serial %8.3f ms   omp %8.3f ms   speedup %5.2fx   maxdiff %.1e\n",
              n, ts, tp, ts / tp, max_diff(out_par, out_ser));
}

void bench_build_mmap(std::size_t dS, std::size_t dE, int reps) {
  const std::size_t dj = dS * dE;
  const std::size_t d3 = dS * dS * dS;
  const auto u = random_block(dj * dj, 3);
  const auto rho = random_block(dj * dj, 4);
  std::vector<cplx> out_par(d3 * d3), out_ser(d3 * d3);
  const double tp = time_ms(
      [&] { mqpt::kernels::build_mmap(u.data(), rho.data(), dS, dE, out_par.data()); }, reps);
  const double ts = time_ms(
      [&] { mqpt::kernels::serial::build_mmap(u.data(), rho.data(), dS, dE, out_ser.data()); },
      reps);
  std::printf("build_mmap  dS=%zu dE=%-3zu   serial %8.3f ms   omp %8.3f ms   speedup %5.2fx   maxdiff %.1e\n",
              dS, dE, ts, tp, ts / tp, max_diff(out_par, out_ser));
}

void bench_contract(std::size_t dS, int reps) {
  const std::size_t d2 = dS * dS;
  const std::size_t d3 = d2 * dS;
  const auto t = random_block(d3 * d3, 5);
  const auto a = random_block(d2 * d2, 6);
  std::vector<cplx> q_par(dS * dS), q_ser(dS * dS);
  const int inner = 200;  // output is tiny; repeat to get measurable times
  const double tp = time_ms(
      [&] {
        for (int i = 0; i < inner; ++i)
          mqpt::kernels::contract_super(t.data(), a.data(), q_par.data(), dS);
      },
      reps);
  const double ts = time_ms(
      [&] {
        for (int i = 0; i < inner; ++i)
          mqpt::kernels::serial::contract_super(t.data(), a.data(), q_ser.data(), dS);
      },
      reps);
  std::printf("contract    dS=%-4zu       serial %8.3f ms   omp %8.3f ms   speedup %5.2fx   maxdiff %.1e\n",
              dS, ts, tp, ts / tp, max_diff(q_par, q_ser));
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled (serial build)\n");
#endif

  for (std::size_t n : {64u, 128u, 256u, 512u}) bench_matmul(n, 5);
  bench_build_mmap(2, 2, 5);
  bench_build_mmap(2, 16, 5);
  bench_build_mmap(4, 6, 5);
  bench_build_mmap(4, 16, 3);
  bench_build_mmap(6, 12, 3);
  for (std::size_t d : {2u, 4u, 6u, 8u}) bench_contract(d, 5);
  return 0;
}
