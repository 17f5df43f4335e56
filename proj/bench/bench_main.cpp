// Throughput comparison between the serial reference path and the
// OpenMP-parallel replica runner, over the three hot kernels: sampling,
// LCS evaluation, and renewal-block generation.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mallows/parallel.hpp"
#include "mallows/regeneration.hpp"
#include "mallows/rng.hpp"
#include "mallows/sampling.hpp"
#include "mallows/subsequence.hpp"

using namespace mallows;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class Fn>
void compare(const std::string& name, std::int64_t replicas, Fn&& fn, int workers) {
  const auto t_serial = std::chrono::steady_clock::now();
  const auto serial = run_replicas_serial<double>(replicas, 1, 0, fn);
  const double s_serial = seconds_since(t_serial);

  const auto t_parallel = std::chrono::steady_clock::now();
  const auto parallel = run_replicas<double>(replicas, 1, 0, workers, fn);
  const double s_parallel = seconds_since(t_parallel);

  const bool identical = serial == parallel;
  std::printf("%-28s serial %8.3fs   omp(%d) %8.3fs   speedup %5.2fx   identical %s\n",
              name.c_str(), s_serial, workers, s_parallel, s_serial / s_parallel,
              identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  int workers = 0;
#ifdef _OPENMP
  workers = omp_get_max_threads();
#endif
  if (argc > 1) workers = std::atoi(argv[1]);
  if (workers < 2) workers = 2;
  std::printf("replica kernels, serial reference vs OpenMP (%d workers)\n\n", workers);

  compare("sample n=2e5 q=0.999", 32, [](std::int64_t, RngStream& rng) {
    return static_cast<double>(sample_mallows(200'000, 0.999, rng)(1));
  }, workers);

  compare("lcs pair n=5e4 q=0.99", 32, [](std::int64_t, RngStream& rng) {
    const Permutation pi = sample_mallows(50'000, 0.99, rng);
    const Permutation tau = sample_mallows(50'000, 0.99, rng);
    return static_cast<double>(lcs(pi, tau));
  }, workers);

  compare("renewal 2e4 blocks q=0.5", 16, [](std::int64_t, RngStream& rng) {
    BlockGenerator gen(0.5, 0.5, rng);
    std::int64_t x = 0, y = 0;
    double sum = 0.0;
    for (int b = 0; b < 20'000; ++b) {
      gen.next_block_xy(x, y);
      sum += static_cast<double>(y);
    }
    return sum;
  }, workers);

  compare("coupled clt n=4000 q=0.3", 64, [](std::int64_t, RngStream& rng) {
    const CoupledSample s = coupled_mallows_pair(4000, 0.3, 0.3, rng);
    return static_cast<double>(lcs(s.pi, s.tau));
  }, workers);

  return 0;
}
