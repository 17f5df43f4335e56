#pragma once

#include <cstdint>
#include <exception>
#include <stdexcept>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mallows/rng.hpp"

namespace mallows {

/// Stream-index bases keeping the harness's stages on disjoint substreams.
inline constexpr std::uint64_t kReplicaStreamBase = 0;
inline constexpr std::uint64_t kBlockStreamBase = std::uint64_t{1} << 32;
inline constexpr std::uint64_t kAuxStreamBase = std::uint64_t{1} << 33;

/// Serial reference path: replica r draws from stream (seed, base + r) and
/// writes slot r.
template <class T, class Fn>
std::vector<T> run_replicas_serial(std::int64_t count, std::uint64_t seed,
                                   std::uint64_t stream_base, Fn&& fn) {
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t r = 0; r < count; ++r) {
    RngStream rng(seed, stream_base + static_cast<std::uint64_t>(r));
    out.push_back(fn(r, rng));
  }
  return out;
}

/// Replica-parallel map. Each replica owns its own stream and slot, and the
/// slots are consumed in index order afterwards, so the result is identical
/// for every worker count, including the serial reference path.
template <class T, class Fn>
std::vector<T> run_replicas(std::int64_t count, std::uint64_t seed,
                            std::uint64_t stream_base, int workers, Fn&& fn) {
  if (count < 0) throw std::invalid_argument("run_replicas: negative count");
  if (workers <= 1) return run_replicas_serial<T>(count, seed, stream_base, fn);

  std::vector<T> out(static_cast<std::size_t>(count));
  std::exception_ptr first_error = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
  for (std::int64_t r = 0; r < count; ++r) {
    try {
      RngStream rng(seed, stream_base + static_cast<std::uint64_t>(r));
      out[static_cast<std::size_t>(r)] = fn(r, rng);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(mallows_run_replicas_error)
#endif
      {
        if (!first_error) first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace mallows
