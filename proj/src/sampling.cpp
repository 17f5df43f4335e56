#include "mallows/sampling.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mallows/fenwick.hpp"

namespace mallows {

std::int64_t geom(double q, RngStream& rng) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("geom: q must be in (0,1)");
  const double u = rng.next_unit();
  return 1 + static_cast<std::int64_t>(std::floor(std::log(u) / std::log(q)));
}

std::int64_t truncated_geom(double q, std::int64_t i, RngStream& rng) {
  if (i < 1) throw std::invalid_argument("truncated_geom: i must be >= 1");
  if (!(q > 0.0)) throw std::invalid_argument("truncated_geom: q must be > 0");
  if (i == 1) return 1;
  if (q == 1.0) return 1 + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(i)));
  if (q > 1.0) return i + 1 - truncated_geom(1.0 / q, i, rng);

  // Inverse CDF on the normalized finite tail: j is the smallest integer with
  // 1 - q^j >= u (1 - q^i).
  const double u = rng.next_unit();
  const double mass = -std::expm1(static_cast<double>(i) * std::log(q));  // 1 - q^i
  const double j = std::ceil(std::log1p(-u * mass) / std::log(q));
  const auto result = static_cast<std::int64_t>(j);
  if (result < 1) return 1;
  if (result > i) return i;
  return result;
}

ProcessSample qmallows_process(PermValue n, double q, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("qmallows_process: n must be >= 1");
  if (!(q > 0.0)) throw std::invalid_argument("qmallows_process: q must be > 0");
  InsertionTrace trace{{}, TraceKind::Truncated};
  trace.draws.reserve(static_cast<std::size_t>(n));
  for (PermValue i = 1; i <= n; ++i) trace.draws.push_back(truncated_geom(q, i, rng));
  return ProcessSample{permutation_from_trace(trace), std::move(trace)};
}

Permutation permutation_from_trace(const InsertionTrace& trace) {
  if (trace.kind != TraceKind::Truncated)
    throw std::invalid_argument("permutation_from_trace: trace must be Truncated");
  const auto n = static_cast<std::int64_t>(trace.draws.size());
  if (n < 1) throw std::invalid_argument("permutation_from_trace: empty trace");
  for (std::int64_t i = 1; i <= n; ++i) {
    const std::int64_t d = trace.draws[static_cast<std::size_t>(i - 1)];
    if (d < 1 || d > i)
      throw std::invalid_argument("permutation_from_trace: draw out of [1,i]");
  }
  // Element i enters at rank d_i and is pushed up once per later insertion at
  // or below it, so filling positions n..1 into the d_i-th still-free slot
  // reproduces the step-by-step rule in O(n log n).
  FreeSlotSelector slots(n);
  std::vector<PermValue> values(static_cast<std::size_t>(n));
  for (std::int64_t i = n; i >= 1; --i) {
    const std::int64_t slot = slots.take_kth_free(trace.draws[static_cast<std::size_t>(i - 1)]);
    values[static_cast<std::size_t>(i - 1)] = static_cast<PermValue>(slot);
  }
  return Permutation::unchecked(std::move(values));
}

std::vector<std::int64_t> insertion_values(std::span<const std::int64_t> draws) {
  FreeSlotSelector slots(static_cast<std::int64_t>(draws.size()) + 1);
  std::vector<std::int64_t> values;
  values.reserve(draws.size());
  for (std::int64_t z : draws) values.push_back(slots.take_kth_free(z));
  return values;
}

ProcessSample insertion_process_prefix(PermValue n, double q, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("insertion_process_prefix: n must be >= 1");
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("insertion_process_prefix: q must be in (0,1)");
  InsertionTrace trace{{}, TraceKind::Geometric};
  trace.draws.reserve(static_cast<std::size_t>(n));
  for (PermValue i = 0; i < n; ++i) trace.draws.push_back(geom(q, rng));
  const std::vector<std::int64_t> values = insertion_values(trace.draws);
  return ProcessSample{rank_permutation(values), std::move(trace)};
}

namespace {

Permutation fisher_yates(PermValue n, RngStream& rng) {
  std::vector<PermValue> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), PermValue{1});
  for (std::size_t i = v.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i + 1));
    std::swap(v[i], v[j]);
  }
  return Permutation::unchecked(std::move(v));
}

}  // namespace

Permutation sample_mallows(PermValue n, double q, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_mallows: n must be >= 1");
  if (!(q > 0.0)) throw std::invalid_argument("sample_mallows: q must be > 0");
  if (q < 1.0) return insertion_process_prefix(n, q, rng).perm;
  if (q == 1.0) return fisher_yates(n, rng);
  return reverse(insertion_process_prefix(n, 1.0 / q, rng).perm);
}

Permutation sample_mallows_via_qprocess(PermValue n, double q, RngStream& rng) {
  // The iterated insertion with parameter q is Mallows(1/q); reversal flips it
  // back to Mallows(q).
  return reverse(qmallows_process(n, q, rng).perm);
}

}  // namespace mallows
