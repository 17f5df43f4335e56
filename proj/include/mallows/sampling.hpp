#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mallows/perm.hpp"
#include "mallows/rng.hpp"

namespace mallows {

enum class TraceKind {
  Truncated,  // rank draws of the iterated-insertion construction, 1 <= d_i <= i
  Geometric,  // unbounded geometric draws of the infinite insertion process
};

/// The random draws that built a permutation, kept for identity checks.
struct InsertionTrace {
  std::vector<std::int64_t> draws;
  TraceKind kind;
};

struct ProcessSample {
  Permutation perm;
  InsertionTrace trace;
};

/// Geometric on {1,2,...} with success probability 1-q: P(k) = (1-q) q^{k-1}.
/// Inverse CDF, one uniform per draw.
std::int64_t geom(double q, RngStream& rng);

/// Truncated geometric on [1,i] with pmf proportional to q^{j-1}. q = 1 is
/// uniform; q > 1 is sampled by flipping a 1/q draw, so no large powers are
/// formed. i = 1 returns 1 without consuming randomness.
std::int64_t truncated_geom(double q, std::int64_t i, RngStream& rng);

/// Iterated-insertion construction: element i enters at rank p_i(i), a
/// truncated geometric on [1,i], displacing the values above it. The result
/// is distributed as Mallows(1/q) on S_n; the trace holds the p_i(i).
ProcessSample qmallows_process(PermValue n, double q, RngStream& rng);

/// Rebuilds the permutation determined by a Truncated trace. O(n log n) via
/// reverse order-statistic fill; equals the step-by-step insertion rule.
Permutation permutation_from_trace(const InsertionTrace& trace);

/// Infinite insertion process, first n values: step i places the Z_i-th
/// smallest unused natural number, Z_i geometric. Values may exceed n.
std::vector<std::int64_t> insertion_values(std::span<const std::int64_t> draws);

/// Prefix of the infinite insertion process rank-relabeled into S_n;
/// distributed as Mallows(q) for 0 < q < 1. The trace holds the Z_i.
ProcessSample insertion_process_prefix(PermValue n, double q, RngStream& rng);

/// Exact Mallows(q) sampler for any q > 0: insertion process for q < 1,
/// Fisher-Yates for q = 1, reversal of a Mallows(1/q) sample for q > 1.
Permutation sample_mallows(PermValue n, double q, RngStream& rng);

/// Mallows(q) via the iterated-insertion route: reversal of a
/// qmallows_process(q) draw. Kept alongside sample_mallows so the two
/// constructions can be checked against each other distributionally.
Permutation sample_mallows_via_qprocess(PermValue n, double q, RngStream& rng);

}  // namespace mallows
