#pragma once

#include <cstdint>
#include <vector>

#include "mallows/perm.hpp"

namespace mallows {

struct Point {
  double x;
  double y;
};

/// A finite set of planar points; permutation-derived sets have all x distinct
/// and all y distinct.
struct PointSet {
  std::vector<Point> points;
};

/// Length of the longest strictly increasing subsequence. Patience sorting
/// with binary search over pile tops, O(n log n).
std::int64_t lis(const Permutation& p);

/// Longest chain under coordinatewise strict order (no ordering on the point
/// indices themselves): sort by x, then patience on y. Throws on duplicate x
/// or duplicate y.
std::int64_t lis_points(const PointSet& ps);

/// Length of the longest common subsequence of two same-size permutations,
/// computed as the point-set LIS of {(p^-1(k), t^-1(k)) : k in [n]}.
std::int64_t lcs(const Permutation& p, const Permutation& t);

/// Textbook quadratic LCS table; the independent check for lcs. n <= 4096.
std::int64_t lcs_dp_oracle(const Permutation& p, const Permutation& t);

/// One longest common subsequence (its values, in order), via predecessor
/// links through the patience piles.
std::vector<PermValue> lcs_witness(const Permutation& p, const Permutation& t);

}  // namespace mallows
