#include "mallows/subsequence.hpp"

#include <algorithm>
#include <stdexcept>

namespace mallows {

namespace {

// Patience piles on a sequence of distinct values; strictly increasing chains,
// so each new value replaces the first pile top >= it.
template <class T>
std::int64_t patience_length(const std::vector<T>& seq) {
  std::vector<T> tops;
  tops.reserve(seq.size());
  for (const T& v : seq) {
    auto it = std::lower_bound(tops.begin(), tops.end(), v);
    if (it == tops.end())
      tops.push_back(v);
    else
      *it = v;
  }
  return static_cast<std::int64_t>(tops.size());
}

void require_same_size(const Permutation& p, const Permutation& t) {
  if (p.size() != t.size())
    throw std::invalid_argument("lcs: permutations must have the same size");
}

// The y-sequence of the reduction points ordered by x. Position i of p holds
// value k = p(i), whose point is (p^-1(k), t^-1(k)) = (i, t^-1(p(i))).
std::vector<PermValue> reduction_y_by_x(const Permutation& p, const Permutation& t) {
  const Permutation t_inv = inverse(t);
  std::vector<PermValue> ys(static_cast<std::size_t>(p.size()));
  for (std::size_t i = 0; i < ys.size(); ++i)
    ys[i] = t_inv.at0(static_cast<std::size_t>(p.at0(i) - 1));
  return ys;
}

}  // namespace

std::int64_t lis(const Permutation& p) {
  return patience_length(p.values());
}

std::int64_t lis_points(const PointSet& ps) {
  const std::size_t n = ps.points.size();
  if (n == 0) return 0;

  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return ps.points[a].x < ps.points[b].x;
  });

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = ps.points[order[i]].y;

  for (std::size_t i = 1; i < n; ++i)
    if (!(ps.points[order[i - 1]].x < ps.points[order[i]].x))
      throw std::invalid_argument("lis_points: x coordinates must be distinct");
  std::vector<double> ysorted(ys);
  std::sort(ysorted.begin(), ysorted.end());
  for (std::size_t i = 1; i < n; ++i)
    if (!(ysorted[i - 1] < ysorted[i]))
      throw std::invalid_argument("lis_points: y coordinates must be distinct");

  return patience_length(ys);
}

std::int64_t lcs(const Permutation& p, const Permutation& t) {
  require_same_size(p, t);
  const Permutation p_inv = inverse(p);
  const Permutation t_inv = inverse(t);
  const std::size_t n = static_cast<std::size_t>(p.size());
  PointSet ps;
  ps.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    ps.points.push_back(Point{static_cast<double>(p_inv.at0(k)),
                              static_cast<double>(t_inv.at0(k))});
  return lis_points(ps);
}

std::int64_t lcs_dp_oracle(const Permutation& p, const Permutation& t) {
  require_same_size(p, t);
  const std::size_t n = static_cast<std::size_t>(p.size());
  if (n > 4096) throw std::invalid_argument("lcs_dp_oracle: n > 4096 refused");
  std::vector<std::int32_t> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (p.at0(i - 1) == t.at0(j - 1))
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

std::vector<PermValue> lcs_witness(const Permutation& p, const Permutation& t) {
  require_same_size(p, t);
  const std::vector<PermValue> ys = reduction_y_by_x(p, t);
  const std::size_t n = ys.size();

  // Patience with predecessor links: element on pile k points at the top of
  // pile k-1 at its insertion time.
  std::vector<PermValue> tops;
  std::vector<std::uint32_t> top_index;
  std::vector<std::int64_t> pred(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::lower_bound(tops.begin(), tops.end(), ys[i]);
    const std::size_t pile = static_cast<std::size_t>(it - tops.begin());
    if (pile > 0) pred[i] = top_index[pile - 1];
    if (it == tops.end()) {
      tops.push_back(ys[i]);
      top_index.push_back(static_cast<std::uint32_t>(i));
    } else {
      *it = ys[i];
      top_index[pile] = static_cast<std::uint32_t>(i);
    }
  }

  std::vector<PermValue> values(tops.size());
  std::int64_t at = top_index.empty() ? -1 : top_index.back();
  for (std::size_t k = tops.size(); k-- > 0;) {
    // x-order position `at` in p carries common value p(at).
    values[k] = p.at0(static_cast<std::size_t>(at));
    at = pred[static_cast<std::size_t>(at)];
  }
  return values;
}

}  // namespace mallows
