#include "mallows/perm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mallows {

Permutation::Permutation(std::vector<PermValue> one_based_values)
    : values_(std::move(one_based_values)) {
  const std::size_t n = values_.size();
  if (n == 0) throw std::invalid_argument("permutation must have size >= 1");
  std::vector<bool> seen(n, false);
  for (PermValue v : values_) {
    if (v < 1 || static_cast<std::size_t>(v) > n || seen[v - 1])
      throw std::invalid_argument("values are not a bijection of {1,...,n}");
    seen[v - 1] = true;
  }
}

Permutation Permutation::identity(PermValue n) {
  std::vector<PermValue> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), PermValue{1});
  return unchecked(std::move(v));
}

Permutation Permutation::parse(const std::string& text) {
  std::vector<PermValue> v;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t pos = 0;
    const long parsed = std::stol(tok, &pos);
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    if (pos != tok.size()) throw std::invalid_argument("bad permutation token: " + tok);
    v.push_back(static_cast<PermValue>(parsed));
  }
  return Permutation(std::move(v));
}

std::string Permutation::str() const {
  std::string out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values_[i]);
  }
  return out;
}

namespace {

// Merge step counting cross pairs (left value > right value).
std::int64_t merge_count(std::vector<PermValue>& a, std::vector<PermValue>& buf,
                         std::size_t lo, std::size_t mid, std::size_t hi) {
  std::int64_t inversions = 0;
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (a[i] <= a[j]) {
      buf[k++] = a[i++];
    } else {
      inversions += static_cast<std::int64_t>(mid - i);
      buf[k++] = a[j++];
    }
  }
  while (i < mid) buf[k++] = a[i++];
  while (j < hi) buf[k++] = a[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, a.begin() + lo);
  return inversions;
}

std::int64_t sort_count(std::vector<PermValue>& a, std::vector<PermValue>& buf,
                        std::size_t lo, std::size_t hi) {
  if (hi - lo <= 1) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  return sort_count(a, buf, lo, mid) + sort_count(a, buf, mid, hi) +
         merge_count(a, buf, lo, mid, hi);
}

}  // namespace

std::int64_t inversion_count(const Permutation& p) {
  std::vector<PermValue> a = p.values();
  std::vector<PermValue> buf(a.size());
  return sort_count(a, buf, 0, a.size());
}

Permutation inverse(const Permutation& p) {
  const PermValue n = p.size();
  std::vector<PermValue> inv(static_cast<std::size_t>(n));
  for (PermValue i = 1; i <= n; ++i) inv[p(i) - 1] = i;
  return Permutation::unchecked(std::move(inv));
}

Permutation reverse(const Permutation& p) {
  std::vector<PermValue> rev(p.values().rbegin(), p.values().rend());
  return Permutation::unchecked(std::move(rev));
}

Permutation induced(const Permutation& p, std::span<const PermValue> indices) {
  if (indices.empty()) throw std::invalid_argument("induced: empty index list");
  const PermValue n = p.size();
  std::vector<std::int64_t> selected;
  selected.reserve(indices.size());
  PermValue prev = 0;
  for (PermValue idx : indices) {
    if (idx <= prev || idx > n)
      throw std::invalid_argument("induced: indices must be strictly increasing within [1,n]");
    selected.push_back(p(idx));
    prev = idx;
  }
  return rank_permutation(selected);
}

MallowsLaw MallowsLaw::create(PermValue n, double q) {
  if (n < 1) throw std::invalid_argument("MallowsLaw: n must be >= 1");
  if (!(q > 0.0)) throw std::invalid_argument("MallowsLaw: q must be > 0");
  // Z_{n,q} = prod_{i=1}^{n} (1 + q + ... + q^{i-1}).
  double z = 1.0;
  for (PermValue i = 1; i <= n; ++i) {
    double term = 0.0, pow = 1.0;
    for (PermValue j = 0; j < i; ++j) {
      term += pow;
      pow *= q;
    }
    z *= term;
  }
  return MallowsLaw{n, q, z};
}

std::map<Permutation, double> enumerate_pmf(PermValue n, double q) {
  if (n < 1) throw std::invalid_argument("enumerate_pmf: n must be >= 1");
  if (n > 8) throw std::invalid_argument("enumerate_pmf: n > 8 refused (factorial blow-up)");
  if (!(q > 0.0)) throw std::invalid_argument("enumerate_pmf: q must be > 0");

  std::vector<PermValue> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), PermValue{1});
  std::map<Permutation, double> pmf;
  double z = 0.0;
  do {
    Permutation p = Permutation::unchecked(v);
    const double w = std::pow(q, static_cast<double>(inversion_count(p)));
    z += w;
    pmf.emplace(std::move(p), w);
  } while (std::next_permutation(v.begin(), v.end()));
  for (auto& [perm, prob] : pmf) prob /= z;
  return pmf;
}

std::uint64_t lexicographic_rank(const Permutation& p) {
  const PermValue n = p.size();
  std::uint64_t rank = 0;
  std::uint64_t fact = 1;
  for (PermValue i = 2; i <= n; ++i) fact *= static_cast<std::uint64_t>(i);
  for (PermValue i = 1; i <= n; ++i) {
    fact /= static_cast<std::uint64_t>(n - i + 1);
    std::uint64_t smaller_remaining = 0;
    for (PermValue j = i + 1; j <= n; ++j)
      if (p(j) < p(i)) ++smaller_remaining;
    rank += smaller_remaining * fact;
  }
  return rank;
}

Permutation rank_permutation(std::span<const std::int64_t> values) {
  const std::size_t k = values.size();
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return values[a] < values[b];
  });
  std::vector<PermValue> ranks(k);
  for (std::size_t r = 0; r < k; ++r)
    ranks[order[r]] = static_cast<PermValue>(r + 1);
  return Permutation::unchecked(std::move(ranks));
}

}  // namespace mallows
