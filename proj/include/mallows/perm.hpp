#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mallows {

using PermValue = std::int32_t;

/// A permutation of {1,...,n} in one-line notation. Immutable after
/// construction; storage is 0-based internally, all I/O is 1-based.
class Permutation {
 public:
  /// Validates that `one_based_values` is a bijection of {1,...,n}.
  explicit Permutation(std::vector<PermValue> one_based_values);

  static Permutation identity(PermValue n);

  /// Parses the text format "3,4,1,2,5".
  static Permutation parse(const std::string& text);

  PermValue size() const { return static_cast<PermValue>(values_.size()); }

  /// Value at 1-based position i.
  PermValue operator()(PermValue i) const { return values_[i - 1]; }

  /// Value at 0-based position i (hot loops).
  PermValue at0(std::size_t i) const { return values_[i]; }

  const std::vector<PermValue>& values() const { return values_; }

  std::string str() const;

  bool operator==(const Permutation&) const = default;
  bool operator<(const Permutation& other) const {
    return values_ < other.values_;
  }

  /// Constructs without the bijection check; caller guarantees validity.
  static Permutation unchecked(std::vector<PermValue> one_based_values) {
    return Permutation(std::move(one_based_values), Unchecked{});
  }

 private:
  struct Unchecked {};
  Permutation(std::vector<PermValue> v, Unchecked) : values_(std::move(v)) {}

  std::vector<PermValue> values_;
};

/// Number of pairs i<j with p(i)>p(j); merge-sort counter, O(n log n).
std::int64_t inversion_count(const Permutation& p);

/// The permutation s with s(p(i)) = i.
Permutation inverse(const Permutation& p);

/// Position reversal: result(i) = p(n+1-i).
Permutation reverse(const Permutation& p);

/// Rank-relabeled restriction of p to the given strictly increasing 1-based
/// indices: result(i) = j when p(indices[i]) is the j-th smallest among the
/// selected values.
Permutation induced(const Permutation& p, std::span<const PermValue> indices);

/// The Mallows measure on S_n: P(p) = q^inv(p) / normalizer.
struct MallowsLaw {
  PermValue n;
  double q;
  double normalizer;

  static MallowsLaw create(PermValue n, double q);
};

/// Exact law over all n! permutations; the oracle for sampler tests. n <= 8.
std::map<Permutation, double> enumerate_pmf(PermValue n, double q);

/// Index of p in lexicographic order of S_n, in [0, n!). Used to histogram
/// samples against enumerate_pmf.
std::uint64_t lexicographic_rank(const Permutation& p);

/// 1-based ranks of a sequence of distinct values, as a permutation.
Permutation rank_permutation(std::span<const std::int64_t> values);

}  // namespace mallows
