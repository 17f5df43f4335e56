#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mallows {

/// Order-statistic set over {1, 2, ...} tracking which slots are taken.
/// take_kth_free(k) returns the k-th smallest untaken slot and marks it, in
/// O(log capacity); the range grows lazily by doubling. reset() clears only
/// the touched slots, so one instance can serve many short runs.
class FreeSlotSelector {
 public:
  explicit FreeSlotSelector(std::int64_t initial_capacity = 1024)
      : capacity_(next_pow2(initial_capacity)), tree_(capacity_ + 1, 0) {}

  std::int64_t take_kth_free(std::int64_t k) {
    if (k < 1) throw std::invalid_argument("take_kth_free: k must be >= 1");
    // The k-th free slot is at most k + #taken.
    const std::int64_t needed = k + static_cast<std::int64_t>(taken_.size());
    if (needed > capacity_) grow(needed);

    // Descend the implicit tree: tree_[node] counts taken slots in its block,
    // so the number of FREE slots in [1, pos] is pos - taken_prefix(pos).
    std::int64_t pos = 0;
    std::int64_t taken_before = 0;
    for (std::int64_t step = capacity_; step > 0; step >>= 1) {
      const std::int64_t next = pos + step;
      if (next <= capacity_ &&
          next - (taken_before + tree_[next]) < k) {
        pos = next;
        taken_before += tree_[next];
      }
    }
    const std::int64_t slot = pos + 1;
    mark_taken(slot);
    return slot;
  }

  void reset() {
    for (std::int64_t slot : taken_) {
      for (std::int64_t i = slot; i <= capacity_; i += i & -i) tree_[i] -= 1;
    }
    taken_.clear();
  }

  std::int64_t capacity() const { return capacity_; }
  std::int64_t taken_count() const { return static_cast<std::int64_t>(taken_.size()); }

 private:
  static std::int64_t next_pow2(std::int64_t v) {
    std::int64_t p = 1;
    while (p < v) p <<= 1;
    return p;
  }

  void mark_taken(std::int64_t slot) {
    taken_.push_back(slot);
    for (std::int64_t i = slot; i <= capacity_; i += i & -i) tree_[i] += 1;
  }

  void grow(std::int64_t needed) {
    capacity_ = next_pow2(needed);
    tree_.assign(static_cast<std::size_t>(capacity_) + 1, 0);
    std::vector<std::int64_t> prior;
    prior.swap(taken_);
    for (std::int64_t slot : prior) mark_taken(slot);
  }

  std::int64_t capacity_;
  std::vector<std::int32_t> tree_;
  std::vector<std::int64_t> taken_;
};

}  // namespace mallows
