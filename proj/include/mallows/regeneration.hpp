#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mallows/fenwick.hpp"
#include "mallows/perm.hpp"
#include "mallows/rng.hpp"

namespace mallows {

/// State of the pair of max-minus-one chains driven by geometric draws:
/// m tracks how far the first insertion process's prefix is from being
/// complete, m_prime the second's.
struct ProductChainState {
  std::int64_t m = 0;
  std::int64_t m_prime = 0;

  bool operator==(const ProductChainState&) const = default;
  bool is_origin() const { return m == 0 && m_prime == 0; }
};

/// One step: each coordinate moves to max(current, draw) - 1.
inline ProductChainState product_chain_step(ProductChainState s, std::int64_t z,
                                            std::int64_t z_prime) {
  return ProductChainState{std::max(s.m, z) - 1, std::max(s.m_prime, z_prime) - 1};
}

/// Closed-form stationary law of the product chain, a product of two
/// marginals mu_i = q^i / (Z(q) prod_{k<=i}(1-q^k)).
struct StationaryLaw {
  double q;
  double q_prime;
  double z_q;
  double z_qprime;

  static StationaryLaw create(double q, double q_prime);
  double nu00() const { return 1.0 / (z_q * z_qprime); }
};

/// Marginal mu_i for one chain with parameter q and normalizer z_q.
double stationary_marginal(double q, double z_q, std::int64_t i);

/// nu_{i,j} = mu_i * mu'_j.
double stationary_pmf(const StationaryLaw& law, std::int64_t i, std::int64_t j);

/// Draw a marginal index from mu by inverse-CDF walk.
std::int64_t sample_stationary_index(double q, double z_q, RngStream& rng);

/// First k >= 1 with the chain back at (0,0), started at (0,0). Throws
/// CapExceededError past `cap` steps.
std::int64_t simulate_return_time(double q, double q_prime, RngStream& rng,
                                  std::int64_t cap = 100'000'000);

/// First k >= 0 with the chain at (0,0) from an arbitrary start (0 when the
/// start already is the origin).
std::int64_t simulate_hitting_time(ProductChainState start, double q, double q_prime,
                                   RngStream& rng, std::int64_t cap = 100'000'000);

/// One regeneration cycle of the coupled insertion processes: length x,
/// the two block permutations, and y = LCS(sigma, sigma_prime).
struct RenewalBlock {
  std::int64_t length;
  Permutation sigma;
  Permutation sigma_prime;
  std::int64_t y;
};

/// Streams renewal blocks off two coupled insertion processes that share
/// their geometric draws with the product chain. Renewals are detected by
/// prefix completeness (running max equal to the step index, for both
/// processes); every step cross-checks that against the product chain's
/// zero hits, which must agree exactly.
class BlockGenerator {
 public:
  BlockGenerator(double q, double q_prime, RngStream rng,
                 std::int64_t cap = 100'000'000);

  /// Next block with its permutations materialized.
  RenewalBlock next_block();

  /// Next block reduced to (x, y); nothing is retained.
  void next_block_xy(std::int64_t& x, std::int64_t& y);

  double q() const { return q_; }
  double q_prime() const { return q_prime_; }

  /// The owned stream after the draws so far (for callers that resume it).
  const RngStream& stream() const { return rng_; }

 private:
  std::int64_t generate();  // fills value buffers, returns block length

  double q_;
  double q_prime_;
  RngStream rng_;
  std::int64_t cap_;
  FreeSlotSelector slots_a_;
  FreeSlotSelector slots_b_;
  std::vector<PermValue> buf_a_;
  std::vector<PermValue> buf_b_;
};

/// `count` consecutive blocks from one coupled run.
std::vector<RenewalBlock> renewal_blocks(double q, double q_prime, std::int64_t count,
                                         RngStream rng, std::int64_t cap = 100'000'000);

/// Exact streaming sums over blocks, merged in a fixed order so results do
/// not depend on how generation was scheduled.
struct BlockMoments {
  std::int64_t count = 0;
  double sum_x = 0.0;
  double sum_y = 0.0;
  double sum_xx = 0.0;
  double sum_xy = 0.0;
  double sum_yy = 0.0;

  void add(std::int64_t x, std::int64_t y);
  void merge(const BlockMoments& other);
};

/// Plug-in estimates feeding the central limit statement: a = nu00 E(Y),
/// delta^2 = Var(Y - a X), sigma = delta sqrt(nu00).
struct CltEstimate {
  double a_hat = 0.0;
  double delta2_hat = 0.0;
  double sigma_hat = 0.0;
  double nu00 = 0.0;
  std::int64_t n_blocks = 0;
  double se_a = 0.0;
};

CltEstimate estimate_clt_params(std::span<const RenewalBlock> blocks,
                                const StationaryLaw& law);
CltEstimate estimate_clt_params(const BlockMoments& moments, const StationaryLaw& law);

/// Bootstrap alternative to the plug-in standard errors: blocks are i.i.d.,
/// so resample (x, y) pairs with replacement and re-estimate.
struct BootstrapErrors {
  double se_a;
  double se_sigma;
  std::int64_t resamples;
};
BootstrapErrors bootstrap_clt_errors(std::span<const std::int64_t> x,
                                     std::span<const std::int64_t> y,
                                     const StationaryLaw& law, std::int64_t resamples,
                                     RngStream& rng);

/// A pair of Mallows permutations of [n] drawn from one coupled run, with the
/// run's renewal blocks kept for the sandwich bounds. s_n is the index of the
/// block containing n (blocks list has exactly s_n entries).
struct CoupledSample {
  Permutation pi;
  Permutation tau;
  std::vector<std::int64_t> block_lengths;
  std::vector<std::int64_t> block_lcs;
  std::int64_t n;
  std::int64_t s_n;
};

CoupledSample coupled_mallows_pair(PermValue n, double q, double q_prime, RngStream& rng,
                                   std::int64_t cap = 100'000'000);

struct SandwichBounds {
  std::int64_t lower;  // sum of block LCS values before the block containing n
  std::int64_t upper;  // lower + that block's LCS
};

/// Block-sum bounds around LCS(pi, tau). The lower bound is always strict,
/// and LCS decomposes exactly as lower + LCS of the rank-relabeled cut
/// segments (the part of the final block inside [1, n]). When n lands on a
/// renewal, LCS == upper; when it cuts a block, the relabeled cut segments
/// can out-match the full block, so LCS may exceed upper by up to the cut
/// length (see the boundary tests).
SandwichBounds sandwich_bounds(const CoupledSample& sample);

}  // namespace mallows
