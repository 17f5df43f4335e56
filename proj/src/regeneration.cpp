#include "mallows/regeneration.hpp"

#include <cmath>
#include <stdexcept>

#include "mallows/errors.hpp"
#include "mallows/limits.hpp"
#include "mallows/sampling.hpp"
#include "mallows/subsequence.hpp"

namespace mallows {

StationaryLaw StationaryLaw::create(double q, double q_prime) {
  if (!(q > 0.0 && q < 1.0) || !(q_prime > 0.0 && q_prime < 1.0))
    throw std::invalid_argument("StationaryLaw: parameters must be in (0,1)");
  return StationaryLaw{q, q_prime, euler_z(q), euler_z(q_prime)};
}

double stationary_marginal(double q, double z_q, std::int64_t i) {
  if (i < 0) throw std::invalid_argument("stationary_marginal: i must be >= 0");
  // mu_i = q^i / (Z(q) prod_{k=1}^{i}(1-q^k)), in log space for large i.
  double log_num = static_cast<double>(i) * std::log(q);
  double log_den = std::log(z_q);
  double qk = q;
  for (std::int64_t k = 1; k <= i; ++k) {
    log_den += std::log1p(-qk);
    qk *= q;
  }
  return std::exp(log_num - log_den);
}

double stationary_pmf(const StationaryLaw& law, std::int64_t i, std::int64_t j) {
  return stationary_marginal(law.q, law.z_q, i) *
         stationary_marginal(law.q_prime, law.z_qprime, j);
}

std::int64_t sample_stationary_index(double q, double z_q, RngStream& rng) {
  const double u = rng.next_unit();
  double cum = 0.0;
  for (std::int64_t i = 0; i < 4096; ++i) {
    cum += stationary_marginal(q, z_q, i);
    if (u <= cum) return i;
  }
  // Unreachable in practice: the marginal's tail decays like q^i.
  return 4096;
}

std::int64_t simulate_return_time(double q, double q_prime, RngStream& rng,
                                  std::int64_t cap) {
  ProductChainState state;
  for (std::int64_t k = 1; k <= cap; ++k) {
    // Fixed draw order (z before z'), shared with BlockGenerator.
    const std::int64_t z = geom(q, rng);
    const std::int64_t z_prime = geom(q_prime, rng);
    state = product_chain_step(state, z, z_prime);
    if (state.is_origin()) return k;
  }
  throw CapExceededError("simulate_return_time: cap exceeded", cap);
}

std::int64_t simulate_hitting_time(ProductChainState start, double q, double q_prime,
                                   RngStream& rng, std::int64_t cap) {
  if (start.is_origin()) return 0;
  ProductChainState state = start;
  for (std::int64_t k = 1; k <= cap; ++k) {
    const std::int64_t z = geom(q, rng);
    const std::int64_t z_prime = geom(q_prime, rng);
    state = product_chain_step(state, z, z_prime);
    if (state.is_origin()) return k;
  }
  throw CapExceededError("simulate_hitting_time: cap exceeded", cap);
}

BlockGenerator::BlockGenerator(double q, double q_prime, RngStream rng, std::int64_t cap)
    : q_(q), q_prime_(q_prime), rng_(rng), cap_(cap), slots_a_(64), slots_b_(64) {
  if (!(q > 0.0 && q < 1.0) || !(q_prime > 0.0 && q_prime < 1.0))
    throw std::invalid_argument("BlockGenerator: parameters must be in (0,1)");
  if (cap < 1) throw std::invalid_argument("BlockGenerator: cap must be >= 1");
}

std::int64_t BlockGenerator::generate() {
  // A renewal restarts both insertion processes on a fresh set of naturals,
  // so every block is built from scratch on local values.
  buf_a_.clear();
  buf_b_.clear();
  slots_a_.reset();
  slots_b_.reset();
  std::int64_t max_a = 0, max_b = 0;
  ProductChainState chain;
  for (std::int64_t t = 1; t <= cap_; ++t) {
    const std::int64_t z = geom(q_, rng_);
    const std::int64_t z_prime = geom(q_prime_, rng_);
    const std::int64_t v = slots_a_.take_kth_free(z);
    const std::int64_t v_prime = slots_b_.take_kth_free(z_prime);
    buf_a_.push_back(static_cast<PermValue>(v));
    buf_b_.push_back(static_cast<PermValue>(v_prime));
    max_a = std::max(max_a, v);
    max_b = std::max(max_b, v_prime);
    chain = product_chain_step(chain, z, z_prime);
    // Shared-stream coupling: running max minus step index must equal the
    // chain coordinate at every step.
    if (chain.m != max_a - t || chain.m_prime != max_b - t)
      throw std::logic_error("BlockGenerator: chain/prefix coupling violated");
    const bool prefix_complete = (max_a == t && max_b == t);
    if (prefix_complete != chain.is_origin())
      throw std::logic_error("BlockGenerator: renewal detections disagree");
    if (prefix_complete) return t;
  }
  throw CapExceededError("BlockGenerator: block exceeded cap", cap_);
}

RenewalBlock BlockGenerator::next_block() {
  const std::int64_t x = generate();
  Permutation sigma = Permutation::unchecked(buf_a_);
  Permutation sigma_prime = Permutation::unchecked(buf_b_);
  const std::int64_t y = lcs(sigma, sigma_prime);
  return RenewalBlock{x, std::move(sigma), std::move(sigma_prime), y};
}

void BlockGenerator::next_block_xy(std::int64_t& x, std::int64_t& y) {
  x = generate();
  y = lcs(Permutation::unchecked(buf_a_), Permutation::unchecked(buf_b_));
}

std::vector<RenewalBlock> renewal_blocks(double q, double q_prime, std::int64_t count,
                                         RngStream rng, std::int64_t cap) {
  if (count < 1) throw std::invalid_argument("renewal_blocks: count must be >= 1");
  BlockGenerator gen(q, q_prime, rng, cap);
  std::vector<RenewalBlock> blocks;
  blocks.reserve(static_cast<std::size_t>(count));
  for (std::int64_t j = 0; j < count; ++j) blocks.push_back(gen.next_block());
  return blocks;
}

void BlockMoments::add(std::int64_t x, std::int64_t y) {
  const double xd = static_cast<double>(x);
  const double yd = static_cast<double>(y);
  ++count;
  sum_x += xd;
  sum_y += yd;
  sum_xx += xd * xd;
  sum_xy += xd * yd;
  sum_yy += yd * yd;
}

void BlockMoments::merge(const BlockMoments& other) {
  count += other.count;
  sum_x += other.sum_x;
  sum_y += other.sum_y;
  sum_xx += other.sum_xx;
  sum_xy += other.sum_xy;
  sum_yy += other.sum_yy;
}

CltEstimate estimate_clt_params(const BlockMoments& m, const StationaryLaw& law) {
  if (m.count < 2) throw std::invalid_argument("estimate_clt_params: need >= 2 blocks");
  const double n = static_cast<double>(m.count);
  const double nu = law.nu00();
  const double mean_y = m.sum_y / n;
  const double a = nu * mean_y;

  // Var(Y - a X) from the raw sums.
  const double sum_d = m.sum_y - a * m.sum_x;
  const double sum_dd = m.sum_yy - 2.0 * a * m.sum_xy + a * a * m.sum_xx;
  const double delta2 = std::max(0.0, (sum_dd - sum_d * sum_d / n) / (n - 1.0));

  const double var_y = std::max(0.0, (m.sum_yy - m.sum_y * m.sum_y / n) / (n - 1.0));
  CltEstimate est;
  est.a_hat = a;
  est.delta2_hat = delta2;
  est.sigma_hat = std::sqrt(delta2 * nu);
  est.nu00 = nu;
  est.n_blocks = m.count;
  est.se_a = nu * std::sqrt(var_y / n);
  return est;
}

CltEstimate estimate_clt_params(std::span<const RenewalBlock> blocks,
                                const StationaryLaw& law) {
  BlockMoments m;
  for (const RenewalBlock& b : blocks) m.add(b.length, b.y);
  return estimate_clt_params(m, law);
}

BootstrapErrors bootstrap_clt_errors(std::span<const std::int64_t> x,
                                     std::span<const std::int64_t> y,
                                     const StationaryLaw& law, std::int64_t resamples,
                                     RngStream& rng) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("bootstrap_clt_errors: need >= 2 (x, y) pairs");
  if (resamples < 2) throw std::invalid_argument("bootstrap_clt_errors: resamples >= 2");
  const std::size_t m = x.size();
  double sa = 0.0, saa = 0.0, ss = 0.0, sss = 0.0;
  for (std::int64_t b = 0; b < resamples; ++b) {
    BlockMoments moments;
    for (std::size_t i = 0; i < m; ++i) {
      const auto pick = static_cast<std::size_t>(rng.next_below(m));
      moments.add(x[pick], y[pick]);
    }
    const CltEstimate est = estimate_clt_params(moments, law);
    sa += est.a_hat;
    saa += est.a_hat * est.a_hat;
    ss += est.sigma_hat;
    sss += est.sigma_hat * est.sigma_hat;
  }
  const double b = static_cast<double>(resamples);
  return BootstrapErrors{std::sqrt(std::max(0.0, (saa - sa * sa / b) / (b - 1.0))),
                         std::sqrt(std::max(0.0, (sss - ss * ss / b) / (b - 1.0))),
                         resamples};
}

CoupledSample coupled_mallows_pair(PermValue n, double q, double q_prime, RngStream& rng,
                                   std::int64_t cap) {
  if (n < 1) throw std::invalid_argument("coupled_mallows_pair: n must be >= 1");
  BlockGenerator gen(q, q_prime, rng, cap);

  std::vector<std::int64_t> values_a, values_b;
  values_a.reserve(static_cast<std::size_t>(n));
  values_b.reserve(static_cast<std::size_t>(n));
  std::vector<std::int64_t> lengths, block_lcs;
  std::int64_t t_prev = 0;
  while (t_prev < n) {
    RenewalBlock block = gen.next_block();
    for (std::int64_t i = 0; i < block.length && t_prev + i < n; ++i) {
      values_a.push_back(block.sigma.at0(static_cast<std::size_t>(i)) + t_prev);
      values_b.push_back(block.sigma_prime.at0(static_cast<std::size_t>(i)) + t_prev);
    }
    lengths.push_back(block.length);
    block_lcs.push_back(block.y);
    t_prev += block.length;
  }
  rng = gen.stream();  // the generator owns a copy; hand the draws back
  const auto s_n = static_cast<std::int64_t>(lengths.size());
  return CoupledSample{rank_permutation(values_a), rank_permutation(values_b),
                       std::move(lengths), std::move(block_lcs), n, s_n};
}

SandwichBounds sandwich_bounds(const CoupledSample& sample) {
  std::int64_t lower = 0;
  for (std::size_t j = 0; j + 1 < sample.block_lcs.size(); ++j) lower += sample.block_lcs[j];
  const std::int64_t last = sample.block_lcs.empty() ? 0 : sample.block_lcs.back();
  return SandwichBounds{lower, lower + last};
}

}  // namespace mallows
