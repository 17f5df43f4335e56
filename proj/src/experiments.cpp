#include "mallows/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mallows/limits.hpp"
#include "mallows/parallel.hpp"
#include "mallows/regeneration.hpp"
#include "mallows/sampling.hpp"
#include "mallows/subsequence.hpp"
#include "mallows/version.hpp"

namespace mallows {

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::WeakLaw: return "weak_law";
    case ExperimentKind::FiniteBeta: return "finite_beta";
    case ExperimentKind::Clt: return "clt";
    case ExperimentKind::Renewal: return "renewal";
    case ExperimentKind::Stationary: return "stationary";
  }
  throw std::invalid_argument("kind_name: unknown kind");
}

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "weak_law") return ExperimentKind::WeakLaw;
  if (name == "finite_beta") return ExperimentKind::FiniteBeta;
  if (name == "clt") return ExperimentKind::Clt;
  if (name == "renewal") return ExperimentKind::Renewal;
  if (name == "stationary") return ExperimentKind::Stationary;
  throw std::invalid_argument("unknown experiment kind: " + name);
}

nlohmann::ordered_json config_echo(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(cfg.kind);
  j["n"] = cfg.n;
  j["q"] = cfg.q;
  j["q_prime"] = cfg.effective_q_prime();
  j["beta"] = cfg.beta;
  j["replicas"] = cfg.replicas;
  j["seed"] = cfg.seed;
  j["blocks"] = cfg.blocks;
  j["cap"] = cfg.cap;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") cfg.kind = kind_from_name(value.get<std::string>());
    else if (key == "n") cfg.n = value.get<std::int64_t>();
    else if (key == "q") cfg.q = value.get<double>();
    else if (key == "q_prime") cfg.q_prime = value.get<double>();
    else if (key == "beta") cfg.beta = value.get<double>();
    else if (key == "replicas") cfg.replicas = value.get<std::int64_t>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "blocks") cfg.blocks = value.get<std::int64_t>();
    else if (key == "cap") cfg.cap = value.get<std::int64_t>();
    else if (key == "workers") cfg.workers = value.get<int>();
    else if (key == "output_path") cfg.output_path = value.get<std::string>();
    else if (key == "format")
      cfg.format = value.get<std::string>() == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    else throw std::invalid_argument("config: unknown key " + key);
  }
  return cfg;
}

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

ExperimentResult run_weak_law(const ExperimentConfig& cfg) {
  require(cfg.kind == ExperimentKind::WeakLaw, "run_weak_law: wrong kind");
  require(cfg.n >= 1, "run_weak_law: n must be >= 1");
  require(cfg.q > 0.0 && cfg.q < 1.0, "run_weak_law: q must be in (0,1)");
  require(cfg.replicas >= 1, "run_weak_law: replicas must be >= 1");

  const auto n = static_cast<PermValue>(cfg.n);
  const double q = cfg.q;
  const double scale = static_cast<double>(cfg.n) * std::sqrt(1.0 - q);
  ExperimentResult result;
  result.values = run_replicas<double>(
      cfg.replicas, cfg.seed, kReplicaStreamBase, cfg.workers,
      [&](std::int64_t, RngStream& rng) {
        const Permutation pi = sample_mallows(n, q, rng);
        const Permutation tau = sample_mallows(n, q, rng);
        return static_cast<double>(lcs(pi, tau)) / scale;
      });
  result.stats = summarize(result.values, /*standardize_for_ks=*/true);

  const double target = weak_law_constant();
  result.extras["target"] = (target);
  result.extras["abs_deviation"] = (std::abs(result.stats.mean - target));
  result.extras["rel_deviation"] = (std::abs(result.stats.mean - target) / target);
  return result;
}

ExperimentResult run_finite_beta(const ExperimentConfig& cfg) {
  require(cfg.kind == ExperimentKind::FiniteBeta, "run_finite_beta: wrong kind");
  require(cfg.n >= 1, "run_finite_beta: n must be >= 1");
  require(cfg.beta > 0.0, "run_finite_beta: beta must be > 0");
  require(cfg.beta < static_cast<double>(cfg.n), "run_finite_beta: beta must be < n");
  require(cfg.replicas >= 1, "run_finite_beta: replicas must be >= 1");

  const auto n = static_cast<PermValue>(cfg.n);
  const double q = 1.0 - cfg.beta / static_cast<double>(cfg.n);
  const double sqrt_n = std::sqrt(static_cast<double>(cfg.n));
  ExperimentResult result;
  result.values = run_replicas<double>(
      cfg.replicas, cfg.seed, kReplicaStreamBase, cfg.workers,
      [&](std::int64_t, RngStream& rng) {
        const Permutation pi = sample_mallows(n, q, rng);
        const Permutation tau = sample_mallows(n, q, rng);
        return static_cast<double>(lcs(pi, tau)) / sqrt_n;
      });
  result.stats = summarize(result.values, /*standardize_for_ks=*/true);

  const double target = 2.0 * j_bar(cfg.beta).value;
  result.extras["q"] = (q);
  result.extras["target"] = (target);
  result.extras["rel_deviation"] = (std::abs(result.stats.mean - target) / target);
  return result;
}

namespace {

// Renewal blocks generated in `chunks` fixed chunks, each on its own stream,
// merged in chunk order: the estimate is invariant to worker count.
BlockMoments block_moments_chunked(const ExperimentConfig& cfg, std::int64_t total_blocks,
                                   RenewalRows* rows) {
  const std::int64_t chunks = std::min<std::int64_t>(256, total_blocks);
  struct ChunkOut {
    BlockMoments moments;
    std::vector<std::int64_t> x, y;
  };
  std::vector<ChunkOut> outs = run_replicas<ChunkOut>(
      chunks, cfg.seed, kBlockStreamBase, cfg.workers,
      [&](std::int64_t c, RngStream& rng) {
        const std::int64_t begin = c * total_blocks / chunks;
        const std::int64_t end = (c + 1) * total_blocks / chunks;
        BlockGenerator gen(cfg.q, cfg.effective_q_prime(), rng, cfg.cap);
        ChunkOut out;
        for (std::int64_t b = begin; b < end; ++b) {
          std::int64_t x = 0, y = 0;
          gen.next_block_xy(x, y);
          out.moments.add(x, y);
          if (rows) {
            out.x.push_back(x);
            out.y.push_back(y);
          }
        }
        return out;
      });
  BlockMoments merged;
  for (ChunkOut& out : outs) {
    merged.merge(out.moments);
    if (rows) {
      rows->x.insert(rows->x.end(), out.x.begin(), out.x.end());
      rows->y.insert(rows->y.end(), out.y.begin(), out.y.end());
    }
  }
  return merged;
}

void put_estimate(nlohmann::ordered_json& extras, const CltEstimate& est) {
  extras["a_hat"] = est.a_hat;
  extras["delta2_hat"] = est.delta2_hat;
  extras["sigma_hat"] = est.sigma_hat;
  extras["nu00"] = est.nu00;
  extras["se_a"] = est.se_a;
  extras["n_blocks"] = est.n_blocks;
}

}  // namespace

ExperimentResult run_clt(const ExperimentConfig& cfg) {
  require(cfg.kind == ExperimentKind::Clt, "run_clt: wrong kind");
  require(cfg.n >= 1, "run_clt: n must be >= 1");
  require(cfg.q > 0.0 && cfg.q < 1.0, "run_clt: q must be in (0,1)");
  const double q_prime = cfg.effective_q_prime();
  require(q_prime > 0.0 && q_prime < 1.0, "run_clt: q_prime must be in (0,1)");
  require(cfg.replicas >= 1, "run_clt: replicas must be >= 1");
  require(cfg.blocks >= 2, "run_clt: blocks must be >= 2");

  const StationaryLaw law = StationaryLaw::create(cfg.q, q_prime);
  const BlockMoments moments = block_moments_chunked(cfg, cfg.blocks, nullptr);
  const CltEstimate est = estimate_clt_params(moments, law);

  const auto n = static_cast<PermValue>(cfg.n);
  const double center = est.a_hat * static_cast<double>(cfg.n);
  const double spread = est.sigma_hat * std::sqrt(static_cast<double>(cfg.n));

  struct ReplicaOut {
    double z = 0.0;
    std::int32_t sandwich_ok = 1;
  };
  std::vector<ReplicaOut> outs = run_replicas<ReplicaOut>(
      cfg.replicas, cfg.seed, kReplicaStreamBase, cfg.workers,
      [&](std::int64_t, RngStream& rng) {
        const CoupledSample sample = coupled_mallows_pair(n, cfg.q, q_prime, rng, cfg.cap);
        const std::int64_t length = lcs(sample.pi, sample.tau);
        const SandwichBounds bounds = sandwich_bounds(sample);
        ReplicaOut out;
        out.z = (static_cast<double>(length) - center) / spread;
        out.sandwich_ok = (bounds.lower < length && length <= bounds.upper) ? 1 : 0;
        return out;
      });

  ExperimentResult result;
  result.values.reserve(outs.size());
  std::int64_t violations = 0;
  for (const ReplicaOut& out : outs) {
    result.values.push_back(out.z);
    if (!out.sandwich_ok) ++violations;
  }
  result.stats = summarize(result.values, /*standardize_for_ks=*/false);
  put_estimate(result.extras, est);
  result.extras["sandwich_violations"] = violations;
  return result;
}

ExperimentResult run_renewal(const ExperimentConfig& cfg, RenewalRows* rows) {
  require(cfg.kind == ExperimentKind::Renewal, "run_renewal: wrong kind");
  require(cfg.q > 0.0 && cfg.q < 1.0, "run_renewal: q must be in (0,1)");
  const double q_prime = cfg.effective_q_prime();
  require(q_prime > 0.0 && q_prime < 1.0, "run_renewal: q_prime must be in (0,1)");
  require(cfg.blocks >= 2, "run_renewal: blocks must be >= 2");

  const StationaryLaw law = StationaryLaw::create(cfg.q, q_prime);
  const BlockMoments moments = block_moments_chunked(cfg, cfg.blocks, rows);
  const CltEstimate est = estimate_clt_params(moments, law);

  ExperimentResult result;
  result.values = {est.a_hat};
  result.stats = SummaryStats{};
  result.stats.count = est.n_blocks;
  result.stats.mean = moments.sum_y / static_cast<double>(moments.count);
  put_estimate(result.extras, est);
  result.extras["mean_block_length"] = moments.sum_x / static_cast<double>(moments.count);
  result.extras["kac_mean"] = law.z_q * law.z_qprime;
  return result;
}

ExperimentResult run_stationary(const ExperimentConfig& cfg) {
  require(cfg.kind == ExperimentKind::Stationary, "run_stationary: wrong kind");
  require(cfg.q > 0.0 && cfg.q < 1.0, "run_stationary: q must be in (0,1)");
  const double q_prime = cfg.effective_q_prime();
  require(q_prime > 0.0 && q_prime < 1.0, "run_stationary: q_prime must be in (0,1)");
  require(cfg.n >= 1, "run_stationary: n (steps) must be >= 1");

  constexpr std::int64_t kDiag = 10;
  const StationaryLaw law = StationaryLaw::create(cfg.q, q_prime);

  RngStream rng(cfg.seed, kAuxStreamBase);
  ProductChainState state;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> counts;
  std::int64_t outside = 0;
  for (std::int64_t step = 0; step < cfg.n; ++step) {
    const std::int64_t z = geom(cfg.q, rng);
    const std::int64_t z_prime = geom(q_prime, rng);
    state = product_chain_step(state, z, z_prime);
    if (state.m + state.m_prime <= kDiag)
      ++counts[{state.m, state.m_prime}];
    else
      ++outside;
  }

  const double total = static_cast<double>(cfg.n);
  double tv = 0.0;
  double exact_outside = 1.0;
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (std::int64_t i = 0; i <= kDiag; ++i) {
    for (std::int64_t j = 0; i + j <= kDiag; ++j) {
      const double exact = stationary_pmf(law, i, j);
      const auto it = counts.find({i, j});
      const double empirical =
          it == counts.end() ? 0.0 : static_cast<double>(it->second) / total;
      tv += std::abs(empirical - exact);
      exact_outside -= exact;
      table.push_back({{"i", i}, {"j", j}, {"empirical", empirical}, {"exact", exact}});
    }
  }
  tv += std::abs(static_cast<double>(outside) / total - exact_outside);
  tv *= 0.5;

  ExperimentResult result;
  result.values = {tv};
  result.stats = summarize(result.values, false);
  result.extras["tv_distance"] = tv;
  result.extras["steps"] = cfg.n;
  result.extras["nu00"] = law.nu00();
  result.extras["table"] = std::move(table);
  return result;
}

nlohmann::ordered_json result_document(const ExperimentResult& result,
                                       const ExperimentConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["config"] = config_echo(cfg);
  doc["seed"] = cfg.seed;
  doc["stats"] = {{"count", result.stats.count},
                  {"mean", result.stats.mean},
                  {"variance", result.stats.variance},
                  {"std_error", result.stats.std_error},
                  {"skewness", result.stats.skewness},
                  {"excess_kurtosis", result.stats.excess_kurtosis},
                  {"ks_statistic_vs_normal", result.stats.ks_statistic_vs_normal}};
  doc["versions"] = {{"core_perm", kVersion}, {"sampling", kVersion},
                     {"subsequence", kVersion}, {"regeneration", kVersion},
                     {"limits", kVersion},      {"harness", kVersion}};
  doc["extras"] = result.extras;
  return doc;
}

void emit(const ExperimentResult& result, const ExperimentConfig& cfg,
          const std::string& path, OutputFormat format) {
  std::ostringstream body;
  if (format == OutputFormat::Csv) {
    body << "replica,value\n";
    char buf[64];
    for (std::size_t r = 0; r < result.values.size(); ++r) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g\n", r, result.values[r]);
      body << buf;
    }
  } else {
    body << result_document(result, cfg).dump(2) << '\n';
  }

  if (path.empty() || path == "-") {
    std::cout << body.str();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot open " + path);
  out << body.str();
  if (!out) throw std::runtime_error("emit: write failed for " + path);
}

}  // namespace mallows
