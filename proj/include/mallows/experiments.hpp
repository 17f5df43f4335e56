#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mallows/stats.hpp"

namespace mallows {

enum class ExperimentKind { WeakLaw, FiniteBeta, Clt, Renewal, Stationary };

enum class OutputFormat { Csv, Json };

std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);

/// Everything an experiment needs. `workers` and `output_path` only steer
/// execution and never influence the numbers.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::WeakLaw;
  std::int64_t n = 0;
  double q = 0.0;
  double q_prime = -1.0;  // < 0 means "same as q"
  double beta = 0.0;
  std::int64_t replicas = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output_path;
  OutputFormat format = OutputFormat::Json;
  std::int64_t blocks = 1'000'000;  // renewal-block budget (renewal, clt stage 1)
  std::int64_t cap = 100'000'000;

  double effective_q_prime() const { return q_prime < 0.0 ? q : q_prime; }
};

/// Config echo for output files: the semantic fields only, so reruns with a
/// different worker count or output path stay byte-identical.
nlohmann::ordered_json config_echo(const ExperimentConfig& cfg);

/// Parses a config written by config_echo (or by hand). Unknown keys throw.
ExperimentConfig config_from_json(const nlohmann::json& j);

struct ExperimentResult {
  std::vector<double> values;  // one per replica, in replica order
  SummaryStats stats;
  nlohmann::ordered_json extras;
};

/// LCS(pi, tau) / (n sqrt(1-q)) over independent Mallows(q) pairs, against
/// the weak-law constant sqrt(6)/3.
ExperimentResult run_weak_law(const ExperimentConfig& cfg);

/// LCS / sqrt(n) at q = 1 - beta/n, against 2 jbar(beta).
ExperimentResult run_finite_beta(const ExperimentConfig& cfg);

/// Two stages: estimate (a, sigma) from renewal blocks, then standardize
/// LCS values of coupled pairs at size n and run normality diagnostics.
/// Every replica is also checked against its sandwich bounds.
ExperimentResult run_clt(const ExperimentConfig& cfg);

/// Renewal blocks reduced to (x, y) with the CLT parameter estimates; the
/// per-block rows are returned for CSV emission as (x, y) pairs packed in
/// extras when cfg asks for them.
struct RenewalRows {
  std::vector<std::int64_t> x;
  std::vector<std::int64_t> y;
};
ExperimentResult run_renewal(const ExperimentConfig& cfg, RenewalRows* rows = nullptr);

/// Occupation frequencies of the product chain over cfg.n steps compared
/// with the closed-form stationary law on {i + j <= 10}.
ExperimentResult run_stationary(const ExperimentConfig& cfg);

/// Writes values + stats to `path` ("-" or empty = stdout). CSV rows are
/// `replica,value`; JSON carries config echo, stats, seed, versions, extras.
/// Identical config + seed produce byte-identical files.
void emit(const ExperimentResult& result, const ExperimentConfig& cfg,
          const std::string& path, OutputFormat format);

/// The JSON document emit writes (exposed for tests).
nlohmann::ordered_json result_document(const ExperimentResult& result,
                                       const ExperimentConfig& cfg);

}  // namespace mallows
