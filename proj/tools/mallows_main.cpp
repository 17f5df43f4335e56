// Command-line front end: sampling, subsequence queries, the jbar constant,
// and the Monte Carlo experiment drivers. Seeds are always explicit; no
// environment fallback, so runs are reproducible from the command line alone.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mallows/errors.hpp"
#include "mallows/experiments.hpp"
#include "mallows/parallel.hpp"
#include "mallows/limits.hpp"
#include "mallows/perm.hpp"
#include "mallows/regeneration.hpp"
#include "mallows/sampling.hpp"
#include "mallows/subsequence.hpp"

namespace {

constexpr int kExitInvalidArguments = 2;
constexpr int kExitCapExceeded = 3;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out;
  std::string format = "json";
  std::string config_path;
  bool file_has_seed = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_seed) {
  auto* seed_opt = cmd->add_option("--seed", flags.seed, "master seed (explicit, no default)");
  if (needs_seed) seed_opt->required();
  cmd->add_option("--workers", flags.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", flags.out, "output path (default stdout)");
  cmd->add_option("--format", flags.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--config", flags.config_path, "JSON config file; flags override it");
}

mallows::ExperimentConfig base_config(CommonFlags& flags) {
  mallows::ExperimentConfig cfg;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + flags.config_path);
    nlohmann::json j;
    in >> j;
    cfg = mallows::config_from_json(j);
    flags.file_has_seed = j.contains("seed");
  }
  return cfg;
}

void finish_config(mallows::ExperimentConfig& cfg, const CommonFlags& flags) {
  if (flags.seed) cfg.seed = *flags.seed;
  cfg.workers = flags.workers;
  if (!flags.out.empty()) cfg.output_path = flags.out;
  cfg.format = flags.format == "csv" ? mallows::OutputFormat::Csv
                                     : mallows::OutputFormat::Json;
}

// Seeds are never defaulted: an explicit flag or a config-file entry is
// mandatory for anything that draws randomness.
void require_seed(const CommonFlags& flags) {
  if (!flags.seed && !flags.file_has_seed)
    throw std::invalid_argument("--seed is required (flag or config file)");
}

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output path: " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mallows-permutation LCS simulator and limit-theorem checks"};
  app.require_subcommand(1);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "draw Mallows permutations");
  CommonFlags sample_flags;
  std::int64_t sample_n = 0, sample_count = 1;
  double sample_q = 0.0;
  sample_cmd->add_option("--n", sample_n, "permutation size")->required();
  sample_cmd->add_option("--q", sample_q, "Mallows parameter q > 0")->required();
  sample_cmd->add_option("--count", sample_count, "number of samples");
  add_common(sample_cmd, sample_flags, /*needs_seed=*/true);

  // lcs
  auto* lcs_cmd = app.add_subcommand("lcs", "longest common subsequence of two permutations");
  std::string lcs_a, lcs_b;
  bool lcs_witness_flag = false;
  lcs_cmd->add_option("--a", lcs_a, "first permutation, e.g. \"3,4,1,2,5\"")->required();
  lcs_cmd->add_option("--b", lcs_b, "second permutation")->required();
  lcs_cmd->add_flag("--witness", lcs_witness_flag, "also print one common subsequence");

  // jbar
  auto* jbar_cmd = app.add_subcommand("jbar", "finite-beta scaling constant");
  double jbar_beta = 0.0, jbar_tol = 1e-10;
  std::int64_t jbar_budget = 1'000'000;
  jbar_cmd->add_option("--beta", jbar_beta, "beta > 0")->required();
  jbar_cmd->add_option("--tol", jbar_tol, "absolute tolerance");
  jbar_cmd->add_option("--budget", jbar_budget, "integrand evaluation budget");

  // renewal
  auto* renewal_cmd = app.add_subcommand("renewal", "renewal blocks and CLT parameters");
  CommonFlags renewal_flags;
  double renewal_q = 0.0, renewal_qprime = -1.0;
  std::int64_t renewal_blocks_n = 0, renewal_bootstrap = 0;
  std::string renewal_csv;
  renewal_cmd->add_option("--q", renewal_q, "first parameter in (0,1)");
  renewal_cmd->add_option("--qprime", renewal_qprime, "second parameter (default q)");
  renewal_cmd->add_option("--blocks", renewal_blocks_n, "number of blocks");
  renewal_cmd->add_option("--csv", renewal_csv, "write per-block rows j,x,y here");
  renewal_cmd->add_option("--bootstrap", renewal_bootstrap,
                          "also report bootstrap standard errors from this many resamples");
  add_common(renewal_cmd, renewal_flags, /*needs_seed=*/false);

  // weak-law
  auto* weak_cmd = app.add_subcommand("weak-law", "LCS/(n sqrt(1-q)) against sqrt(6)/3");
  CommonFlags weak_flags;
  std::int64_t weak_n = 0, weak_replicas = 20;
  double weak_q = -1.0;
  weak_cmd->add_option("--n", weak_n, "permutation size");
  weak_cmd->add_option("--q", weak_q, "q in (0,1); default 1 - 100/n");
  weak_cmd->add_option("--replicas", weak_replicas, "independent pairs");
  add_common(weak_cmd, weak_flags, /*needs_seed=*/false);

  // finite-beta
  auto* beta_cmd = app.add_subcommand("finite-beta", "LCS/sqrt(n) against 2 jbar(beta)");
  CommonFlags beta_flags;
  std::int64_t beta_n = 0, beta_replicas = 200;
  double beta_beta = 0.0;
  beta_cmd->add_option("--n", beta_n, "permutation size");
  beta_cmd->add_option("--beta", beta_beta, "beta > 0; q = 1 - beta/n");
  beta_cmd->add_option("--replicas", beta_replicas, "independent pairs");
  add_common(beta_cmd, beta_flags, /*needs_seed=*/false);

  // clt
  auto* clt_cmd = app.add_subcommand("clt", "standardized LCS normality diagnostics");
  CommonFlags clt_flags;
  std::int64_t clt_n = 0, clt_replicas = 2000, clt_blocks = 1'000'000;
  double clt_q = 0.0, clt_qprime = -1.0;
  clt_cmd->add_option("--n", clt_n, "permutation size");
  clt_cmd->add_option("--q", clt_q, "first parameter in (0,1)");
  clt_cmd->add_option("--qprime", clt_qprime, "second parameter (default q)");
  clt_cmd->add_option("--replicas", clt_replicas, "standardized sample size");
  clt_cmd->add_option("--blocks", clt_blocks, "blocks for the (a, sigma) estimate");
  add_common(clt_cmd, clt_flags, /*needs_seed=*/false);

  // stationary
  auto* stat_cmd = app.add_subcommand("stationary", "product-chain occupation vs closed form");
  CommonFlags stat_flags;
  std::int64_t stat_steps = 10'000'000;
  double stat_q = 0.0, stat_qprime = -1.0;
  stat_cmd->add_option("--q", stat_q, "first parameter in (0,1)");
  stat_cmd->add_option("--qprime", stat_qprime, "second parameter (default q)");
  stat_cmd->add_option("--steps", stat_steps, "chain steps");
  add_common(stat_cmd, stat_flags, /*needs_seed=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitInvalidArguments;
  }

  try {
    if (*sample_cmd) {
      std::ofstream file;
      std::ostream& out = open_or_stdout(file, sample_flags.out);
      mallows::RngStream rng(*sample_flags.seed, 0);
      for (std::int64_t i = 0; i < sample_count; ++i)
        out << mallows::sample_mallows(static_cast<mallows::PermValue>(sample_n),
                                       sample_q, rng)
                   .str()
            << '\n';
    } else if (*lcs_cmd) {
      const mallows::Permutation a = mallows::Permutation::parse(lcs_a);
      const mallows::Permutation b = mallows::Permutation::parse(lcs_b);
      std::cout << mallows::lcs(a, b) << '\n';
      if (lcs_witness_flag) {
        const std::vector<mallows::PermValue> w = mallows::lcs_witness(a, b);
        for (std::size_t i = 0; i < w.size(); ++i)
          std::cout << (i ? "," : "") << w[i];
        std::cout << '\n';
      }
    } else if (*jbar_cmd) {
      const mallows::QuadratureResult r = mallows::j_bar(jbar_beta, jbar_tol, jbar_budget);
      std::printf("jbar %.15g abs_error_estimate %.3g evaluations %lld\n", r.value,
                  r.abs_error_estimate, static_cast<long long>(r.evaluations));
    } else if (*renewal_cmd) {
      mallows::ExperimentConfig cfg = base_config(renewal_flags);
      require_seed(renewal_flags);
      cfg.kind = mallows::ExperimentKind::Renewal;
      if (renewal_cmd->count("--q")) cfg.q = renewal_q;
      if (renewal_cmd->count("--qprime")) cfg.q_prime = renewal_qprime;
      if (renewal_cmd->count("--blocks")) cfg.blocks = renewal_blocks_n;
      finish_config(cfg, renewal_flags);
      mallows::RenewalRows rows;
      const bool need_rows = !renewal_csv.empty() || renewal_bootstrap > 0;
      mallows::ExperimentResult result =
          mallows::run_renewal(cfg, need_rows ? &rows : nullptr);
      if (renewal_bootstrap > 0) {
        const mallows::StationaryLaw law =
            mallows::StationaryLaw::create(cfg.q, cfg.effective_q_prime());
        mallows::RngStream boot_rng(cfg.seed, mallows::kAuxStreamBase + 1);
        const mallows::BootstrapErrors errors = mallows::bootstrap_clt_errors(
            rows.x, rows.y, law, renewal_bootstrap, boot_rng);
        result.extras["bootstrap_se_a"] = errors.se_a;
        result.extras["bootstrap_se_sigma"] = errors.se_sigma;
        result.extras["bootstrap_resamples"] = errors.resamples;
      }
      if (!renewal_csv.empty()) {
        std::ofstream csv(renewal_csv, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot open " + renewal_csv);
        csv << "j,x,y\n";
        for (std::size_t j = 0; j < rows.x.size(); ++j)
          csv << (j + 1) << ',' << rows.x[j] << ',' << rows.y[j] << '\n';
      }
      mallows::emit(result, cfg, cfg.output_path, cfg.format);
    } else if (*weak_cmd) {
      mallows::ExperimentConfig cfg = base_config(weak_flags);
      require_seed(weak_flags);
      cfg.kind = mallows::ExperimentKind::WeakLaw;
      if (weak_cmd->count("--n")) cfg.n = weak_n;
      if (weak_cmd->count("--q")) cfg.q = weak_q;
      if (cfg.q <= 0.0 && cfg.n > 0) cfg.q = 1.0 - 100.0 / static_cast<double>(cfg.n);
      if (weak_cmd->count("--replicas") || cfg.replicas <= 1) cfg.replicas = weak_replicas;
      finish_config(cfg, weak_flags);
      mallows::emit(mallows::run_weak_law(cfg), cfg, cfg.output_path, cfg.format);
    } else if (*beta_cmd) {
      mallows::ExperimentConfig cfg = base_config(beta_flags);
      require_seed(beta_flags);
      cfg.kind = mallows::ExperimentKind::FiniteBeta;
      if (beta_cmd->count("--n")) cfg.n = beta_n;
      if (beta_cmd->count("--beta")) cfg.beta = beta_beta;
      if (beta_cmd->count("--replicas") || cfg.replicas <= 1) cfg.replicas = beta_replicas;
      finish_config(cfg, beta_flags);
      mallows::emit(mallows::run_finite_beta(cfg), cfg, cfg.output_path, cfg.format);
    } else if (*clt_cmd) {
      mallows::ExperimentConfig cfg = base_config(clt_flags);
      require_seed(clt_flags);
      cfg.kind = mallows::ExperimentKind::Clt;
      if (clt_cmd->count("--n")) cfg.n = clt_n;
      if (clt_cmd->count("--q")) cfg.q = clt_q;
      if (clt_cmd->count("--qprime")) cfg.q_prime = clt_qprime;
      if (clt_cmd->count("--replicas") || cfg.replicas <= 1) cfg.replicas = clt_replicas;
      if (clt_cmd->count("--blocks")) cfg.blocks = clt_blocks;
      finish_config(cfg, clt_flags);
      mallows::emit(mallows::run_clt(cfg), cfg, cfg.output_path, cfg.format);
    } else if (*stat_cmd) {
      mallows::ExperimentConfig cfg = base_config(stat_flags);
      require_seed(stat_flags);
      cfg.kind = mallows::ExperimentKind::Stationary;
      if (stat_cmd->count("--steps") || cfg.n <= 0) cfg.n = stat_steps;
      if (stat_cmd->count("--q")) cfg.q = stat_q;
      if (stat_cmd->count("--qprime")) cfg.q_prime = stat_qprime;
      finish_config(cfg, stat_flags);
      mallows::emit(mallows::run_stationary(cfg), cfg, cfg.output_path, cfg.format);
    }
  } catch (const mallows::CapExceededError& e) {
    std::cerr << "error: " << e.what() << " (steps taken: " << e.steps_taken() << ")\n";
    return kExitCapExceeded;
  } catch (const mallows::BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapExceeded;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidArguments;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
