#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "mallows/experiments.hpp"
#include "mallows/parallel.hpp"
#include "mallows/rng.hpp"

using namespace mallows;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig weak_cfg() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::WeakLaw;
  cfg.n = 400;
  cfg.q = 0.9;
  cfg.replicas = 64;
  cfg.seed = 12345;
  return cfg;
}

}  // namespace

TEST_CASE("run_replicas parallel path equals the serial reference") {
  auto fn = [](std::int64_t r, RngStream& rng) {
    double acc = static_cast<double>(r);
    for (int i = 0; i < 100; ++i) acc += rng.next_unit();
    return acc;
  };
  const auto serial = run_replicas_serial<double>(200, 7, 0, fn);
  for (int workers : {2, 4, 16}) {
    const auto parallel = run_replicas<double>(200, 7, 0, workers, fn);
    CHECK(parallel == serial);
  }
}

TEST_CASE("run_replicas propagates worker exceptions") {
  auto fn = [](std::int64_t r, RngStream&) -> double {
    if (r == 13) throw std::invalid_argument("boom");
    return 0.0;
  };
  CHECK_THROWS_AS(run_replicas<double>(64, 1, 0, 4, fn), std::invalid_argument);
}

TEST_CASE("degenerate weak law at n = 1 is deterministic") {
  ExperimentConfig cfg = weak_cfg();
  cfg.n = 1;
  cfg.q = 0.75;
  cfg.replicas = 8;
  const ExperimentResult r = run_weak_law(cfg);
  for (double v : r.values) CHECK(v == doctest::Approx(1.0 / std::sqrt(0.25)).epsilon(1e-12));
}

TEST_CASE("doubling replicas shrinks the standard error about like 1/sqrt(2)") {
  ExperimentConfig cfg = weak_cfg();
  const ExperimentResult small = run_weak_law(cfg);
  cfg.replicas *= 2;
  const ExperimentResult big = run_weak_law(cfg);
  const double ratio = big.stats.std_error / small.stats.std_error;
  CHECK(ratio > 0.45);
  CHECK(ratio < 1.0);
}

TEST_CASE("experiment validation errors") {
  ExperimentConfig cfg = weak_cfg();
  cfg.q = 1.0;
  CHECK_THROWS_AS(run_weak_law(cfg), std::invalid_argument);

  ExperimentConfig fb;
  fb.kind = ExperimentKind::FiniteBeta;
  fb.n = 100;
  fb.beta = 100.0;  // beta >= n
  fb.replicas = 4;
  CHECK_THROWS_AS(run_finite_beta(fb), std::invalid_argument);
  fb.beta = 0.0;
  CHECK_THROWS_AS(run_finite_beta(fb), std::invalid_argument);
}

TEST_CASE("experiment values are worker-invariant") {
  ExperimentConfig cfg = weak_cfg();
  cfg.workers = 1;
  const ExperimentResult one = run_weak_law(cfg);
  cfg.workers = 4;
  const ExperimentResult four = run_weak_law(cfg);
  CHECK(one.values == four.values);
  CHECK(one.stats.mean == four.stats.mean);
}

TEST_CASE("emit writes byte-identical files for identical config and seed") {
  const ExperimentConfig cfg = weak_cfg();
  const ExperimentResult r = run_weak_law(cfg);
  for (OutputFormat format : {OutputFormat::Csv, OutputFormat::Json}) {
    const char* path_a = "emit_check_a.tmp";
    const char* path_b = "emit_check_b.tmp";
    emit(r, cfg, path_a, format);
    emit(run_weak_law(cfg), cfg, path_b, format);
    const std::string a = slurp(path_a), b = slurp(path_b);
    CHECK(!a.empty());
    CHECK(a == b);
    std::remove(path_a);
    std::remove(path_b);
  }
}

TEST_CASE("emit of an empty result is a header-only CSV") {
  const ExperimentResult empty{{}, SummaryStats{}, {}};
  emit(empty, weak_cfg(), "emit_empty.tmp", OutputFormat::Csv);
  CHECK(slurp("emit_empty.tmp") == "replica,value\n");
  std::remove("emit_empty.tmp");
}

TEST_CASE("config echo round-trips through the parser") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Clt;
  cfg.n = 4000;
  cfg.q = 0.3;
  cfg.q_prime = 0.35;
  cfg.replicas = 2000;
  cfg.seed = 98765;
  cfg.blocks = 100000;
  const nlohmann::ordered_json echo = config_echo(cfg);
  const ExperimentConfig back = config_from_json(echo);
  CHECK(config_echo(back) == echo);
  CHECK(back.effective_q_prime() == doctest::Approx(0.35));
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"mystery", 1}}), std::invalid_argument);
}

TEST_CASE("result document embeds config, stats, seed, versions") {
  const ExperimentConfig cfg = weak_cfg();
  const ExperimentResult r = run_weak_law(cfg);
  const nlohmann::ordered_json doc = result_document(r, cfg);
  CHECK(doc.contains("config"));
  CHECK(doc.contains("stats"));
  CHECK(doc["seed"] == cfg.seed);
  CHECK(doc["versions"].contains("core_perm"));
  const ExperimentConfig back = config_from_json(doc["config"]);
  CHECK(back.n == cfg.n);
  CHECK(back.seed == cfg.seed);
}

TEST_CASE("run_clt smoke: standardized sample behaves and sandwich holds") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Clt;
  cfg.n = 400;
  cfg.q = 0.3;
  cfg.replicas = 200;
  cfg.seed = 777;
  cfg.blocks = 20000;
  cfg.workers = 2;
  const ExperimentResult r = run_clt(cfg);
  CHECK(r.values.size() == 200);
  // block-sum bound exceedances are a boundary-block effect at ~1% per run
  CHECK(r.extras["sandwich_violations"].get<std::int64_t>() <= 10);
  CHECK(std::abs(r.stats.mean) < 0.5);
  CHECK(r.stats.variance > 0.3);
  CHECK(r.stats.variance < 3.0);
  CHECK(r.extras["a_hat"].get<double>() > 0.0);
  CHECK(r.extras["sigma_hat"].get<double>() > 0.0);
}

TEST_CASE("run_renewal produces the estimate and optional rows") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Renewal;
  cfg.q = 0.5;
  cfg.q_prime = 0.5;
  cfg.blocks = 5000;
  cfg.seed = 31337;
  RenewalRows rows;
  const ExperimentResult r = run_renewal(cfg, &rows);
  CHECK(rows.x.size() == 5000);
  CHECK(rows.y.size() == 5000);
  for (std::size_t j = 0; j < rows.x.size(); ++j) {
    CHECK(rows.y[j] >= 1);
    CHECK(rows.y[j] <= rows.x[j]);
  }
  // mean block length ~ Z(1/2)^2 ~ 11.99
  const double mean_x = r.extras["mean_block_length"].get<double>();
  CHECK(mean_x > 10.5);
  CHECK(mean_x < 13.5);
}

TEST_CASE("run_stationary reports a small TV distance") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Stationary;
  cfg.q = 0.5;
  cfg.n = 1'000'000;
  cfg.seed = 2222;
  const ExperimentResult r = run_stationary(cfg);
  CHECK(r.extras["tv_distance"].get<double>() < 0.03);
  CHECK(r.extras["table"].size() == 66);  // states with i + j <= 10
}
