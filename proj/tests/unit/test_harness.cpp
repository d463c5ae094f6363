#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsgd/error.hpp"
#include "tsgd/harness.hpp"

using namespace tsgd;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.model.input_window = 6;
  c.model.horizons = 6;
  c.train_chunks = 4;
  c.test_chunks = 2;
  c.chunk_hours = 96;
  c.origin_stride = 8;
  c.data.synth.length_hours = 96 * 6;
  c.data.synth.noise_sd = 0.1;
  c.optimizer.eta = 0.01;
  return c;
}

void expect_same_rows(const MetricsReport& a, const MetricsReport& b, double tol) {
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].update_index == b.rows[i].update_index);
    CHECK(std::abs(a.rows[i].ql_grand - b.rows[i].ql_grand) <= tol);
    CHECK(a.rows[i].cum_grad_evals == b.rows[i].cum_grad_evals);
    CHECK(a.rows[i].diverged == b.rows[i].diverged);
    CHECK(a.rows[i].steps == b.rows[i].steps);
  }
}

}  // namespace

TEST_CASE("sgd on a constant series converges") {
  // Threshold frozen from a calibration run: the final value lands near 6%
  // of the starting loss.
  ExperimentConfig c;
  c.model.input_window = 6;
  c.model.horizons = 6;
  c.train_chunks = 20;
  c.test_chunks = 3;
  c.chunk_hours = 240;
  c.origin_stride = 1;
  c.init_scale = 0.01;
  c.compute_regret = false;
  c.optimizer = OptimizerConfig{Method::sgd, 0.002};
  c.data.synth = SynthParams{240 * 23, 1.0, 0.0, 0.0, 0.0, 0.0, 0};

  const Series s = load_series(c);
  const StreamPlan plan = build_plan(c, s);
  Rng rng(c.seed);
  const ParamVector x0 = init_params(c.model, rng, c.init_scale);
  const double initial = ql_grand(c.model, x0.data(), plan.test);

  const MetricsReport r = run_experiment(c);
  REQUIRE(r.rows.size() == 20);
  double prev = initial;
  for (const MetricsRow& row : r.rows) {
    CHECK(row.ql_grand <= prev);
    prev = row.ql_grand;
  }
  CHECK(r.rows.back().ql_grand < 0.1 * initial);
}

TEST_CASE("pts with a window of one reproduces sgd") {
  ExperimentConfig sgd = small_config();
  sgd.optimizer = OptimizerConfig{Method::sgd, 0.02};
  ExperimentConfig pts = sgd;
  pts.optimizer = OptimizerConfig{Method::pts, 0.02, 1, 0.5};
  expect_same_rows(run_experiment(sgd), run_experiment(pts), 1e-12);
}

TEST_CASE("a zero learning rate is rejected at startup") {
  ExperimentConfig c = small_config();
  c.optimizer.eta = 0.0;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
}

TEST_CASE("identical seeded runs agree") {
  for (const char* method : {"sgd_offline", "sgd_online", "hts", "pts"}) {
    CAPTURE(method);
    const ExperimentConfig c = configure_method(small_config(), method, 0.02, 7);
    const MetricsReport a = run_experiment(c);
    const MetricsReport b = run_experiment(c);
    expect_same_rows(a, b, 0.0);
    CHECK(a.metadata == b.metadata);
  }
}

TEST_CASE("cumulative gradient evaluations follow the method cost") {
  ExperimentConfig c = small_config();
  for (Method m : {Method::sgd, Method::hts, Method::pts}) {
    c.optimizer = OptimizerConfig{m, 0.01, 5, 0.9};
    const MetricsReport r = run_experiment(c);
    for (const MetricsRow& row : r.rows) {
      std::uint64_t expect = row.steps;
      if (m == Method::hts) {
        expect = 0;
        for (std::uint64_t t = 1; t <= row.steps; ++t) expect += std::min<std::uint64_t>(5, t);
      }
      CHECK(row.cum_grad_evals == expect);
    }
    CHECK(r.rows.back().steps > 5);
  }
}

TEST_CASE("online runs log regret over the whole trajectory") {
  ExperimentConfig c = small_config();
  c.optimizer = OptimizerConfig{Method::pts, 0.01, 3, 0.9};
  const MetricsReport r = run_experiment(c);
  REQUIRE(r.regret.has_value());
  CHECK(r.regret->T == r.rows.back().steps);
  CHECK(r.regret->w == 3);
  c.strategy = Strategy::offline;
  CHECK_FALSE(run_experiment(c).regret.has_value());
}

TEST_CASE("offline retraining costs grow with the data seen") {
  const ExperimentConfig c = configure_method(small_config(), "sgd_offline", 0.02, 1);
  CHECK(c.strategy == Strategy::offline);
  CHECK(c.optimizer.method == Method::sgd);
  const MetricsReport r = run_experiment(c);
  std::uint64_t prev_total = 0;
  std::uint64_t prev_cost = 0;
  for (const MetricsRow& row : r.rows) {
    CHECK(row.cum_grad_evals == row.steps);
    const std::uint64_t cost = row.steps - prev_total;
    CHECK(cost > prev_cost);
    prev_total = row.steps;
    prev_cost = cost;
  }
}

TEST_CASE("ql_grand ignores the order of test chunks") {
  const ExperimentConfig c = small_config();
  const StreamPlan plan = build_plan(c, load_series(c));
  Rng rng(3);
  const ParamVector x = init_params(c.model, rng, 0.3);
  auto reversed = plan.test;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(ql_grand(c.model, x.data(), reversed) ==
        doctest::Approx(ql_grand(c.model, x.data(), plan.test)).epsilon(1e-14));
  Vector bad = x.data();
  bad[0] = NAN;
  CHECK(std::isnan(ql_grand(c.model, bad, plan.test)));
}

TEST_CASE("plan layout errors") {
  ExperimentConfig c = small_config();
  c.data.synth.length_hours = 96 * 5;
  CHECK_THROWS_AS(build_plan(c, load_series(c)), DataError);
  c = small_config();
  c.origin_stride = 1000;
  CHECK_THROWS_AS(build_plan(c, load_series(c)), ConfigError);
}

TEST_CASE("stability spreads") {
  const ExperimentConfig base = small_config();
  const StabilityReport one = compare_methods(base, {0.01}, {"sgd_online", "pts"}, {1, 2});
  for (const MethodStability& m : one.methods) {
    for (double s : m.spread_per_seed) CHECK(s == 0.0);
    CHECK(m.mean_spread == 0.0);
  }
  CHECK(one.cells.size() == 4);

  // A step large enough to overflow the parameters.
  const StabilityReport blown = compare_methods(base, {0.01, 1e308}, {"hts"}, {1});
  CHECK(blown.cells.back().diverged);
  CHECK(blown.methods[0].spread_per_seed[0] == std::numeric_limits<double>::infinity());
  CHECK(blown.methods[0].mean_spread == std::numeric_limits<double>::infinity());

  CHECK_THROWS_AS(compare_methods(base, {}, {"pts"}, {1}), ConfigError);
  CHECK_THROWS_AS(compare_methods(base, {0.1}, {"pts"}, {}), ConfigError);
  CHECK_THROWS_AS(configure_method(base, "adam", 0.1, 1), ConfigError);
}

TEST_CASE("divergence keeps emitting flagged rows") {
  ExperimentConfig c = small_config();
  c.optimizer = OptimizerConfig{Method::hts, 1e308, 3};
  const MetricsReport r = run_experiment(c);
  REQUIRE(r.rows.size() == c.train_chunks);
  bool seen = false;
  for (const MetricsRow& row : r.rows) {
    seen = seen || row.diverged;
    CHECK(row.diverged == seen);
    CHECK(std::isfinite(row.ql_grand) == !row.diverged);
  }
  CHECK(seen);
}
