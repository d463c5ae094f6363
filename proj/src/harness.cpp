#include "tsgd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "tsgd/error.hpp"
#include "tsgd/kernels.hpp"
#include "tsgd/optimizers.hpp"

namespace tsgd {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

LossContext make_context(const ExperimentConfig& c, const Series& series, std::int64_t origin) {
  LossContext ctx{encode_features(series, origin, c.model.input_window),
                  std::vector<double>(c.model.horizons), c.quantiles, 0};
  for (std::size_t k = 0; k < c.model.horizons; ++k) {
    ctx.targets[k] = series[static_cast<std::size_t>(origin) + k].value;
  }
  return ctx;
}

std::map<std::string, std::string> decision_metadata(const ExperimentConfig& c) {
  return {
      {"ql_grand", "mean over test chunks of chunk total quantile loss / forecast origins"},
      {"total_quantile_loss", "sum over horizons and quantiles, no averaging"},
      {"lstm", "single layer, gates i f g o, forget bias 1.0, one linear head per quantile"},
      {"lr_counter", "global 1-based optimizer step counter"},
      {"early_window", "full divisor (w or W); steps t <= 0 contribute zero"},
      {"step_granularity", "one optimizer step per forecast origin, in order, single pass"},
      {"origin_rule", "hours divisible by origin_stride, assigned to the chunk of their last "
                      "target"},
      {"calendar", "derived from hour index with 30-day months; no temperature covariates"},
      {"offline", "re-initialized from seed on each arrival, sgd over all observed chunks"},
      {"cost_unit", "cum_grad_evals counts model gradient evaluations"},
      {"kernels", simd::active().name},
      {"strategy", std::string(to_string(c.strategy))},
  };
}

}  // namespace

Series load_series(const ExperimentConfig& c) {
  Series series;
  if (c.data.kind == DataSource::Kind::csv) {
    series = load_csv(c.data.csv_path);
  } else {
    SynthParams p = c.data.synth;
    if (!c.data.synth_seed_set) p.seed = c.seed;
    series = synth_series(p);
  }
  if (c.data.value_scale != 1.0) {
    for (SeriesPoint& pt : series) pt.value /= c.data.value_scale;
  }
  return series;
}

StreamPlan build_plan(const ExperimentConfig& c, const Series& series) {
  const auto chunks = chunk_stream(series, c.chunk_hours);
  const std::size_t needed = c.train_chunks + c.test_chunks;
  if (chunks.size() < needed) {
    throw DataError("series has " + std::to_string(chunks.size()) + " chunks of " +
                    std::to_string(c.chunk_hours) + " hours, configuration needs " +
                    std::to_string(needed));
  }
  StreamPlan plan;
  plan.train.resize(c.train_chunks);
  plan.test.resize(c.test_chunks);
  const std::size_t H = c.model.horizons;
  const std::size_t W = c.model.input_window;
  const std::size_t first_origin = ((W + c.origin_stride - 1) / c.origin_stride) * c.origin_stride;
  for (std::size_t t = first_origin; t + H <= series.size(); t += c.origin_stride) {
    const std::size_t chunk = (t + H - 1) / c.chunk_hours;
    if (chunk >= needed) break;
    auto ctx = make_context(c, series, static_cast<std::int64_t>(t));
    if (chunk < c.train_chunks) {
      plan.train[chunk].push_back(std::move(ctx));
    } else {
      plan.test[chunk - c.train_chunks].push_back(std::move(ctx));
    }
  }
  for (std::size_t i = 0; i < plan.test.size(); ++i) {
    if (plan.test[i].empty()) {
      throw ConfigError("test chunk " + std::to_string(i) +
                        " contains no forecast origin; widen chunk_hours or reduce horizons");
    }
  }
  return plan;
}

double ql_grand(const ModelSpec& spec, const Vector& x,
                const std::vector<std::vector<LossContext>>& test) {
  if (!is_finite(x)) return kNaN;
  double sum = 0.0;
  for (const auto& chunk : test) {
    double chunk_loss = 0.0;
    for (const LossContext& ctx : chunk) {
      const QuantileForecast yhat = predict(spec, x.span(), ctx.features);
      chunk_loss += total_quantile_loss(ctx.targets, yhat, ctx.quantiles);
    }
    sum += chunk_loss / static_cast<double>(chunk.size());
  }
  return sum / static_cast<double>(test.size());
}

MetricsReport run_experiment(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  validate(c);
  const Series series = load_series(c);
  const StreamPlan plan = build_plan(c, series);
  const ModelObjective objective(c.model);

  MetricsReport report;
  report.config = c;
  report.metadata = decision_metadata(c);

  std::uint64_t cum_evals = 0;
  bool diverged = false;

  auto record_row = [&](std::size_t update, const Vector& x, double wall, std::uint64_t steps) {
    MetricsRow row;
    row.update_index = update;
    row.ql_grand = diverged ? kNaN : ql_grand(c.model, x, plan.test);
    diverged = diverged || !std::isfinite(row.ql_grand);
    row.diverged = diverged;
    if (diverged) row.ql_grand = kNaN;
    row.wall_time_s = wall;
    row.cum_grad_evals = cum_evals;
    row.steps = steps;
    report.rows.push_back(row);
  };

  if (c.strategy == Strategy::online) {
    Rng rng(c.seed);
    Vector x = init_params(c.model, rng, c.init_scale).data();
    OnlineOptimizer opt(c.optimizer);
    Trajectory traj;
    for (std::size_t chunk = 0; chunk < plan.train.size(); ++chunk) {
      const auto start = Clock::now();
      for (const LossContext& example : plan.train[chunk]) {
        LossContext ctx = example;
        ctx.step_index = opt.steps_taken() + 1;
        StepResult r = opt.step(objective, x, ctx);
        cum_evals += r.receipt.grad_evals;
        diverged = diverged || r.receipt.diverged;
        if (c.compute_regret) {
          traj.push({ctx.step_index, std::move(x), std::move(ctx), std::move(r.grad_at_iterate)});
        }
        x = std::move(r.x);
      }
      const double wall = std::chrono::duration<double>(Clock::now() - start).count();
      record_row(chunk + 1, x, wall, static_cast<std::uint64_t>(opt.steps_taken()));
    }
    if (c.compute_regret) {
      report.regret = compute_regret(objective, traj, c.optimizer.window, c.optimizer.alpha);
    }
  } else {
    std::uint64_t total_steps = 0;
    for (std::size_t chunk = 0; chunk < plan.train.size(); ++chunk) {
      const auto start = Clock::now();
      Rng rng(c.seed);
      Vector x = init_params(c.model, rng, c.init_scale).data();
      OnlineOptimizer opt(c.optimizer);
      bool run_diverged = false;
      for (std::size_t seen = 0; seen <= chunk; ++seen) {
        for (const LossContext& example : plan.train[seen]) {
          StepResult r = opt.step(objective, x, example);
          cum_evals += r.receipt.grad_evals;
          run_diverged = run_diverged || r.receipt.diverged;
          x = std::move(r.x);
        }
      }
      total_steps += static_cast<std::uint64_t>(opt.steps_taken());
      const double wall = std::chrono::duration<double>(Clock::now() - start).count();
      // Each retrain starts afresh, so only its own divergence counts.
      diverged = run_diverged;
      record_row(chunk + 1, x, wall, total_steps);
    }
  }
  return report;
}

ExperimentConfig configure_method(const ExperimentConfig& base, const std::string& method,
                                  double eta, std::uint64_t seed) {
  ExperimentConfig c = base;
  c.compare.reset();
  c.seed = seed;
  c.optimizer.eta = eta;
  if (method == "sgd_offline") {
    c.strategy = Strategy::offline;
    c.optimizer.method = Method::sgd;
  } else if (method == "sgd_online") {
    c.strategy = Strategy::online;
    c.optimizer.method = Method::sgd;
  } else if (method == "hts") {
    c.strategy = Strategy::online;
    c.optimizer.method = Method::hts;
  } else if (method == "pts") {
    c.strategy = Strategy::online;
    c.optimizer.method = Method::pts;
  } else {
    throw ConfigError("unknown compare method '" + method + "'");
  }
  return c;
}

StabilityReport compare_methods(const ExperimentConfig& base, const std::vector<double>& etas,
                                const std::vector<std::string>& methods,
                                const std::vector<std::uint64_t>& seeds) {
  if (etas.empty()) throw ConfigError("compare needs at least one learning rate");
  if (seeds.empty()) throw ConfigError("compare needs at least one seed");
  StabilityReport report;
  for (const std::string& method : methods) {
    MethodStability ms;
    ms.method = method;
    for (std::uint64_t seed : seeds) {
      double lo = kInf;
      double hi = -kInf;
      bool any_diverged = false;
      for (double eta : etas) {
        ExperimentConfig c = configure_method(base, method, eta, seed);
        c.compute_regret = false;
        const MetricsReport run = run_experiment(c);
        const MetricsRow& last = run.rows.back();
        report.cells.push_back({method, seed, eta, last.ql_grand, last.diverged});
        if (last.diverged || !std::isfinite(last.ql_grand)) {
          any_diverged = true;
        } else {
          lo = std::min(lo, last.ql_grand);
          hi = std::max(hi, last.ql_grand);
        }
      }
      ms.spread_per_seed.push_back(any_diverged ? kInf : hi - lo);
    }
    double sum = 0.0;
    for (double s : ms.spread_per_seed) sum += s;
    ms.mean_spread = sum / static_cast<double>(ms.spread_per_seed.size());
    report.methods.push_back(std::move(ms));
  }
  return report;
}

}  // namespace tsgd
