#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsgd/config.hpp"
#include "tsgd/models.hpp"
#include "tsgd/regret.hpp"
#include "tsgd/stream_data.hpp"

namespace tsgd {

// Forecast origins grouped by the chunk in which their last target arrives.
// An origin is an hour t divisible by origin_stride with t >= input_window;
// it reads hours t-window .. t-1 and predicts hours t .. t+horizons-1.
struct StreamPlan {
  std::vector<std::vector<LossContext>> train;  // one entry per training chunk
  std::vector<std::vector<LossContext>> test;   // one entry per test chunk
};

// Loads or synthesizes the series and lays out the examples. Throws
// DataError when the series is too short for the configured split and
// ConfigError when a test chunk holds no forecast origin.
Series load_series(const ExperimentConfig& config);
StreamPlan build_plan(const ExperimentConfig& config, const Series& series);

// Mean over test chunks of (total quantile loss over the chunk's origins /
// number of origins). NaN when x is non-finite.
double ql_grand(const ModelSpec& spec, const Vector& x,
                const std::vector<std::vector<LossContext>>& test);

struct MetricsRow {
  std::size_t update_index = 0;  // 1-based chunk arrival
  double ql_grand = 0.0;
  double wall_time_s = 0.0;  // training time for this arrival
  std::uint64_t cum_grad_evals = 0;
  bool diverged = false;
  std::uint64_t steps = 0;  // cumulative optimizer steps (JSON only)

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

struct MetricsReport {
  ExperimentConfig config;
  std::map<std::string, std::string> metadata;
  std::vector<MetricsRow> rows;
  std::optional<RegretReport> regret;  // online strategies with compute_regret
};

MetricsReport run_experiment(const ExperimentConfig& config);

// Configuration of one grid cell: method is sgd_offline, sgd_online, hts or pts.
ExperimentConfig configure_method(const ExperimentConfig& base, const std::string& method,
                                  double eta, std::uint64_t seed);

struct StabilityCell {
  std::string method;
  std::uint64_t seed;
  double eta;
  double final_ql_grand;
  bool diverged;
};

struct MethodStability {
  std::string method;
  std::vector<double> spread_per_seed;  // max - min final QL_grand over etas
  double mean_spread = 0.0;             // +inf if any run diverged
};

struct StabilityReport {
  std::vector<StabilityCell> cells;  // ordered by (method, seed, eta) as given
  std::vector<MethodStability> methods;
};

// Throws ConfigError for an empty eta or seed list.
StabilityReport compare_methods(const ExperimentConfig& base, const std::vector<double>& etas,
                                const std::vector<std::string>& methods,
                                const std::vector<std::uint64_t>& seeds);

}  // namespace tsgd
