#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsgd/losses.hpp"
#include "tsgd/models.hpp"
#include "tsgd/optimizers.hpp"
#include "tsgd/stream_data.hpp"

namespace tsgd {

enum class Strategy { offline, online };
enum class ReportFormat { csv, json };

std::string_view to_string(Strategy s) noexcept;
std::string_view to_string(ReportFormat f) noexcept;

struct DataSource {
  enum class Kind { synth, csv };
  Kind kind = Kind::synth;
  SynthParams synth;
  bool synth_seed_set = false;  // otherwise the experiment seed drives the noise
  std::string csv_path;
  double value_scale = 1.0;  // loads are divided by this before use
};

struct CompareGrid {
  std::vector<double> etas;
  std::vector<std::string> methods;  // sgd_offline, sgd_online, hts, pts
  std::vector<std::uint64_t> seeds;
};

struct ExperimentConfig {
  // feature_dim is fixed by the encoder and quantile_count by `quantiles`.
  ModelSpec model{ModelKind::linear, 24, kFeatureDim, 8, 24, 3};
  OptimizerConfig optimizer;
  Strategy strategy = Strategy::online;
  std::size_t train_chunks = 12;
  std::size_t test_chunks = 3;
  std::size_t chunk_hours = 24 * 30;
  std::size_t origin_stride = 24;  // forecast origins at hours divisible by this
  QuantileSet quantiles{{0.1, 0.5, 0.9}};
  std::uint64_t seed = 1;
  double init_scale = 0.05;
  bool compute_regret = true;
  DataSource data;
  std::string output_path;
  ReportFormat format = ReportFormat::csv;
  std::optional<CompareGrid> compare;
};

// Structural checks that do not need the data. Throws ConfigError. An
// offline strategy forces the sgd method.
void validate(ExperimentConfig& config);

// Parses the JSON document; every object rejects unknown keys. Throws
// ConfigError on any schema violation.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace tsgd
