#include "cli.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "tsgd/config.hpp"
#include "tsgd/error.hpp"
#include "tsgd/harness.hpp"
#include "tsgd/models.hpp"
#include "tsgd/report.hpp"
#include "tsgd/stream_data.hpp"

namespace tsgd::cli {

namespace {

struct OutputFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

void add_output_flags(CLI::App* cmd, OutputFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Experiment configuration (JSON)")->required();
  cmd->add_option("--seed", flags.seed, "Override the configured seed");
  cmd->add_option("--out", flags.out, "Report path (default: config output.path, else stdout)");
  cmd->add_option("--format", flags.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig load_with_overrides(const OutputFlags& flags) {
  ExperimentConfig config = load_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out.empty()) config.output_path = flags.out;
  if (!flags.format.empty()) {
    config.format = flags.format == "json" ? ReportFormat::json : ReportFormat::csv;
  }
  return config;
}

int cmd_run(const OutputFlags& flags, std::ostream& out) {
  const ExperimentConfig config = load_with_overrides(flags);
  const MetricsReport report = run_experiment(config);
  if (config.output_path.empty()) {
    if (config.format == ReportFormat::csv) {
      write_report_csv(report, out);
    } else {
      out << report_to_json(report).dump(2) << '\n';
    }
  } else {
    emit_report(report, config.output_path, config.format);
  }
  return kOk;
}

int cmd_compare(const OutputFlags& flags, std::ostream& out) {
  ExperimentConfig config = load_with_overrides(flags);
  CompareGrid grid = config.compare.value_or(CompareGrid{});
  if (grid.etas.empty()) grid.etas = {config.optimizer.eta};
  if (grid.methods.empty()) grid.methods = {"sgd_online", "hts", "pts"};
  if (grid.seeds.empty() || flags.seed) grid.seeds = {config.seed};
  const StabilityReport report = compare_methods(config, grid.etas, grid.methods, grid.seeds);
  if (config.output_path.empty()) {
    if (config.format == ReportFormat::csv) {
      write_stability_csv(report, out);
    } else {
      out << stability_to_json(report).dump(2) << '\n';
    }
  } else {
    emit_stability_report(report, config.output_path, config.format);
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online forecasting with time-smoothed stochastic gradients"};
  app.require_subcommand(1);

  OutputFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Replay a stream through one update rule");
  add_output_flags(run_cmd, run_flags);

  OutputFlags compare_flags;
  auto* compare_cmd =
      app.add_subcommand("compare", "Final QL_grand spread across learning rates per method");
  add_output_flags(compare_cmd, compare_flags);

  std::string gefcom_in;
  std::string convert_out;
  auto* convert_cmd = app.add_subcommand("convert", "Convert a GEFCom2014 load file to hour,value CSV");
  convert_cmd->add_option("--gefcom", gefcom_in, "GEFCom train.csv")->required();
  convert_cmd->add_option("--out", convert_out, "Output CSV")->required();

  SynthParams synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic seasonal load series");
  synth_cmd->add_option("--out", synth_out, "Output CSV")->required();
  synth_cmd->add_option("--length", synth.length_hours, "Length in hours");
  synth_cmd->add_option("--base", synth.base);
  synth_cmd->add_option("--daily-amp", synth.daily_amp);
  synth_cmd->add_option("--weekly-amp", synth.weekly_amp);
  synth_cmd->add_option("--trend", synth.trend);
  synth_cmd->add_option("--noise-sd", synth.noise_sd);
  synth_cmd->add_option("--seed", synth.seed);

  ModelSpec gc_spec{ModelKind::linear, 3, 3, 4, 2, 3};
  std::string gc_kind = "linear";
  std::size_t gc_trials = 20;
  std::uint64_t gc_seed = 1;
  auto* gc_cmd = app.add_subcommand("gradcheck", "Check model gradients against finite differences");
  gc_cmd->add_option("--kind", gc_kind)->check(CLI::IsMember({"linear", "mlp", "lstm"}));
  gc_cmd->add_option("--window", gc_spec.input_window);
  gc_cmd->add_option("--features", gc_spec.feature_dim);
  gc_cmd->add_option("--hidden", gc_spec.hidden_dim);
  gc_cmd->add_option("--horizons", gc_spec.horizons);
  gc_cmd->add_option("--quantiles", gc_spec.quantile_count);
  gc_cmd->add_option("--trials", gc_trials);
  gc_cmd->add_option("--seed", gc_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(run_flags, out);
    if (*compare_cmd) return cmd_compare(compare_flags, out);
    if (*convert_cmd) {
      convert_gefcom_csv(gefcom_in, convert_out);
      return kOk;
    }
    if (*synth_cmd) {
      write_csv(synth_series(synth), synth_out);
      return kOk;
    }
    if (*gc_cmd) {
      gc_spec.kind = parse_model_kind(gc_kind);
      Rng rng(gc_seed);
      const GradCheckReport r = grad_check(gc_spec, gc_trials, rng);
      out << "max_relative_error " << r.max_relative_error << " checked " << r.checked
          << " skipped " << r.skipped << '\n';
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const DataError& e) {
    err << "data error";
    if (e.line() != 0) err << " (line " << e.line() << ")";
    err << ": " << e.what() << '\n';
    return kDataError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace tsgd::cli
