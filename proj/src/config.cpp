#include "tsgd/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

#include "tsgd/error.hpp"

namespace tsgd {

using nlohmann::json;

std::string_view to_string(Strategy s) noexcept {
  return s == Strategy::offline ? "offline" : "online";
}

std::string_view to_string(ReportFormat f) noexcept {
  return f == ReportFormat::csv ? "csv" : "json";
}

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!keys.contains(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

std::size_t read_count(const json& obj, const char* key, std::size_t fallback,
                       const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError("'" + std::string(key) + "' in " + where +
                      " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string read_string(const json& obj, const char* key, std::string fallback,
                        const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) {
    throw ConfigError("'" + std::string(key) + "' in " + where + " must be a string");
  }
  return obj.at(key).get<std::string>();
}

template <class F>
auto wrap_domain(F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

void parse_model(const json& j, ExperimentConfig& c) {
  reject_unknown(j, "model",
                 {"kind", "input_window", "feature_dim", "hidden_dim", "horizons"});
  const std::string kind = read_string(j, "kind", std::string(to_string(c.model.kind)), "model");
  c.model.kind = wrap_domain([&] { return parse_model_kind(kind); });
  c.model.input_window = read_count(j, "input_window", c.model.input_window, "model");
  c.model.hidden_dim = read_count(j, "hidden_dim", c.model.hidden_dim, "model");
  c.model.horizons = read_count(j, "horizons", c.model.horizons, "model");
  const std::size_t fd = read_count(j, "feature_dim", kFeatureDim, "model");
  if (fd != kFeatureDim) {
    throw ConfigError("model.feature_dim must equal the encoder width " +
                      std::to_string(kFeatureDim));
  }
}

void parse_optimizer(const json& j, ExperimentConfig& c) {
  reject_unknown(j, "optimizer", {"method", "eta", "window", "alpha", "schedule"});
  const std::string method =
      read_string(j, "method", std::string(to_string(c.optimizer.method)), "optimizer");
  c.optimizer.method = wrap_domain([&] { return parse_method(method); });
  read(j, "eta", c.optimizer.eta, "optimizer");
  c.optimizer.window = read_count(j, "window", c.optimizer.window, "optimizer");
  read(j, "alpha", c.optimizer.alpha, "optimizer");
  const std::string schedule =
      read_string(j, "schedule", std::string(to_string(c.optimizer.schedule)), "optimizer");
  c.optimizer.schedule = wrap_domain([&] { return parse_schedule(schedule); });
}

void parse_data(const json& j, ExperimentConfig& c) {
  reject_unknown(j, "data", {"source", "path", "value_scale", "synth"});
  const std::string source = read_string(j, "source", "synth", "data");
  if (source == "synth") {
    c.data.kind = DataSource::Kind::synth;
  } else if (source == "csv") {
    c.data.kind = DataSource::Kind::csv;
  } else {
    throw ConfigError("data.source must be 'synth' or 'csv'");
  }
  c.data.csv_path = read_string(j, "path", c.data.csv_path, "data");
  read(j, "value_scale", c.data.value_scale, "data");
  if (j.contains("synth")) {
    const json& s = j.at("synth");
    reject_unknown(s, "data.synth",
                   {"length_hours", "base", "daily_amp", "weekly_amp", "trend", "noise_sd",
                    "seed"});
    SynthParams& p = c.data.synth;
    p.length_hours = read_count(s, "length_hours", p.length_hours, "data.synth");
    read(s, "base", p.base, "data.synth");
    read(s, "daily_amp", p.daily_amp, "data.synth");
    read(s, "weekly_amp", p.weekly_amp, "data.synth");
    read(s, "trend", p.trend, "data.synth");
    read(s, "noise_sd", p.noise_sd, "data.synth");
    if (s.contains("seed")) {
      read(s, "seed", p.seed, "data.synth");
      c.data.synth_seed_set = true;
    }
  }
}

void parse_compare(const json& j, ExperimentConfig& c) {
  reject_unknown(j, "compare", {"etas", "methods", "seeds"});
  CompareGrid grid;
  read(j, "etas", grid.etas, "compare");
  read(j, "methods", grid.methods, "compare");
  read(j, "seeds", grid.seeds, "compare");
  c.compare = std::move(grid);
}

}  // namespace

void validate(ExperimentConfig& c) {
  wrap_domain([&] {
    validate(c.model);
    validate(c.optimizer);
    return 0;
  });
  if (c.model.feature_dim != kFeatureDim) throw ConfigError("feature_dim must be 44");
  if (c.model.quantile_count != c.quantiles.size()) {
    throw ConfigError("model quantile_count must match the quantile set");
  }
  if (c.train_chunks < 1 || c.test_chunks < 1) {
    throw ConfigError("train_chunks and test_chunks must be >= 1");
  }
  if (c.chunk_hours < 1 || c.origin_stride < 1) {
    throw ConfigError("chunk_hours and origin_stride must be >= 1");
  }
  if (!(c.init_scale > 0.0)) throw ConfigError("init_scale must be positive");
  if (!(c.data.value_scale > 0.0)) throw ConfigError("data.value_scale must be positive");
  if (c.data.kind == DataSource::Kind::csv && c.data.csv_path.empty()) {
    throw ConfigError("data.path is required for a csv source");
  }
  if (c.strategy == Strategy::offline) c.optimizer.method = Method::sgd;
  if (c.compare) {
    if (c.compare->etas.empty()) throw ConfigError("compare.etas must not be empty");
    if (c.compare->seeds.empty()) throw ConfigError("compare.seeds must not be empty");
    for (double eta : c.compare->etas) {
      if (!(eta > 0.0)) throw ConfigError("compare.etas must be positive");
    }
    for (const std::string& m : c.compare->methods) {
      if (m != "sgd_offline" && m != "sgd_online" && m != "hts" && m != "pts") {
        throw ConfigError("unknown compare method '" + m + "'");
      }
    }
  }
}

ExperimentConfig parse_config(const json& doc) {
  reject_unknown(doc, "config",
                 {"model", "optimizer", "strategy", "train_chunks", "test_chunks",
                  "chunk_hours", "origin_stride", "quantiles", "seed", "init_scale",
                  "compute_regret", "data", "output", "compare"});
  ExperimentConfig c;
  if (doc.contains("model")) parse_model(doc.at("model"), c);
  if (doc.contains("optimizer")) parse_optimizer(doc.at("optimizer"), c);
  const std::string strategy = read_string(doc, "strategy", "online", "config");
  if (strategy == "online") {
    c.strategy = Strategy::online;
  } else if (strategy == "offline") {
    c.strategy = Strategy::offline;
  } else {
    throw ConfigError("strategy must be 'online' or 'offline'");
  }
  c.train_chunks = read_count(doc, "train_chunks", c.train_chunks, "config");
  c.test_chunks = read_count(doc, "test_chunks", c.test_chunks, "config");
  c.chunk_hours = read_count(doc, "chunk_hours", c.chunk_hours, "config");
  c.origin_stride = read_count(doc, "origin_stride", c.origin_stride, "config");
  if (doc.contains("quantiles")) {
    std::vector<double> levels;
    read(doc, "quantiles", levels, "config");
    c.quantiles = wrap_domain([&] { return QuantileSet(levels); });
  }
  c.model.quantile_count = c.quantiles.size();
  read(doc, "seed", c.seed, "config");
  read(doc, "init_scale", c.init_scale, "config");
  read(doc, "compute_regret", c.compute_regret, "config");
  if (doc.contains("data")) parse_data(doc.at("data"), c);
  const json* synth = doc.contains("data") && doc.at("data").contains("synth")
                          ? &doc.at("data").at("synth")
                          : nullptr;
  if (synth == nullptr || !synth->contains("length_hours")) {
    // Just long enough for the configured split.
    c.data.synth.length_hours = (c.train_chunks + c.test_chunks) * c.chunk_hours;
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    reject_unknown(o, "output", {"path", "format"});
    c.output_path = read_string(o, "path", "", "output");
    const std::string fmt = read_string(o, "format", "csv", "output");
    if (fmt == "csv") {
      c.format = ReportFormat::csv;
    } else if (fmt == "json") {
      c.format = ReportFormat::json;
    } else {
      throw ConfigError("output.format must be 'csv' or 'json'");
    }
  }
  if (doc.contains("compare")) parse_compare(doc.at("compare"), c);
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file", path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["model"] = {{"kind", to_string(c.model.kind)},
                {"input_window", c.model.input_window},
                {"feature_dim", c.model.feature_dim},
                {"hidden_dim", c.model.hidden_dim},
                {"horizons", c.model.horizons}};
  j["optimizer"] = {{"method", to_string(c.optimizer.method)},
                    {"eta", c.optimizer.eta},
                    {"window", c.optimizer.window},
                    {"alpha", c.optimizer.alpha},
                    {"schedule", to_string(c.optimizer.schedule)}};
  j["strategy"] = to_string(c.strategy);
  j["train_chunks"] = c.train_chunks;
  j["test_chunks"] = c.test_chunks;
  j["chunk_hours"] = c.chunk_hours;
  j["origin_stride"] = c.origin_stride;
  j["quantiles"] = c.quantiles.levels();
  j["seed"] = c.seed;
  j["init_scale"] = c.init_scale;
  j["compute_regret"] = c.compute_regret;
  json data;
  data["source"] = c.data.kind == DataSource::Kind::synth ? "synth" : "csv";
  data["value_scale"] = c.data.value_scale;
  if (c.data.kind == DataSource::Kind::csv) {
    data["path"] = c.data.csv_path;
  } else {
    const SynthParams& p = c.data.synth;
    data["synth"] = {{"length_hours", p.length_hours}, {"base", p.base},
                     {"daily_amp", p.daily_amp},       {"weekly_amp", p.weekly_amp},
                     {"trend", p.trend},               {"noise_sd", p.noise_sd}};
    if (c.data.synth_seed_set) data["synth"]["seed"] = p.seed;
  }
  j["data"] = std::move(data);
  j["output"] = {{"path", c.output_path}, {"format", to_string(c.format)}};
  if (c.compare) {
    j["compare"] = {{"etas", c.compare->etas},
                    {"methods", c.compare->methods},
                    {"seeds", c.compare->seeds}};
  }
  return j;
}

}  // namespace tsgd
