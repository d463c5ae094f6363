#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsgd/report.hpp"
#include "tsgd/stream_data.hpp"
#include "../tools/cli.hpp"

using namespace tsgd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tsgd");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("tsgd_cli_" + name); }

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

nlohmann::json small_config() {
  return nlohmann::json::parse(R"({
    "model": {"kind": "linear", "input_window": 4, "horizons": 4},
    "optimizer": {"method": "pts", "eta": 0.05, "window": 3, "alpha": 0.9},
    "train_chunks": 3, "test_chunks": 1, "chunk_hours": 48, "origin_stride": 6,
    "seed": 2,
    "data": {"source": "synth", "synth": {"length_hours": 192, "noise_sd": 0.1}}
  })");
}

fs::path config_file(const std::string& name, const nlohmann::json& doc) {
  return write_file(name, doc.dump());
}

}  // namespace

TEST_CASE("run writes a csv report to stdout") {
  const Outcome r = invoke({"run", "--config", config_file("run.json", small_config()).string()});
  CHECK(r.code == cli::kOk);
  std::istringstream in(r.out);
  CHECK(read_report_csv(in).size() == 3);
}

TEST_CASE("run honours --out, --format and --seed") {
  const fs::path cfg = config_file("flags.json", small_config());
  const fs::path out = scratch("flags_out.json");
  const Outcome r = invoke({"run", "--config", cfg.string(), "--format", "json", "--seed", "9",
                            "--out", out.string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.empty());
  std::ifstream in(out);
  const MetricsReport rep = report_from_json(nlohmann::json::parse(in));
  CHECK(rep.config.seed == 9);
  CHECK(rep.rows.size() == 3);
}

TEST_CASE("config errors exit with 1") {
  nlohmann::json doc = small_config();
  doc["optimizer"]["momentum"] = 0.9;
  CHECK(invoke({"run", "--config", config_file("unknown.json", doc).string()}).code ==
        cli::kConfigError);
  doc = small_config();
  doc["learning_rate"] = 1;
  CHECK(invoke({"run", "--config", config_file("unknown_top.json", doc).string()}).code ==
        cli::kConfigError);
  doc = small_config();
  doc["optimizer"]["eta"] = -1;
  CHECK(invoke({"run", "--config", config_file("neg.json", doc).string()}).code ==
        cli::kConfigError);
  CHECK(invoke({"run", "--config", write_file("broken.json", "{").string()}).code ==
        cli::kConfigError);
  CHECK(invoke({"run"}).code == cli::kConfigError);
  CHECK(invoke({"run", "--config", config_file("fmt.json", small_config()).string(), "--format",
                "xml"})
            .code == cli::kConfigError);
}

TEST_CASE("data errors exit with 2") {
  const fs::path csv = write_file("gap.csv", "hour,value\n0,1\n2,1\n");
  nlohmann::json doc = small_config();
  doc["data"] = {{"source", "csv"}, {"path", csv.string()}};
  const Outcome r = invoke({"run", "--config", config_file("gap.json", doc).string()});
  CHECK(r.code == cli::kDataError);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("io errors exit with 3") {
  CHECK(invoke({"run", "--config", "/nonexistent/config.json"}).code == cli::kIoError);
  nlohmann::json doc = small_config();
  doc["data"] = {{"source", "csv"}, {"path", "/nonexistent/series.csv"}};
  CHECK(invoke({"run", "--config", config_file("nocsv.json", doc).string()}).code ==
        cli::kIoError);
  CHECK(invoke({"run", "--config", config_file("ok.json", small_config()).string(), "--out",
                "/nonexistent/dir/out.csv"})
            .code == cli::kIoError);
}

TEST_CASE("divergence is not an error exit") {
  nlohmann::json doc = small_config();
  doc["optimizer"] = {{"method", "hts"}, {"eta", 1e308}, {"window", 3}};
  const Outcome r = invoke({"run", "--config", config_file("blowup.json", doc).string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find(",1\n") != std::string::npos);
}

TEST_CASE("compare reports spreads per method") {
  nlohmann::json doc = small_config();
  doc["compare"] = {{"etas", {0.01, 0.05}}, {"methods", {"sgd_online", "pts"}}, {"seeds", {1, 2}}};
  const Outcome r = invoke(
      {"compare", "--config", config_file("cmp.json", doc).string(), "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["methods"].size() == 2);
  CHECK(j["methods"][0]["spread_per_seed"].size() == 2);
  CHECK(j["cells"].size() == 8);
  // Without a grid: the configured eta and seed over sgd_online, hts and pts.
  const Outcome d =
      invoke({"compare", "--config", config_file("nocmp.json", small_config()).string()});
  CHECK(d.code == cli::kOk);
  CHECK(d.out.rfind("method,seed,eta,final_ql_grand,diverged\n", 0) == 0);
  doc["compare"]["etas"] = nlohmann::json::array();
  CHECK(invoke({"compare", "--config", config_file("cmp_empty.json", doc).string()}).code ==
        cli::kConfigError);
  doc["compare"]["methods"] = {"adam"};
  CHECK(invoke({"compare", "--config", config_file("cmp_bad.json", doc).string()}).code ==
        cli::kConfigError);
}

TEST_CASE("convert and synth write series files") {
  const fs::path raw = write_file("gefcom.csv",
                                  "ZONEID,TIMESTAMP,LOAD,w1\n1,1012005 1:00,100,3\n"
                                  "1,1012005 2:00,101.5,3\n");
  const fs::path out = scratch("converted.csv");
  CHECK(invoke({"convert", "--gefcom", raw.string(), "--out", out.string()}).code == cli::kOk);
  CHECK(load_csv(out) == Series{{0, 100.0}, {1, 101.5}});

  const fs::path syn = scratch("synth.csv");
  CHECK(invoke({"synth", "--out", syn.string(), "--length", "50", "--noise-sd", "0.2", "--seed",
                "4"})
            .code == cli::kOk);
  CHECK(load_csv(syn).size() == 50);
}

TEST_CASE("gradcheck prints the worst relative error") {
  const Outcome r = invoke({"gradcheck", "--kind", "lstm", "--window", "3", "--features", "2",
                            "--hidden", "3", "--horizons", "2", "--quantiles", "3", "--trials",
                            "3"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.rfind("max_relative_error ", 0) == 0);
}
