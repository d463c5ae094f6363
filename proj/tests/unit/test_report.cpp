#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tsgd/error.hpp"
#include "tsgd/harness.hpp"
#include "tsgd/report.hpp"

using namespace tsgd;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.model.input_window = 4;
  c.model.horizons = 4;
  c.train_chunks = 3;
  c.test_chunks = 1;
  c.chunk_hours = 48;
  c.origin_stride = 6;
  c.data.synth.length_hours = 48 * 4;
  c.data.synth.noise_sd = 0.2;
  c.optimizer = OptimizerConfig{Method::pts, 0.05, 3, 0.9};
  return c;
}

std::string csv_of(const MetricsReport& r) {
  std::ostringstream out;
  write_report_csv(r, out);
  return out.str();
}

// Drops the wall_time_s column.
std::string without_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, kept;
  while (std::getline(in, line)) {
    const auto a = line.find(',', line.find(',') + 1);
    const auto b = line.find(',', a + 1);
    kept += line.substr(0, a) + line.substr(b) + "\n";
  }
  return kept;
}

}  // namespace

TEST_CASE("empty report is a bare header") {
  CHECK(csv_of(MetricsReport{}) == "update_index,ql_grand,wall_time_s,cum_grad_evals,diverged\n");
}

TEST_CASE("csv round trip") {
  MetricsReport r;
  r.rows.push_back({1, 0.125, 0.5, 10, false, 10});
  r.rows.push_back({2, NAN, 0.25, 20, true, 20});
  r.rows.push_back({3, INFINITY, 1e-7, 30, true, 30});
  std::istringstream in(csv_of(r));
  const auto back = read_report_csv(in);
  REQUIRE(back.size() == 3);
  CHECK(back[0] == MetricsRow{1, 0.125, 0.5, 10, false, 0});
  CHECK(std::isnan(back[1].ql_grand));
  CHECK(back[1].diverged);
  CHECK(back[2].ql_grand == INFINITY);
  CHECK(back[2].cum_grad_evals == 30);
}

TEST_CASE("json round trip") {
  const MetricsReport r = run_experiment(small_config());
  const MetricsReport back = report_from_json(report_to_json(r));
  CHECK(back.rows == r.rows);
  CHECK(back.metadata == r.metadata);
  CHECK(to_json(back.config) == to_json(r.config));
  REQUIRE(back.regret.has_value());
  CHECK(back.regret->hazan_terms == r.regret->hazan_terms);
  CHECK(back.regret->proposed_total == r.regret->proposed_total);
}

TEST_CASE("identical runs give identical files apart from wall time") {
  const MetricsReport a = run_experiment(small_config());
  const MetricsReport b = run_experiment(small_config());
  CHECK(without_wall_time(csv_of(a)) == without_wall_time(csv_of(b)));
  nlohmann::json ja = report_to_json(a);
  nlohmann::json jb = report_to_json(b);
  for (auto* j : {&ja, &jb}) {
    for (auto& row : (*j)["rows"]) row.erase("wall_time_s");
  }
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("emit_report writes both formats and reports bad paths") {
  const MetricsReport r = run_experiment(small_config());
  const auto dir = std::filesystem::temp_directory_path();
  emit_report(r, dir / "tsgd_report.csv", ReportFormat::csv);
  std::ifstream in(dir / "tsgd_report.csv");
  CHECK(read_report_csv(in).size() == r.rows.size());
  emit_report(r, dir / "tsgd_report.json", ReportFormat::json);
  std::ifstream jin(dir / "tsgd_report.json");
  CHECK(report_from_json(nlohmann::json::parse(jin)).rows == r.rows);
  CHECK_THROWS_AS(emit_report(r, "/nonexistent/dir/report.csv", ReportFormat::csv), IoError);
}

TEST_CASE("stability csv") {
  StabilityReport s;
  s.cells.push_back({"pts", 1, 0.01, 0.5, false});
  s.cells.push_back({"hts", 2, 0.09, NAN, true});
  std::ostringstream out;
  write_stability_csv(s, out);
  CHECK(out.str() ==
        "method,seed,eta,final_ql_grand,diverged\npts,1,0.01,0.5,0\nhts,2,0.09,nan,1\n");
}
