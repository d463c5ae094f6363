#include "tsgd/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "tsgd/error.hpp"

namespace tsgd {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view s, std::size_t line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("malformed number '" + std::string(s) + "'", line);
  }
  return v;
}

template <class T>
T parse_integer(std::string_view s, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("malformed integer '" + std::string(s) + "'", line);
  }
  return v;
}

// JSON has no NaN/inf; non-finite values are written as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open report file for writing", path.string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing report", path.string());
}

}  // namespace

void write_report_csv(const MetricsReport& report, std::ostream& out) {
  out << "update_index,ql_grand,wall_time_s,cum_grad_evals,diverged\n";
  for (const MetricsRow& row : report.rows) {
    out << row.update_index << ',' << format_double(row.ql_grand) << ','
        << format_double(row.wall_time_s) << ',' << row.cum_grad_evals << ','
        << (row.diverged ? 1 : 0) << '\n';
  }
}

std::vector<MetricsRow> read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "update_index,ql_grand,wall_time_s,cum_grad_evals,diverged") {
    throw DataError("unexpected report header", 1);
  }
  std::vector<MetricsRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    while (true) {
      const auto pos = rest.find(',');
      f.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (f.size() != 5) throw DataError("expected 5 report columns", line_no);
    MetricsRow row;
    row.update_index = parse_integer<std::size_t>(f[0], line_no);
    row.ql_grand = parse_double(f[1], line_no);
    row.wall_time_s = parse_double(f[2], line_no);
    row.cum_grad_evals = parse_integer<std::uint64_t>(f[3], line_no);
    row.diverged = parse_integer<int>(f[4], line_no) != 0;
    rows.push_back(row);
  }
  return rows;
}

json report_to_json(const MetricsReport& report) {
  json j;
  j["config"] = to_json(report.config);
  j["metadata"] = report.metadata;
  json rows = json::array();
  for (const MetricsRow& r : report.rows) {
    rows.push_back({{"update_index", r.update_index},
                    {"ql_grand", number_or_null(r.ql_grand)},
                    {"wall_time_s", r.wall_time_s},
                    {"cum_grad_evals", r.cum_grad_evals},
                    {"diverged", r.diverged},
                    {"steps", r.steps}});
  }
  j["rows"] = std::move(rows);
  if (report.regret) {
    const RegretReport& g = *report.regret;
    json hazan = json::array();
    json proposed = json::array();
    for (double v : g.hazan_terms) hazan.push_back(number_or_null(v));
    for (double v : g.proposed_terms) proposed.push_back(number_or_null(v));
    j["regret"] = {{"T", g.T},
                   {"w", g.w},
                   {"alpha", g.alpha},
                   {"hazan_total", number_or_null(g.hazan_total)},
                   {"proposed_total", number_or_null(g.proposed_total)},
                   {"hazan_grad_evals", g.hazan_grad_evals},
                   {"hazan_terms", std::move(hazan)},
                   {"proposed_terms", std::move(proposed)}};
  } else {
    j["regret"] = nullptr;
  }
  return j;
}

MetricsReport report_from_json(const json& doc) {
  try {
    MetricsReport report;
    report.config = parse_config(doc.at("config"));
    report.metadata = doc.at("metadata").get<std::map<std::string, std::string>>();
    for (const json& r : doc.at("rows")) {
      MetricsRow row;
      row.update_index = r.at("update_index").get<std::size_t>();
      row.ql_grand = number_from(r.at("ql_grand"));
      row.wall_time_s = r.at("wall_time_s").get<double>();
      row.cum_grad_evals = r.at("cum_grad_evals").get<std::uint64_t>();
      row.diverged = r.at("diverged").get<bool>();
      row.steps = r.at("steps").get<std::uint64_t>();
      report.rows.push_back(row);
    }
    const json& g = doc.at("regret");
    if (!g.is_null()) {
      RegretReport rr;
      rr.T = g.at("T").get<std::size_t>();
      rr.w = g.at("w").get<std::size_t>();
      rr.alpha = g.at("alpha").get<double>();
      rr.hazan_total = number_from(g.at("hazan_total"));
      rr.proposed_total = number_from(g.at("proposed_total"));
      rr.hazan_grad_evals = g.at("hazan_grad_evals").get<std::size_t>();
      for (const json& v : g.at("hazan_terms")) rr.hazan_terms.push_back(number_from(v));
      for (const json& v : g.at("proposed_terms")) rr.proposed_terms.push_back(number_from(v));
      report.regret = std::move(rr);
    }
    return report;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report JSON: ") + e.what());
  }
}

void emit_report(const MetricsReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
  std::ofstream out = open_output(path);
  if (format == ReportFormat::csv) {
    write_report_csv(report, out);
  } else {
    out << report_to_json(report).dump(2) << '\n';
  }
  finish_output(out, path);
}

json stability_to_json(const StabilityReport& report) {
  json cells = json::array();
  for (const StabilityCell& c : report.cells) {
    cells.push_back({{"method", c.method},
                     {"seed", c.seed},
                     {"eta", c.eta},
                     {"final_ql_grand", number_or_null(c.final_ql_grand)},
                     {"diverged", c.diverged}});
  }
  json methods = json::array();
  for (const MethodStability& m : report.methods) {
    json spreads = json::array();
    // +inf spread (a diverged run) is written as null.
    for (double s : m.spread_per_seed) spreads.push_back(number_or_null(s));
    methods.push_back({{"method", m.method},
                       {"spread_per_seed", std::move(spreads)},
                       {"mean_spread", number_or_null(m.mean_spread)}});
  }
  return {{"cells", std::move(cells)}, {"methods", std::move(methods)}};
}

void write_stability_csv(const StabilityReport& report, std::ostream& out) {
  out << "method,seed,eta,final_ql_grand,diverged\n";
  for (const StabilityCell& c : report.cells) {
    out << c.method << ',' << c.seed << ',' << format_double(c.eta) << ','
        << format_double(c.final_ql_grand) << ',' << (c.diverged ? 1 : 0) << '\n';
  }
}

void emit_stability_report(const StabilityReport& report, const std::filesystem::path& path,
                           ReportFormat format) {
  std::ofstream out = open_output(path);
  if (format == ReportFormat::csv) {
    write_stability_csv(report, out);
  } else {
    out << stability_to_json(report).dump(2) << '\n';
  }
  finish_output(out, path);
}

}  // namespace tsgd
