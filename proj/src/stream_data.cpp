#include "tsgd/stream_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "tsgd/error.hpp"
#include "tsgd/rng.hpp"

namespace tsgd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

Series parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw EmptySeriesError("input has no header line", 1);
  ++line_no;
  strip_cr(line);
  if (trim(line) != "hour,value") {
    throw DataError("expected header 'hour,value'", line_no);
  }
  Series series;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) {
      throw DataError("expected 2 fields, got " + std::to_string(fields.size()), line_no);
    }
    SeriesPoint p{};
    if (!parse_number(fields[0], p.hour)) throw DataError("malformed hour", line_no);
    if (!parse_number(fields[1], p.value) || !std::isfinite(p.value)) {
      throw DataError("malformed value", line_no);
    }
    const auto expected = static_cast<std::int64_t>(series.size());
    if (p.hour != expected) {
      const char* what = p.hour < expected ? "duplicate or out-of-order hour "
                                           : "gap before hour ";
      throw IntegrityError(what + std::to_string(p.hour) + " (expected " +
                               std::to_string(expected) + ")",
                           line_no);
    }
    series.push_back(p);
  }
  if (series.empty()) throw EmptySeriesError("series has no data rows", line_no);
  return series;
}

Series load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open series file", path.string());
  return parse_csv(in);
}

void write_csv(const Series& series, std::ostream& out) {
  out << "hour,value\n";
  char buf[64];
  for (const SeriesPoint& p : series) {
    auto r = std::to_chars(buf, buf + sizeof(buf), p.value);
    out << p.hour << ',' << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf))
        << '\n';
  }
}

void write_csv(const Series& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file", path.string());
  write_csv(series, out);
  if (!out) throw IoError("write failed", path.string());
}

Series parse_gefcom_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw EmptySeriesError("input has no header line", 1);
  strip_cr(line);
  const auto header = split(line, ',');
  std::size_t load_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (lowercase(trim(header[i])) == "load") load_col = i;
  }
  if (load_col == header.size()) throw DataError("no LOAD column in header", line_no);

  Series series;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() <= load_col) throw DataError("row is missing the LOAD column", line_no);
    if (trim(fields[load_col]).empty()) continue;
    double value = 0.0;
    if (!parse_number(fields[load_col], value) || !std::isfinite(value)) {
      throw DataError("malformed LOAD value", line_no);
    }
    series.push_back({static_cast<std::int64_t>(series.size()), value});
  }
  if (series.empty()) throw EmptySeriesError("no LOAD values found", line_no);
  return series;
}

void convert_gefcom_csv(const std::filesystem::path& in, const std::filesystem::path& out) {
  std::ifstream src(in);
  if (!src) throw IoError("cannot open GEFCom file", in.string());
  write_csv(parse_gefcom_csv(src), out);
}

Series synth_series(const SynthParams& params) {
  if (params.length_hours < 1) throw DomainError("synthetic series needs length >= 1");
  if (!(params.noise_sd >= 0.0)) throw DomainError("noise_sd must be >= 0");
  Rng rng(params.seed);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Series series(params.length_hours);
  for (std::size_t h = 0; h < params.length_hours; ++h) {
    const double hd = static_cast<double>(h);
    double v = params.base + params.daily_amp * std::sin(two_pi * hd / 24.0) +
               params.weekly_amp * std::sin(two_pi * hd / 168.0) + params.trend * hd;
    if (params.noise_sd > 0.0) v += params.noise_sd * rng.normal();
    series[h] = {static_cast<std::int64_t>(h), v};
  }
  return series;
}

Matrix encode_features(const Series& series, std::int64_t t, std::size_t window) {
  if (t < static_cast<std::int64_t>(window) || t > static_cast<std::int64_t>(series.size())) {
    throw RangeError("feature window of " + std::to_string(window) + " hours ending before hour " +
                     std::to_string(t) + " is not covered by the series");
  }
  Matrix m(window, kFeatureDim, 0.0);
  for (std::size_t r = 0; r < window; ++r) {
    const auto h = static_cast<std::size_t>(t) - window + r;
    const std::size_t day = h / kHoursPerDay;
    auto row = m.row(r);
    row[0] = series[h].value;
    row[1 + h % kHoursPerDay] = 1.0;
    row[1 + kHoursPerDay + day % kDaysPerWeek] = 1.0;
    row[1 + kHoursPerDay + kDaysPerWeek + (day / kDaysPerMonth) % kMonthsPerYear] = 1.0;
  }
  return m;
}

std::vector<Chunk> chunk_stream(const Series& series, std::size_t chunk_hours) {
  if (chunk_hours == 0) throw DomainError("chunk_hours must be >= 1");
  std::vector<Chunk> chunks;
  for (std::size_t first = 0; first < series.size(); first += chunk_hours) {
    const std::size_t last = std::min(series.size(), first + chunk_hours);
    chunks.push_back({chunks.size(), first,
                      Series(series.begin() + static_cast<std::ptrdiff_t>(first),
                             series.begin() + static_cast<std::ptrdiff_t>(last))});
  }
  return chunks;
}

}  // namespace tsgd
