#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "tsgd/numeric.hpp"

namespace tsgd {

struct SeriesPoint {
  std::int64_t hour;  // index from series start
  double value;
  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

using Series = std::vector<SeriesPoint>;

// CSV with header `hour,value`, hours 0, 1, 2, ... in order.
// Throws DataError (with line number) on malformed rows, IntegrityError on a
// gap, duplicate or out-of-order hour, EmptySeriesError when no rows follow
// the header, and IoError when the file cannot be opened.
Series load_csv(const std::filesystem::path& path);
Series parse_csv(std::istream& in);

// Canonical form: header, LF endings, shortest round-trip decimal values.
void write_csv(const Series& series, const std::filesystem::path& path);
void write_csv(const Series& series, std::ostream& out);

// Reads a GEFCom2014-style load file (ZONEID,TIMESTAMP,LOAD,w1..w25), keeps
// the rows that carry a LOAD value and renumbers them 0, 1, 2, ...
Series parse_gefcom_csv(std::istream& in);
void convert_gefcom_csv(const std::filesystem::path& in, const std::filesystem::path& out);

struct SynthParams {
  std::size_t length_hours = 24 * 30 * 12;
  double base = 1.0;
  double daily_amp = 0.3;
  double weekly_amp = 0.1;
  double trend = 0.0;  // per hour
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
};

// value(h) = base + daily_amp sin(2 pi h/24) + weekly_amp sin(2 pi h/168)
//            + trend h + N(0, noise_sd^2)
Series synth_series(const SynthParams& params);

// Calendar derived from the hour index with 30-day months.
inline constexpr std::size_t kHoursPerDay = 24;
inline constexpr std::size_t kDaysPerWeek = 7;
inline constexpr std::size_t kMonthsPerYear = 12;
inline constexpr std::size_t kDaysPerMonth = 30;

// Row layout: [value, hour-of-day one-hot (24), day-of-week one-hot (7),
// month one-hot (12)].
inline constexpr std::size_t kFeatureDim = 1 + kHoursPerDay + kDaysPerWeek + kMonthsPerYear;

// Features of hours t-window .. t-1 (one row each). Throws RangeError unless
// window <= t <= series.size().
Matrix encode_features(const Series& series, std::int64_t t, std::size_t window);

struct Chunk {
  std::size_t chunk_index;
  std::size_t first;  // index of the first point in the source series
  Series points;
};

// Consecutive non-overlapping chunks of chunk_hours points; the last one may
// be shorter. Throws DomainError when chunk_hours == 0.
std::vector<Chunk> chunk_stream(const Series& series, std::size_t chunk_hours);

}  // namespace tsgd
