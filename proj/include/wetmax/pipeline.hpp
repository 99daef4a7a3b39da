#pragma once

// Daily precipitation series -> wet periods -> censored maxima sample and durations.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wetmax/errors.hpp"
#include "wetmax/format.hpp"
#include "wetmax/params.hpp"
#include "wetmax/sample.hpp"
#include "wetmax/samplers.hpp"

namespace wetmax {

/// Daily volumes in calendar order. A disengaged entry is a day marked missing.
struct PrecipSeries {
  std::vector<std::optional<double>> days;
  std::vector<std::string> dates;  ///< empty, or one label per day

  [[nodiscard]] std::size_t size() const noexcept { return days.size(); }
};

struct WetPeriods {
  std::vector<std::vector<double>> periods;  ///< X_{i,j}, in period order
  std::vector<std::size_t> first_day;        ///< 0-based index of each period's first day

  [[nodiscard]] std::size_t size() const noexcept { return periods.size(); }
  [[nodiscard]] std::vector<std::size_t> lengths() const {
    std::vector<std::size_t> out;
    out.reserve(periods.size());
    for (const auto& p : periods) out.push_back(p.size());
    return out;
  }

  friend bool operator==(const WetPeriods& a, const WetPeriods& b) {
    return a.periods == b.periods;
  }
};

enum class MissingPolicy {
  Split,  ///< a missing day ends the current run and is reported
  Dry,    ///< a missing day is silently treated as dry
};

struct MissingDayWarning {
  std::size_t day;     ///< 0-based index in the series
  std::size_t period;  ///< index of the wet period the missing day terminated
};

struct Segmentation {
  WetPeriods wet;
  std::vector<MissingDayWarning> warnings;
};

/// Maximal runs of days with volume > wet_threshold, in order.
inline Segmentation segment(const PrecipSeries& series, double wet_threshold = 0.0,
                            MissingPolicy policy = MissingPolicy::Split) {
  if (series.days.empty()) throw InvalidArgument("cannot segment an empty series");
  if (!(wet_threshold >= 0.0)) throw InvalidArgument("wet threshold must be >= 0");
  Segmentation out;
  std::vector<double> run;
  std::size_t run_start = 0;
  auto close_run = [&] {
    if (run.empty()) return;
    out.wet.periods.push_back(std::move(run));
    out.wet.first_day.push_back(run_start);
    run.clear();
  };
  for (std::size_t d = 0; d < series.days.size(); ++d) {
    const auto& day = series.days[d];
    if (!day) {
      if (policy == MissingPolicy::Split && !run.empty()) {
        out.warnings.push_back({d, out.wet.periods.size()});
      }
      close_run();
      continue;
    }
    if (*day > wet_threshold) {
      if (run.empty()) run_start = d;
      run.push_back(*day);
    } else {
      close_run();
    }
  }
  close_run();
  return out;
}

/// Minimum wet-period length h for a period's maximum to enter the sample.
class CensoringSpec {
 public:
  explicit CensoringSpec(std::size_t h = 1) : h_(h) {
    if (h < 1) throw InvalidArgument("censoring threshold h must be >= 1");
  }
  [[nodiscard]] std::size_t h() const noexcept { return h_; }

 private:
  std::size_t h_;
};

/// Maxima of the periods with length >= h, in period order.
inline std::vector<double> censored_maxima(const WetPeriods& wp, const CensoringSpec& c) {
  std::vector<double> maxima;
  for (const auto& period : wp.periods) {
    if (period.size() >= c.h()) maxima.push_back(*std::max_element(period.begin(), period.end()));
  }
  return maxima;
}

inline MaximaSample build_maxima(const WetPeriods& wp, const CensoringSpec& c) {
  auto maxima = censored_maxima(wp, c);
  if (maxima.empty()) {
    std::size_t longest = 0;
    for (const auto& p : wp.periods) longest = std::max(longest, p.size());
    throw EmptySample("no wet period survives censoring at h=" + std::to_string(c.h()) +
                      " (longest available period: " + std::to_string(longest) + " days)");
  }
  return MaximaSample(std::move(maxima));
}

inline std::vector<long long> durations(const WetPeriods& wp) {
  std::vector<long long> out;
  out.reserve(wp.size());
  for (const auto& p : wp.periods) out.push_back(static_cast<long long>(p.size()));
  return out;
}

// --- CSV ---------------------------------------------------------------------

struct CsvOptions {
  std::string missing_marker = "NA";
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

}  // namespace detail

/// Reads `date,value_mm` or single-column values. The first row is a header when none of its
/// fields contains a digit. Blank lines and lines starting with '#' are skipped.
inline PrecipSeries parse_csv(std::istream& in, const CsvOptions& opt = {}) {
  PrecipSeries series;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = detail::trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto fields = detail::split_fields(content);
    if (first_row) {
      first_row = false;
      if (std::none_of(fields.begin(), fields.end(), detail::has_digit) &&
          !(fields.size() == 1 && fields[0] == opt.missing_marker)) {
        if (fields.size() > 2) throw ParseError("expected 1 or 2 columns in the header", line_no);
        columns = fields.size();
        continue;
      }
    }
    if (fields.size() > 2) throw ParseError("expected 1 or 2 columns, got " + std::to_string(fields.size()), line_no);
    if (columns == 0) columns = fields.size();
    if (fields.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " columns, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    const std::string_view cell = fields.back();
    if (columns == 2) series.dates.emplace_back(fields.front());
    if (cell == opt.missing_marker) {
      series.days.emplace_back(std::nullopt);
      continue;
    }
    double value = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(value)) {
      throw ParseError("not a number: '" + std::string(content) + "'", line_no);
    }
    if (value < 0.0) throw ParseError("negative volume: '" + std::string(content) + "'", line_no);
    series.days.emplace_back(value);
  }
  if (series.days.empty()) throw ParseError("no data rows", 0);
  return series;
}

inline PrecipSeries ingest_csv(const std::string& path, const CsvOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return parse_csv(in, opt);
}

inline void write_series_csv(std::ostream& os, const PrecipSeries& series,
                             const CsvOptions& opt = {}) {
  const bool dated = series.dates.size() == series.days.size();
  os << (dated ? "date,value_mm\n" : "value_mm\n");
  for (std::size_t d = 0; d < series.days.size(); ++d) {
    if (dated) os << series.dates[d] << ',';
    os << (series.days[d] ? format_number(*series.days[d]) : opt.missing_marker) << '\n';
  }
}

// --- synthetic series ----------------------------------------------------------

struct SyntheticSeriesSpec {
  ModelParams maxima;     ///< law of the per-period maximum
  NegBinParams duration;  ///< wet-period length is 1 + NB(r, p)
  std::size_t periods = 1000;
  double mean_extra_dry_days = 2.0;  ///< dry gaps are 1 + Poisson(mean)
};

/// Daily series whose wet-period maxima are exact draws of the limit law and whose period
/// lengths minus one are NB draws; other wet days carry a uniform fraction of the maximum.
/// Days are labelled consecutively from 1950-01-01.
template <Rng64 G>
PrecipSeries synthetic_series(const SyntheticSeriesSpec& spec, G& g) {
  PrecipSeries series;
  auto push_dry = [&](std::uint64_t count) {
    for (std::uint64_t i = 0; i < count; ++i) series.days.emplace_back(0.0);
  };
  push_dry(1 + sample_poisson(spec.mean_extra_dry_days, g));
  for (std::size_t i = 0; i < spec.periods; ++i) {
    const std::uint64_t length = 1 + sample_negbin(spec.duration, g);
    const double peak = sample_limit(spec.maxima, RepresentationTag::Direct, g);
    const auto peak_day = static_cast<std::uint64_t>(uniform_open(g) * static_cast<double>(length));
    for (std::uint64_t d = 0; d < length; ++d) {
      series.days.emplace_back(d == peak_day ? peak : peak * uniform_open(g));
    }
    push_dry(1 + sample_poisson(spec.mean_extra_dry_days, g));
  }
  using namespace std::chrono;
  sys_days day = year_month_day{year{1950}, month{1}, std::chrono::day{1}};
  series.dates.reserve(series.days.size());
  for (std::size_t d = 0; d < series.days.size(); ++d, day += days{1}) {
    const year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    series.dates.emplace_back(buf);
  }
  return series;
}

}  // namespace wetmax
