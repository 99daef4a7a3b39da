#pragma once

// Empirical d.f., uniform (Kolmogorov) distances and the tail-index diagnostic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wetmax/distributions.hpp"
#include "wetmax/errors.hpp"
#include "wetmax/format.hpp"
#include "wetmax/params.hpp"
#include "wetmax/sample.hpp"

namespace wetmax {

/// Right-continuous step function with a jump at every distinct sample value.
struct EcdfTable {
  std::vector<double> points;   ///< distinct values, ascending
  std::vector<double> heights;  ///< ECDF value at each point; last is 1
  std::size_t m = 0;

  [[nodiscard]] double operator()(double x) const {
    const auto it = std::upper_bound(points.begin(), points.end(), x);
    if (it == points.begin()) return 0.0;
    return heights[static_cast<std::size_t>(it - points.begin()) - 1];
  }
};

inline EcdfTable ecdf(std::span<const double> values) {
  if (values.empty()) throw EmptySample("ECDF of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  EcdfTable table;
  table.m = sorted.size();
  const double m = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    table.points.push_back(sorted[i]);
    table.heights.push_back(static_cast<double>(i + 1) / m);
  }
  return table;
}

inline EcdfTable ecdf(const MaximaSample& sample) { return ecdf(sample.values()); }

struct GofResult {
  double ks_distance = 0.0;
  double location = 0.0;  ///< abscissa where the supremum is attained
  std::size_t m = 0;
};

/// sup_x |ECDF(x) - cdf(x)| for a continuous cdf, exact over the order statistics of a sorted
/// sample.
template <class Cdf>
GofResult ks_sorted(std::span<const double> sorted, Cdf&& cdf) {
  if (sorted.empty()) throw EmptySample("KS distance of an empty sample");
  const double m = static_cast<double>(sorted.size());
  GofResult out{0.0, sorted.front(), sorted.size()};
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double d = std::max(static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m);
    if (d > out.ks_distance) {
      out.ks_distance = d;
      out.location = sorted[i];
    }
  }
  out.ks_distance = std::clamp(out.ks_distance, 0.0, 1.0);
  return out;
}

template <class Cdf>
GofResult ks_one_sample(std::span<const double> values, Cdf&& cdf) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return ks_sorted(sorted, std::forward<Cdf>(cdf));
}

/// Uniform distance between the empirical d.f. and the limit law at `p`.
inline GofResult ks_model(const MaximaSample& sample, const ModelParams& p) {
  return ks_sorted(sample.sorted(), [&p](double x) { return limit_cdf(x, p); });
}

/// sup |ECDF_a - ECDF_b| by a merged sweep; tied values are consumed together.
inline GofResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw EmptySample("two-sample KS needs two nonempty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  GofResult out{0.0, std::min(sa.front(), sb.front()), sa.size() + sb.size()};
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sa.size() || j < sb.size()) {
    double x;
    if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
      x = sa[i];
    } else {
      x = sb[j];
    }
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    const double d = std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb);
    if (d > out.ks_distance) {
      out.ks_distance = d;
      out.location = x;
    }
  }
  return out;
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

/// Asymptotic 1% critical value of the two-sample statistic.
inline double ks_critical_1pct(std::size_t n, std::size_t m) {
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return 1.628 * std::sqrt((nd + md) / (nd * md));
}

/// Hill estimate of the tail exponent from the top k order statistics:
/// k / sum_{j=1..k} log(X_(m-j+1) / X_(m-k)).
inline double tail_index(const MaximaSample& sample, std::size_t k) {
  const std::size_t m = sample.size();
  if (k < 2 || k >= m) {
    throw InvalidArgument("tail_index needs 2 <= k < m (k=" + std::to_string(k) +
                          ", m=" + std::to_string(m) + ")");
  }
  const auto sorted = sample.sorted();
  const double threshold = sorted[m - k - 1];
  double sum = 0.0;
  for (std::size_t j = 1; j <= k; ++j) sum += std::log(sorted[m - j] / threshold);
  if (!(sum > 0.0)) throw DegenerateSample("tail_index: top order statistics are all equal");
  return static_cast<double>(k) / sum;
}

// --- plot data ---------------------------------------------------------------

struct PlotGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 200;
};

/// Linear grid from 0 to the sample maximum.
inline PlotGrid default_plot_grid(const MaximaSample& sample, std::size_t points = 200) {
  return PlotGrid{0.0, sample.sorted().back(), points};
}

struct PlotRow {
  double x;
  double ecdf;
  double model;
};

struct PlotData {
  GofResult gof;
  ModelParams params;
  std::vector<PlotRow> rows;
};

inline PlotData emit_plot_data(const MaximaSample& sample, const ModelParams& p,
                               const PlotGrid& grid) {
  if (grid.points < 1 || !(grid.lo >= 0.0) || !(grid.hi >= grid.lo)) {
    throw InvalidArgument("plot grid needs points >= 1 and 0 <= lo <= hi");
  }
  const EcdfTable table = ecdf(sample);
  PlotData out{ks_model(sample, p), p, {}};
  out.rows.reserve(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double x = grid.points == 1
                         ? grid.lo
                         : grid.lo + (grid.hi - grid.lo) * static_cast<double>(i) /
                                         static_cast<double>(grid.points - 1);
    out.rows.push_back({x, table(x), limit_cdf(x, p)});
  }
  return out;
}

/// TSV: "# ks=<v> m=<n> r=<r> lambda=<l> gamma=<g>" then x, ecdf, model per row.
inline void write_plot_tsv(std::ostream& os, const PlotData& data) {
  os << "# ks=" << format_number(data.gof.ks_distance) << " m=" << data.gof.m
     << " r=" << format_number(data.params.r()) << " lambda=" << format_number(data.params.lambda())
     << " gamma=" << format_number(data.params.gamma()) << '\n';
  for (const auto& row : data.rows) {
    os << format_number(row.x) << '\t' << format_number(row.ecdf) << '\t'
       << format_number(row.model) << '\n';
  }
}

}  // namespace wetmax
