#pragma once

// Subcommand implementations behind the `wetmax` executable. Each command reads a RunConfig,
// writes to the given streams and returns the process exit code:
//   0 success, 2 input or configuration error, 3 estimation failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wetmax/distributions.hpp"
#include "wetmax/estimation.hpp"
#include "wetmax/format.hpp"
#include "wetmax/gof.hpp"
#include "wetmax/json_io.hpp"
#include "wetmax/montecarlo.hpp"
#include "wetmax/pipeline.hpp"
#include "wetmax/rng.hpp"
#include "wetmax/samplers.hpp"

namespace wetmax::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitEstimation = 3;

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct RunConfig {
  // input
  std::string input;             ///< path, or "-" for stdin
  bool input_is_maxima = false;  ///< input already holds one maximum per line
  double wet_threshold = 0.0;
  std::string missing_marker = "NA";
  MissingPolicy missing_policy = MissingPolicy::Split;

  // censoring
  std::size_t min_wet_days = 1;
  std::size_t h_first = 1;
  std::size_t h_last = 15;

  // estimation
  std::string method = "all";  ///< quantile | ls | mle | all
  std::string r;               ///< "", a number, or "from-durations"
  std::optional<double> p1, p2, p3;
  std::vector<double> tau_grid;

  // model / simulation
  double model_r = 1.0;
  double model_lambda = 1.0;
  double model_gamma = 1.0;
  std::string tag = "direct";
  std::string mode = "limit";  ///< limit | prelimit | series
  std::size_t n = 1000;
  std::uint64_t prelimit_n = 10000;
  double q = 0.5;
  double nb_p = 0.3;
  double eps = 0.5;
  double delta = 0.5;
  std::uint64_t seed = 42;
  unsigned workers = 1;

  // outputs
  std::string out;
  std::string plot_dir;
  std::string durations_out;
};

namespace detail {

inline void with_output(const std::string& path, std::ostream& fallback,
                        const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  body(file);
}

inline PrecipSeries load_series(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("--input is required");
  CsvOptions opt;
  opt.missing_marker = cfg.missing_marker;
  if (cfg.input == "-") return parse_csv(std::cin, opt);
  if (!std::filesystem::exists(cfg.input)) throw ConfigError("input file '" + cfg.input + "' not found");
  return ingest_csv(cfg.input, opt);
}

inline std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline QuantileTriple triple_from(const RunConfig& cfg) {
  if (!cfg.p1 && !cfg.p2 && !cfg.p3) return QuantileTriple::quarters();
  if (!cfg.p1 || !cfg.p2 || !cfg.p3) throw ConfigError("--p1, --p2 and --p3 must be given together");
  return {*cfg.p1, *cfg.p2, *cfg.p3};
}

struct Methods {
  bool quantile = false;
  bool ls = false;
  bool mle = false;
};

inline Methods methods_from(const RunConfig& cfg, bool r_known) {
  Methods m;
  if (cfg.method == "quantile") {
    m.quantile = true;
  } else if (cfg.method == "ls") {
    m.ls = true;
  } else if (cfg.method == "mle") {
    m.mle = true;
  } else if (cfg.method == "all") {
    m = {true, r_known, true};
  } else {
    throw ConfigError("unknown --method '" + cfg.method + "' (quantile, ls, mle, all)");
  }
  if (m.ls && !r_known) throw ConfigError("--method ls needs --r <value> or --r from-durations");
  if (!cfg.tau_grid.empty() && r_known && m.quantile) {
    throw ConfigError("--tau-grid selects the three-parameter quantile fit; it cannot be combined with --r");
  }
  return m;
}

/// Shape parameter resolved from --r.
struct ShapeSource {
  std::optional<double> r;
  std::optional<NegBinFit> negbin;
  std::string source = "free";
};

inline ShapeSource resolve_r(const RunConfig& cfg, const std::optional<WetPeriods>& wp) {
  ShapeSource out;
  if (cfg.r.empty()) return out;
  if (cfg.r == "from-durations") {
    if (!wp) throw ConfigError("--r from-durations needs a daily series input, not maxima");
    const auto d = durations(*wp);
    out.negbin = fit_negbin(d);
    out.r = out.negbin->params.r();
    out.source = "from-durations";
    return out;
  }
  const auto v = parse_number(cfg.r);
  if (!v || !(*v > 0.0)) throw ConfigError("--r must be a positive number or 'from-durations'");
  out.r = *v;
  out.source = "given";
  return out;
}

/// Runs the selected estimators on one sample. Failures of individual methods are returned
/// as error strings when `collect_errors` is set, otherwise rethrown.
struct MethodOutcome {
  FitMethod method;
  std::optional<FitReport> report;
  std::string error;
};

inline std::vector<MethodOutcome> run_methods(const MaximaSample& sample, const RunConfig& cfg,
                                              const ShapeSource& shape, bool collect_errors) {
  const Methods which = methods_from(cfg, shape.r.has_value());
  const QuantileTriple triple = triple_from(cfg);
  std::vector<MethodOutcome> out;

  auto attempt = [&](FitMethod method, const std::function<FitReport()>& body) {
    MethodOutcome o{method, std::nullopt, {}};
    try {
      o.report = body();
    } catch (const EstimationError& e) {
      if (!collect_errors) throw;
      o.error = e.what();
    }
    out.push_back(std::move(o));
    return out.back().report;
  };

  std::optional<FitReport> quantile_fit;
  if (which.quantile || (which.mle && !shape.r)) {
    auto body = [&] {
      if (shape.r) return make_report(sample, fit_quantile_known_r(sample, *shape.r, triple), FitMethod::QuantileRough);
      if (!cfg.tau_grid.empty()) {
        const auto scan = fit_quantile_tau_scan(sample, cfg.tau_grid);
        FitReport rep = make_report(sample, scan.params, FitMethod::QuantileRough);
        rep.tau = scan.tau;
        return rep;
      }
      return make_report(sample, fit_quantile(sample, triple), FitMethod::QuantileRough);
    };
    if (which.quantile) {
      quantile_fit = attempt(FitMethod::QuantileRough, body);
    } else {
      try {
        quantile_fit = body();
      } catch (const EstimationError& e) {
        if (!collect_errors) throw;
      }
    }
  }
  std::optional<FitReport> ls_fit;
  if (which.ls || (which.mle && shape.r)) {
    auto body = [&] {
      const auto ls = fit_least_squares(sample, *shape.r);
      return make_report(sample, ModelParams(*shape.r, ls.lambda, ls.gamma), FitMethod::LeastSquares);
    };
    if (which.ls) {
      ls_fit = attempt(FitMethod::LeastSquares, body);
    } else {
      try {
        ls_fit = body();
      } catch (const EstimationError& e) {
        if (!collect_errors) throw;
      }
    }
  }
  if (which.mle) {
    attempt(FitMethod::MLE, [&] {
      const auto& seed_fit = shape.r ? ls_fit : quantile_fit;
      if (!seed_fit) throw EstimationError("no starting point for maximum likelihood");
      return fit_mle(sample, seed_fit->params, shape.r.has_value());
    });
  }
  return out;
}

inline std::vector<double> read_maxima(const RunConfig& cfg) {
  const PrecipSeries s = load_series(cfg);
  std::vector<double> values;
  values.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s.days[i]) throw ParseError("missing marker not allowed in a maxima file", 0);
    values.push_back(*s.days[i]);
  }
  return values;
}

inline std::pair<std::size_t, std::size_t> parse_h_range(const std::string& text) {
  const auto sep = text.find(text.find("..") != std::string::npos ? ".." : ":");
  if (sep == std::string::npos) throw ConfigError("--h-range must look like 1:15 or 1..15");
  const auto width = text.compare(sep, 2, "..") == 0 ? 2 : 1;
  const auto a = parse_number(text.substr(0, sep));
  const auto b = parse_number(text.substr(sep + width));
  if (!a || !b || *a < 1 || *b < *a || *a != std::floor(*a) || *b != std::floor(*b)) {
    throw ConfigError("--h-range must be two integers 1 <= a <= b");
  }
  return {static_cast<std::size_t>(*a), static_cast<std::size_t>(*b)};
}

}  // namespace detail

using detail::MethodOutcome;
using detail::parse_h_range;

/// Maps library exceptions onto the exit-code contract.
inline int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const EstimationError& e) {
    err << "estimation failed: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

/// segment: wet periods of a daily series as JSON {periods, lengths}.
inline int cmd_segment(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto series = detail::load_series(cfg);
    const auto seg = segment(series, cfg.wet_threshold, cfg.missing_policy);
    for (const auto& w : seg.warnings) {
      err << "warning: missing day " << w.day + 1 << " ends wet period " << w.period + 1 << '\n';
    }
    if (!cfg.durations_out.empty()) {
      detail::with_output(cfg.durations_out, out, [&](std::ostream& os) {
        for (const auto d : durations(seg.wet)) os << d << '\n';
      });
    }
    detail::with_output(cfg.out, out, [&](std::ostream& os) { os << to_json(seg.wet).dump() << '\n'; });
  });
}

/// Builds the fit document for one input without writing it.
inline json fit_document(const RunConfig& cfg) {
  std::optional<WetPeriods> wp;
  std::optional<MaximaSample> sample;
  if (cfg.input_is_maxima) {
    sample.emplace(detail::read_maxima(cfg));
  } else {
    const auto series = detail::load_series(cfg);
    wp = segment(series, cfg.wet_threshold, cfg.missing_policy).wet;
  }
  const auto shape = detail::resolve_r(cfg, wp);
  if (wp) sample.emplace(build_maxima(*wp, CensoringSpec(cfg.min_wet_days)));

  json doc;
  doc["input"] = cfg.input;
  doc["min_wet_days"] = cfg.min_wet_days;
  doc["m"] = sample->size();
  doc["r_source"] = shape.source;
  if (shape.r) doc["r"] = *shape.r;
  if (shape.negbin) doc["negbin"] = to_json(*shape.negbin);
  doc["fits"] = json::array();
  for (const auto& o : detail::run_methods(*sample, cfg, shape, false)) {
    doc["fits"].push_back(to_json(*o.report));
  }
  return doc;
}

/// fit: estimates (r, lambda, gamma) from the maxima of wet periods of length >= h.
inline int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const json doc = fit_document(cfg);
    detail::with_output(cfg.out, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  });
}

struct SweepRow {
  std::size_t h;
  std::size_t m_h;
  std::vector<MethodOutcome> outcomes;
};

/// gof-sweep: one row per censoring threshold h with the sample size and the uniform distance
/// of every fitted method; optional per-h plot data.
inline int cmd_gof_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.input_is_maxima) throw ConfigError("gof-sweep needs a daily series, not maxima");
    if (cfg.h_first < 1 || cfg.h_last < cfg.h_first) throw ConfigError("invalid h range");
    const auto series = detail::load_series(cfg);
    const WetPeriods wp = segment(series, cfg.wet_threshold, cfg.missing_policy).wet;
    const auto shape = detail::resolve_r(cfg, wp);
    const auto which = detail::methods_from(cfg, shape.r.has_value());

    const std::size_t count = cfg.h_last - cfg.h_first + 1;
    const auto rows = run_replicates(count, CounterRng(cfg.seed), cfg.workers,
                                     [&](std::size_t i, CounterRng&) {
                                       SweepRow row{cfg.h_first + i, 0, {}};
                                       auto maxima = censored_maxima(wp, CensoringSpec(row.h));
                                       row.m_h = maxima.size();
                                       if (maxima.empty()) return row;
                                       const MaximaSample sample(std::move(maxima));
                                       row.outcomes = detail::run_methods(sample, cfg, shape, true);
                                       if (!cfg.plot_dir.empty()) {
                                         for (const auto& o : row.outcomes) {
                                           if (!o.report) continue;
                                           const auto path = std::filesystem::path(cfg.plot_dir) /
                                                             ("h" + std::to_string(row.h) + "_" +
                                                              std::string(to_string(o.method)) + ".tsv");
                                           std::ofstream f(path);
                                           if (!f) throw ConfigError("cannot write '" + path.string() + "'");
                                           write_plot_tsv(f, emit_plot_data(sample, o.report->params,
                                                                            default_plot_grid(sample)));
                                         }
                                       }
                                       return row;
                                     });

    std::vector<FitMethod> columns;
    if (which.quantile) columns.push_back(FitMethod::QuantileRough);
    if (which.ls) columns.push_back(FitMethod::LeastSquares);
    if (which.mle) columns.push_back(FitMethod::MLE);
    detail::with_output(cfg.out, out, [&](std::ostream& os) {
      os << "h\tm_h";
      for (auto c : columns) os << "\tks_" << to_string(c);
      os << '\n';
      for (const auto& row : rows) {
        os << row.h << '\t' << row.m_h;
        for (auto c : columns) {
          os << '\t';
          for (const auto& o : row.outcomes) {
            if (o.method == c && o.report) os << format_number(o.report->ks_distance);
          }
        }
        os << '\n';
      }
    });
  });
}

inline ModelParams model_from(const RunConfig& cfg) {
  return ModelParams(cfg.model_r, cfg.model_lambda, cfg.model_gamma);
}

/// simulate: n variates one per line (limit law or pre-limit maxima), or a synthetic daily series.
inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelParams p = model_from(cfg);
    CounterRng rng(cfg.seed);
    if (cfg.mode == "limit") {
      const auto tag = parse_representation_tag(cfg.tag);
      if (!tag) throw ConfigError("unknown --tag '" + cfg.tag + "'");
      check_representation(p, *tag);
      detail::with_output(cfg.out, out, [&](std::ostream& os) {
        for (std::size_t i = 0; i < cfg.n; ++i) os << format_number(sample_limit(p, *tag, rng)) << '\n';
      });
    } else if (cfg.mode == "prelimit") {
      detail::with_output(cfg.out, out, [&](std::ostream& os) {
        for (std::size_t i = 0; i < cfg.n; ++i) {
          os << format_number(simulate_prelimit_max(cfg.prelimit_n, p, cfg.q, rng)) << '\n';
        }
      });
    } else if (cfg.mode == "series") {
      const SyntheticSeriesSpec spec{p, NegBinParams(p.r(), cfg.nb_p), cfg.n};
      const auto series = synthetic_series(spec, rng);
      detail::with_output(cfg.out, out, [&](std::ostream& os) { write_series_csv(os, series); });
    } else {
      throw ConfigError("unknown --mode '" + cfg.mode + "' (limit, prelimit, series)");
    }
  });
}

inline int cmd_quantile(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { out << format_number(limit_quantile(cfg.eps, model_from(cfg))) << '\n'; });
}

inline int cmd_moment(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { out << format_number(limit_moment(cfg.delta, model_from(cfg))) << '\n'; });
}

}  // namespace wetmax::cli
