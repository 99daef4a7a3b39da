#pragma once

// JSON documents for wet periods and fit reports.

#include <string>

#include <nlohmann/json.hpp>

#include "wetmax/estimation.hpp"
#include "wetmax/pipeline.hpp"

namespace wetmax {

using json = nlohmann::json;

inline json to_json(const ModelParams& p) {
  return {{"r", p.r()}, {"lambda", p.lambda()}, {"gamma", p.gamma()}};
}

inline ModelParams model_params_from_json(const json& j) {
  return ModelParams(j.at("r").get<double>(), j.at("lambda").get<double>(),
                     j.at("gamma").get<double>());
}

inline json to_json(const WetPeriods& wp) {
  return {{"periods", wp.periods}, {"lengths", wp.lengths()}};
}

inline WetPeriods wet_periods_from_json(const json& j) {
  WetPeriods wp;
  wp.periods = j.at("periods").get<std::vector<std::vector<double>>>();
  if (j.contains("lengths") && j.at("lengths").get<std::vector<std::size_t>>() != wp.lengths()) {
    throw ParseError("wet periods JSON: 'lengths' disagrees with 'periods'", 0);
  }
  return wp;
}

inline std::optional<FitMethod> parse_fit_method(std::string_view name) {
  for (auto m : {FitMethod::QuantileRough, FitMethod::LeastSquares, FitMethod::MLE}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

inline json to_json(const FitReport& r) {
  json j = {{"method", std::string(to_string(r.method))},
            {"params", to_json(r.params)},
            {"ks_distance", r.ks_distance},
            {"iterations", r.iterations},
            {"converged", r.converged}};
  if (r.log_likelihood) j["log_likelihood"] = *r.log_likelihood;
  if (r.tau) j["tau"] = *r.tau;
  return j;
}

inline FitReport fit_report_from_json(const json& j) {
  const auto method = parse_fit_method(j.at("method").get<std::string>());
  if (!method) throw ParseError("fit report JSON: unknown method", 0);
  FitReport r{model_params_from_json(j.at("params")), *method, j.at("ks_distance").get<double>(),
              std::nullopt, j.at("iterations").get<std::size_t>(), j.at("converged").get<bool>(),
              std::nullopt};
  if (j.contains("log_likelihood")) r.log_likelihood = j.at("log_likelihood").get<double>();
  if (j.contains("tau")) r.tau = j.at("tau").get<double>();
  return r;
}

inline json to_json(const NegBinFit& f) {
  return {{"r", f.params.r()},
          {"p", f.params.p()},
          {"r_moments", f.r_moments},
          {"log_likelihood", f.log_likelihood},
          {"n", f.n}};
}

}  // namespace wetmax
