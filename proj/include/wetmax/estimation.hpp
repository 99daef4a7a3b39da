#pragma once

// Estimators for (r, lambda, gamma) from a sample of wet-period maxima, and the
// negative binomial fit of wet-period durations.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "wetmax/distributions.hpp"
#include "wetmax/errors.hpp"
#include "wetmax/gof.hpp"
#include "wetmax/nelder_mead.hpp"
#include "wetmax/params.hpp"
#include "wetmax/sample.hpp"

namespace wetmax {

/// Probabilities 0 < p1 < p2 < p3 < 1 whose sample quantiles are matched.
class QuantileTriple {
 public:
  QuantileTriple(double p1, double p2, double p3) : p_{p1, p2, p3} {
    if (!(p1 > 0.0 && p1 < p2 && p2 < p3 && p3 < 1.0)) {
      throw InvalidArgument("quantile triple needs 0 < p1 < p2 < p3 < 1");
    }
  }

  /// p_k = k / 4.
  static QuantileTriple quarters() { return {0.25, 0.5, 0.75}; }

  /// (tau, 1/2, 1 - tau) for tau in (0, 1/4).
  static QuantileTriple symmetric(double tau) {
    if (!(tau > 0.0 && tau < 0.25)) {
      throw InvalidArgument("tau must lie in (0, 1/4), got " + std::to_string(tau));
    }
    return {tau, 0.5, 1.0 - tau};
  }

  [[nodiscard]] double p1() const noexcept { return p_[0]; }
  [[nodiscard]] double p2() const noexcept { return p_[1]; }
  [[nodiscard]] double p3() const noexcept { return p_[2]; }
  [[nodiscard]] double operator[](std::size_t k) const { return p_.at(k); }

 private:
  std::array<double, 3> p_;
};

/// 1-based index [m p] of the order statistic matched to probability p, clamped to [1, m].
inline std::size_t quantile_index(std::size_t m, double p) {
  const auto idx = static_cast<std::size_t>(std::floor(static_cast<double>(m) * p));
  return std::clamp<std::size_t>(idx, 1, m);
}

// --- rough quantile method ----------------------------------------------------

struct QuantileSolution {
  ModelParams params;
  double s;         ///< 1 / r
  double residual;  ///< value of the scalar root function at s
};

namespace detail {

// log(1 - p^s)
inline double log1m_pow(double p, double s) { return std::log(-std::expm1(s * std::log(p))); }

inline double quantile_gamma(double s, const QuantileTriple& q, double log_x1, double log_x3) {
  return (s * (std::log(q.p1()) - std::log(q.p3())) + log1m_pow(q.p3(), s) -
          log1m_pow(q.p1(), s)) /
         (log_x1 - log_x3);
}

inline double quantile_lambda(double s, double gamma, const QuantileTriple& q, double log_x2) {
  return std::exp(s * std::log(q.p2()) - log1m_pow(q.p2(), s) - gamma * log_x2);
}

}  // namespace detail

/// Root function of s = 1/r for the three-quantile system:
/// C s - [log((1-p3^s)/(1-p1^s)) log(x1/x2) - log((1-p2^s)/(1-p1^s)) log(x1/x3)].
inline double quantile_root_function(double s, double x1, double x2, double x3,
                                     const QuantileTriple& q) {
  const double l12 = std::log(x1 / x2);
  const double l13 = std::log(x1 / x3);
  const double c = l13 * std::log(q.p1() / q.p2()) - l12 * std::log(q.p1() / q.p3());
  const double a1 = detail::log1m_pow(q.p1(), s);
  const double a2 = detail::log1m_pow(q.p2(), s);
  const double a3 = detail::log1m_pow(q.p3(), s);
  return c * s - ((a3 - a1) * l12 - (a2 - a1) * l13);
}

inline constexpr double kQuantileRootLo = 1e-3;
inline constexpr double kQuantileRootHi = 1e3;
inline constexpr std::size_t kQuantileRootGrid = 601;

/// Solves x_k = ((p_k^s / (lambda - lambda p_k^s))^(1/gamma), k = 1..3, for (s, gamma, lambda).
/// s is bracketed by a sign-change scan over a log-spaced grid on [1e-3, 1e3] and refined by
/// bisection; the smallest root is taken.
inline QuantileSolution solve_quantile_system(double x1, double x2, double x3,
                                              const QuantileTriple& q) {
  if (!(x1 > 0.0) || !(x1 < x2 && x2 < x3)) {
    throw DegenerateSample("matched order statistics must be positive and strictly increasing");
  }
  auto f = [&](double s) { return quantile_root_function(s, x1, x2, x3, q); };

  const double log_lo = std::log(kQuantileRootLo);
  const double step = (std::log(kQuantileRootHi) - log_lo) / double(kQuantileRootGrid - 1);
  std::optional<double> root;
  double prev_s = kQuantileRootLo;
  double prev_f = f(prev_s);
  if (prev_f == 0.0) root = prev_s;
  for (std::size_t i = 1; i < kQuantileRootGrid && !root; ++i) {
    const double s = std::exp(log_lo + step * double(i));
    const double fs = f(s);
    if (fs == 0.0) {
      root = s;
    } else if ((prev_f < 0.0) != (fs < 0.0)) {
      double lo = prev_s;
      double hi = s;
      double f_lo = prev_f;
      for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((f_lo < 0.0) == (f_mid < 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      root = 0.5 * (lo + hi);
    }
    prev_s = s;
    prev_f = fs;
  }
  if (!root) {
    throw BracketingFailure("no sign change of the quantile root function on s in [1e-3, 1e3]");
  }
  const double s = *root;
  const double gamma = detail::quantile_gamma(s, q, std::log(x1), std::log(x3));
  const double lambda = detail::quantile_lambda(s, gamma, q, std::log(x2));
  return {ModelParams(1.0 / s, lambda, gamma), s, f(s)};
}

inline std::array<double, 3> matched_order_stats(const MaximaSample& sample,
                                                 const QuantileTriple& q) {
  const std::size_t m = sample.size();
  return {sample.order_stat(quantile_index(m, q.p1())),
          sample.order_stat(quantile_index(m, q.p2())),
          sample.order_stat(quantile_index(m, q.p3()))};
}

/// Rough three-quantile estimate of (r, lambda, gamma).
inline ModelParams fit_quantile(const MaximaSample& sample,
                                const QuantileTriple& q = QuantileTriple::quarters()) {
  if (sample.size() < 4) throw DegenerateSample("quantile fitting needs m >= 4");
  const auto x = matched_order_stats(sample, q);
  return solve_quantile_system(x[0], x[1], x[2], q).params;
}

/// Rough estimate of (lambda, gamma) with r known: the closed forms for gamma and lambda
/// evaluated at s = 1/r.
inline ModelParams fit_quantile_known_r(const MaximaSample& sample, double r,
                                        const QuantileTriple& q = QuantileTriple::quarters()) {
  detail::require_positive(r, "r");
  if (sample.size() < 4) throw DegenerateSample("quantile fitting needs m >= 4");
  const auto x = matched_order_stats(sample, q);
  if (!(x[0] < x[2])) throw DegenerateSample("matched order statistics p1 and p3 coincide");
  const double s = 1.0 / r;
  const double gamma = detail::quantile_gamma(s, q, std::log(x[0]), std::log(x[2]));
  const double lambda = detail::quantile_lambda(s, gamma, q, std::log(x[1]));
  return ModelParams(r, lambda, gamma);
}

struct TauScanResult {
  ModelParams params;
  double tau;
  double ks_distance;
};

/// Fits (tau, 1/2, 1 - tau) for every tau and keeps the fit closest to the empirical d.f. in
/// uniform distance; ties go to the smaller tau.
inline TauScanResult fit_quantile_tau_scan(const MaximaSample& sample,
                                           std::span<const double> tau_grid) {
  if (tau_grid.empty()) throw InvalidArgument("tau grid is empty");
  std::optional<TauScanResult> best;
  std::vector<std::pair<double, std::string>> failures;
  for (const double tau : tau_grid) {
    try {
      const ModelParams fit = fit_quantile(sample, QuantileTriple::symmetric(tau));
      const double ks = ks_model(sample, fit).ks_distance;
      if (!best || ks < best->ks_distance || (ks == best->ks_distance && tau < best->tau)) {
        best = TauScanResult{fit, tau, ks};
      }
    } catch (const Error& e) {
      failures.emplace_back(tau, e.what());
    }
  }
  if (!best) {
    std::string msg = "quantile fit failed for every tau:";
    for (const auto& [tau, why] : failures) msg += " [tau=" + std::to_string(tau) + ": " + why + "]";
    throw TauScanFailure(msg, std::move(failures));
  }
  return *best;
}

// --- least squares with r known -----------------------------------------------

struct LeastSquaresFit {
  double lambda;
  double gamma;
};

/// Regression targets c_i = log(i^(1/r) / (m^(1/r) - i^(1/r))), i = 1..m-1.
inline std::vector<double> least_squares_targets(std::size_t m, double r) {
  std::vector<double> c(m - 1);
  const double log_m = std::log(static_cast<double>(m));
  for (std::size_t i = 1; i < m; ++i) {
    const double t = (std::log(static_cast<double>(i)) - log_m) / r;  // log (i/m)^(1/r)
    c[i - 1] = t - std::log(-std::expm1(t));
  }
  return c;
}

/// Sum over i = 1..m-1 of (log lambda + gamma log X*_(i) - c_i)^2.
inline double least_squares_objective(const MaximaSample& sample, double r, double log_lambda,
                                      double gamma) {
  const auto c = least_squares_targets(sample.size(), r);
  const auto x = sample.sorted();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double e = log_lambda + gamma * std::log(x[i]) - c[i];
    sum += e * e;
  }
  return sum;
}

/// Closed-form least-squares fit of log lambda + gamma log X*_(i) ~ c_i over i = 1..m-1
/// (the top order statistic has c_m = +inf and is excluded).
inline LeastSquaresFit fit_least_squares(const MaximaSample& sample, double r) {
  detail::require_positive(r, "r");
  const std::size_t m = sample.size();
  if (m < 3) throw DegenerateSample("least squares needs m >= 3");
  const auto c = least_squares_targets(m, r);
  const auto x = sample.sorted();
  const double n = static_cast<double>(m - 1);

  double mean_l = 0.0;
  double mean_c = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    mean_l += std::log(x[i]);
    mean_c += c[i];
  }
  mean_l /= n;
  mean_c /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double dl = std::log(x[i]) - mean_l;
    sxx += dl * dl;
    sxy += dl * (c[i] - mean_c);
  }
  if (!(sxx > 0.0)) throw ZeroVariance("least squares: the order statistics X*_(1..m-1) are all equal");
  const double gamma = sxy / sxx;
  if (!(gamma > 0.0)) throw EstimationError("least squares produced a nonpositive gamma");
  return {std::exp(mean_c - gamma * mean_l), gamma};
}

// --- maximum likelihood ---------------------------------------------------------

enum class FitMethod { QuantileRough, LeastSquares, MLE };

inline std::string_view to_string(FitMethod m) {
  switch (m) {
    case FitMethod::QuantileRough: return "quantile";
    case FitMethod::LeastSquares: return "ls";
    case FitMethod::MLE: return "mle";
  }
  return "unknown";
}

struct FitReport {
  ModelParams params;
  FitMethod method;
  double ks_distance = 0.0;
  std::optional<double> log_likelihood;  ///< MLE only
  std::size_t iterations = 0;
  bool converged = true;
  std::optional<double> tau;  ///< quantile method with a tau scan

  friend bool operator==(const FitReport&, const FitReport&) = default;
};

inline FitReport make_report(const MaximaSample& sample, const ModelParams& p, FitMethod method) {
  return FitReport{p, method, ks_model(sample, p).ks_distance, std::nullopt, 0, true, std::nullopt};
}

inline double log_likelihood(const MaximaSample& sample, const ModelParams& p) {
  double sum = 0.0;
  for (const double x : sample.values()) sum += limit_log_pdf(x, p);
  return sum;
}

/// Maximum likelihood over (log r, log lambda, log gamma), or (log lambda, log gamma) with r
/// frozen, by downhill simplex. Stops at simplex diameter 1e-8 or 2000 iterations.
inline FitReport fit_mle(const MaximaSample& sample, const ModelParams& init, bool fix_r = false) {
  std::vector<double> log_x(sample.values().begin(), sample.values().end());
  for (double& v : log_x) v = std::log(v);
  const double sum_log_x = [&] {
    double s = 0.0;
    for (const double v : log_x) s += v;
    return s;
  }();

  // negative log-likelihood from log-parameters
  auto nll = [&](double lr, double ll, double lg) {
    const double r = std::exp(lr);
    const double gamma = std::exp(lg);
    double acc = 0.0;
    for (const double v : log_x) acc += detail::log1p_exp(ll + gamma * v);
    const double n = static_cast<double>(log_x.size());
    return -(n * (lr + lg + r * ll) + (gamma * r - 1.0) * sum_log_x - (r + 1.0) * acc);
  };

  const double fixed_lr = std::log(init.r());
  const double start_value = nll(fixed_lr, std::log(init.lambda()), std::log(init.gamma()));
  if (!std::isfinite(start_value)) throw InvalidStart("log-likelihood is not finite at the start");

  NelderMeadResult res;
  if (fix_r) {
    res = nelder_mead([&](const std::vector<double>& t) { return nll(fixed_lr, t[0], t[1]); },
                      {std::log(init.lambda()), std::log(init.gamma())});
    res.x.insert(res.x.begin(), fixed_lr);
  } else {
    res = nelder_mead([&](const std::vector<double>& t) { return nll(t[0], t[1], t[2]); },
                      {fixed_lr, std::log(init.lambda()), std::log(init.gamma())});
  }
  const ModelParams fitted(fix_r ? init.r() : std::exp(res.x[0]), std::exp(res.x[1]),
                           std::exp(res.x[2]));
  FitReport report = make_report(sample, fitted, FitMethod::MLE);
  report.log_likelihood = -res.value;
  report.iterations = res.iterations;
  report.converged = res.converged;
  return report;
}

// --- negative binomial durations -------------------------------------------------

struct NegBinFit {
  NegBinParams params;
  double r_moments;  ///< method-of-moments starting value
  double log_likelihood;
  std::size_t n;
};

/// Fits NB(r, p) to wet-period lengths shifted by one (length - 1, so a one-day period maps to
/// 0). Moments start the search; r is then chosen by maximizing the likelihood with p profiled
/// out as p = r / (r + mean).
inline NegBinFit fit_negbin(std::span<const long long> durations) {
  if (durations.size() < 2) throw InvalidArgument("negative binomial fit needs >= 2 durations");
  std::map<long long, double> counts;
  double sum = 0.0;
  for (const long long d : durations) {
    if (d < 1) throw InvalidArgument("wet-period durations must be >= 1");
    counts[d - 1] += 1.0;
    sum += static_cast<double>(d - 1);
  }
  const double n = static_cast<double>(durations.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& [k, c] : counts) ss += c * (double(k) - mean) * (double(k) - mean);
  const double var = ss / (n - 1.0);
  if (!(var > mean) || mean == 0.0) {
    throw NoOverdispersion("sample variance " + std::to_string(var) + " does not exceed mean " +
                           std::to_string(mean) + " (Poisson/geometric boundary, no NB fit with r > 0)");
  }
  const double r_moments = mean * mean / (var - mean);

  auto profile_nll = [&](double log_r) {
    const double r = std::exp(log_r);
    const double p = r / (r + mean);
    double ll = n * r * std::log(p) + sum * std::log1p(-p);
    for (const auto& [k, c] : counts) {
      ll += c * (log_gamma(r + double(k)) - log_gamma(r) - log_gamma(double(k) + 1.0));
    }
    return -ll;
  };

  double lo = std::log(r_moments) - 5.0;
  double hi = std::log(r_moments) + 5.0;
  std::pair<double, double> best;
  for (int expand = 0;; ++expand) {
    best = boost::math::tools::brent_find_minima(profile_nll, lo, hi, 52);
    const bool at_hi = hi - best.first < 1e-6;
    const bool at_lo = best.first - lo < 1e-6;
    if (!at_hi && !at_lo) break;
    if (expand == 8) {
      if (at_hi) throw NoOverdispersion("likelihood increases without bound in r (no overdispersion)");
      break;
    }
    if (at_hi) hi += 5.0;
    if (at_lo) lo -= 5.0;
  }
  const double r = std::exp(best.first);
  return {NegBinParams(r, r / (r + mean)), r_moments, -best.second, durations.size()};
}

}  // namespace wetmax
