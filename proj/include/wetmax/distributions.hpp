#pragma once

// Closed-form evaluation of the limit law of the wet-period maximum and of the
// component laws it is assembled from. Everything here is a pure function.

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "wetmax/errors.hpp"
#include "wetmax/params.hpp"

namespace wetmax {

/// log Gamma(x) for x > 0. Reentrant, unlike std::lgamma which writes signgam.
inline double log_gamma(double x) { return boost::math::lgamma(x); }

namespace detail {

/// log(1 + e^z) without overflow.
inline double log1p_exp(double z) {
  if (z > 35.0) return z + std::exp(-z);
  return std::log1p(std::exp(z));
}

inline void require_nonneg_x(double x) {
  if (!(x >= 0.0)) throw InvalidArgument("x must be >= 0, got " + std::to_string(x));
}

inline void require_positive_x(double x) {
  if (!(x > 0.0)) throw InvalidArgument("x must be > 0, got " + std::to_string(x));
}

inline void require_mixing_shape(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    throw InvalidArgument("mixing densities need r in (0, 1), got " + std::to_string(r));
  }
}

}  // namespace detail

// --- limit law -------------------------------------------------------------

/// F(x; r, lambda, gamma) = (lambda x^gamma / (1 + lambda x^gamma))^r, x >= 0.
inline double limit_cdf(double x, const ModelParams& p) {
  detail::require_nonneg_x(x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  // log t with t = lambda x^gamma; F = exp(-r log(1 + 1/t))
  const double log_t = std::log(p.lambda()) + p.gamma() * std::log(x);
  return std::exp(-p.r() * detail::log1p_exp(-log_t));
}

/// log of the density r gamma lambda^r x^(gamma r - 1) / (1 + lambda x^gamma)^(r+1), x > 0.
inline double limit_log_pdf(double x, const ModelParams& p) {
  detail::require_positive_x(x);
  const double log_x = std::log(x);
  const double log_t = std::log(p.lambda()) + p.gamma() * log_x;
  return std::log(p.r() * p.gamma()) + p.r() * std::log(p.lambda()) +
         (p.gamma() * p.r() - 1.0) * log_x - (p.r() + 1.0) * detail::log1p_exp(log_t);
}

/// Density of the limit law. Rejects x <= 0: at the origin it diverges when gamma r < 1.
inline double limit_pdf(double x, const ModelParams& p) { return std::exp(limit_log_pdf(x, p)); }

/// Quantile of order eps: (eps^(1/r) / (lambda - lambda eps^(1/r)))^(1/gamma).
inline double limit_quantile(double eps, const ModelParams& p) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidArgument("quantile order must lie in (0, 1), got " + std::to_string(eps));
  }
  const double log_t = std::log(eps) / p.r();
  const double log_one_minus_t = std::log(-std::expm1(log_t));
  return std::exp((log_t - std::log(p.lambda()) - log_one_minus_t) / p.gamma());
}

/// E M^delta = Gamma(r + delta/gamma) Gamma(1 - delta/gamma) / (lambda^(delta/gamma) Gamma(r)).
/// Finite only for 0 < delta < gamma.
inline double limit_moment(double delta, const ModelParams& p) {
  if (!(delta > 0.0)) throw InvalidArgument("moment order must be > 0");
  if (delta >= p.gamma()) {
    throw MomentNotFinite("moment of order " + std::to_string(delta) +
                          " does not exist: the tail exponent is " + std::to_string(p.gamma()));
  }
  const double ratio = delta / p.gamma();
  return std::exp(log_gamma(p.r() + ratio) + log_gamma(1.0 - ratio) -
                  ratio * std::log(p.lambda()) - log_gamma(p.r()));
}

// --- component laws --------------------------------------------------------

inline double gamma_pdf(double x, const GammaParams& g) {
  detail::require_nonneg_x(x);
  if (x == 0.0) {
    if (g.r() < 1.0) return INFINITY;
    return g.r() == 1.0 ? g.lambda() : 0.0;
  }
  return std::exp(g.r() * std::log(g.lambda()) - log_gamma(g.r()) + (g.r() - 1.0) * std::log(x) -
                  g.lambda() * x);
}

/// Generalized gamma density |gamma| lambda^r x^(gamma r - 1) e^(-lambda x^gamma) / Gamma(r), x > 0.
inline double gg_pdf(double x, const GGParams& g) {
  detail::require_positive_x(x);
  const double log_x = std::log(x);
  return std::exp(std::log(std::abs(g.gamma())) + g.r() * std::log(g.lambda()) - log_gamma(g.r()) +
                  (g.gamma() * g.r() - 1.0) * log_x - g.lambda() * std::exp(g.gamma() * log_x));
}

/// Weibull d.f. 1 - exp(-x^gamma).
inline double weibull_cdf(double x, double gamma) {
  detail::require_nonneg_x(x);
  detail::require_positive(gamma, "Weibull exponent");
  return -std::expm1(-std::pow(x, gamma));
}

/// Frechet d.f. exp(-x^(-gamma)), the law of 1 / W_gamma.
inline double frechet_cdf(double x, double gamma) {
  detail::require_nonneg_x(x);
  detail::require_positive(gamma, "Frechet exponent");
  if (x == 0.0) return 0.0;
  return std::exp(-std::pow(x, -gamma));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// D.f. of the one-sided stable law with alpha = 1/2 (Laplace transform exp(-sqrt(s))):
/// erfc(1 / (2 sqrt(x))) = 2 (1 - Phi(1 / sqrt(2x))).
inline double levy_cdf(double x) {
  detail::require_nonneg_x(x);
  if (x == 0.0) return 0.0;
  return std::erfc(0.5 / std::sqrt(x));
}

/// P(N = k) for the negative binomial law, evaluated through log-gamma.
inline double negbin_log_pmf(long long k, const NegBinParams& nb) {
  if (k < 0) throw InvalidArgument("negative binomial support is k >= 0");
  const double kd = static_cast<double>(k);
  return log_gamma(nb.r() + kd) - log_gamma(kd + 1.0) - log_gamma(nb.r()) +
         nb.r() * std::log(nb.p()) + kd * std::log1p(-nb.p());
}

inline double negbin_pmf(long long k, const NegBinParams& nb) {
  return std::exp(negbin_log_pmf(k, nb));
}

/// Density of the random success-odds Z in the mixed geometric form of NB(r, p), r in (0,1):
/// mu^r / (Gamma(1-r) Gamma(r)) * 1(z >= mu) / ((z - mu)^r z). Infinite at z = mu.
inline double mixing_density_z(double z, double r, double mu) {
  detail::require_mixing_shape(r);
  detail::require_positive(mu, "mu");
  if (z < mu) return 0.0;
  if (z == mu) return INFINITY;
  return std::exp(r * std::log(mu) - log_gamma(1.0 - r) - log_gamma(r) - r * std::log(z - mu) -
                  std::log(z));
}

/// The same density at z = mu + d with the offset d > 0 given exactly. Most of the mass sits
/// within rounding distance of mu when r is close to 1, so integrals must be taken in d.
inline double mixing_density_z_offset(double d, double r, double mu) {
  detail::require_mixing_shape(r);
  detail::require_positive(mu, "mu");
  if (!(d > 0.0)) return d == 0.0 ? INFINITY : 0.0;
  return std::exp(r * std::log(mu) - log_gamma(1.0 - r) - log_gamma(r) - r * std::log(d) -
                  std::log(mu + d));
}

namespace detail {
/// log h(y; r, p) from the two endpoint distances a = y - p and b = 1 - y.
inline double mixing_log_density_y(double a, double b, double r, double p) {
  return r * std::log(p) - log_gamma(1.0 - r) - log_gamma(r) + (r - 1.0) * std::log(b) -
         std::log(p + a) - r * std::log(a);
}
}  // namespace detail

/// Density of the random success probability Y in the mixed geometric form, r in (0,1):
/// p^r / (Gamma(1-r) Gamma(r)) * (1-y)^(r-1) / (y (y-p)^r) on p < y < 1.
inline double mixing_density_y(double y, double r, double p) {
  detail::require_mixing_shape(r);
  detail::require_open_unit(p, "p");
  if (!(y > p && y < 1.0)) return 0.0;
  return std::exp(detail::mixing_log_density_y(y - p, 1.0 - y, r, p));
}

/// h at y = p + a, with a in (0, 1 - p) given exactly (integration near the left singularity).
inline double mixing_density_y_from_left(double a, double r, double p) {
  detail::require_mixing_shape(r);
  detail::require_open_unit(p, "p");
  if (!(a > 0.0 && a < 1.0 - p)) return 0.0;
  return std::exp(detail::mixing_log_density_y(a, (1.0 - p) - a, r, p));
}

/// h at y = 1 - b, with b in (0, 1 - p) given exactly (integration near the right singularity).
inline double mixing_density_y_from_right(double b, double r, double p) {
  detail::require_mixing_shape(r);
  detail::require_open_unit(p, "p");
  if (!(b > 0.0 && b < 1.0 - p)) return 0.0;
  return std::exp(detail::mixing_log_density_y((1.0 - p) - b, b, r, p));
}

namespace detail {
inline void require_ratio_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("stable ratio needs alpha in (0, 1), got " + std::to_string(alpha));
  }
}
}  // namespace detail

/// Density of R = S / S' for i.i.d. one-sided stable S, S' with index alpha in (0,1).
inline double stable_ratio_density(double x, double alpha) {
  detail::require_ratio_alpha(alpha);
  detail::require_positive_x(x);
  const double pa = std::numbers::pi * alpha;
  const double xa = std::pow(x, alpha);
  return std::sin(pa) * xa / x / (std::numbers::pi * (1.0 + xa * xa + 2.0 * xa * std::cos(pa)));
}

/// D.f. of R, obtained by integrating the density after the substitution y = x^alpha.
inline double stable_ratio_cdf(double x, double alpha) {
  detail::require_ratio_alpha(alpha);
  detail::require_nonneg_x(x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double pa = std::numbers::pi * alpha;
  const double xa = std::pow(x, alpha);
  const double angle = std::atan((xa + std::cos(pa)) / std::sin(pa));
  return (angle - (0.5 * std::numbers::pi - pa)) / pa;
}

/// E S^beta = Gamma(1 - beta/alpha) / Gamma(1 - beta) for 0 < beta < alpha <= 1.
inline double stable_moment(double alpha, double beta) {
  const StableIndex idx(alpha);
  if (!(beta > 0.0 && beta < idx.alpha())) {
    throw InvalidArgument("stable moment needs 0 < beta < alpha");
  }
  return std::exp(log_gamma(1.0 - beta / alpha) - log_gamma(1.0 - beta));
}

/// Snedecor-Fisher density with parameters (r, 1): r^(r+1) x^(r-1) / (1 + r x)^(r+1), x >= 0.
/// This is the F(2r, 2) law, i.e. the law of G_{r,1} / (r G_{1,1}).
inline double snedecor_fisher_density(double x, double r) {
  detail::require_nonneg_x(x);
  detail::require_positive(r, "r");
  if (x == 0.0) {
    if (r < 1.0) return INFINITY;
    return r == 1.0 ? 1.0 : 0.0;
  }
  return std::exp((r + 1.0) * std::log(r) + (r - 1.0) * std::log(x) -
                  (r + 1.0) * std::log1p(r * x));
}

}  // namespace wetmax
