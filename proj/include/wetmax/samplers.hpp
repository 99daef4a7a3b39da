#pragma once

// Random variate generation for the limit law and every law it is built from.
// All samplers are templates over a 64-bit generator (see Rng64) and carry no state of
// their own: the variate sequence is a pure function of the generator state.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "wetmax/distributions.hpp"
#include "wetmax/errors.hpp"
#include "wetmax/params.hpp"
#include "wetmax/rng.hpp"

namespace wetmax {

/// Uniform variate on the open interval (0, 1), 53-bit resolution.
template <Rng64 G>
double uniform_open(G& g) {
  return (static_cast<double>(g() >> 11U) + 0.5) * 0x1.0p-53;
}

/// Standard exponential, W_1.
template <Rng64 G>
double sample_exponential(G& g) {
  return -std::log(uniform_open(g));
}

/// Standard normal by Marsaglia's polar method; the second variate of each pair is dropped so
/// that the sampler stays stateless.
template <Rng64 G>
double sample_normal(G& g) {
  for (;;) {
    const double u = 2.0 * uniform_open(g) - 1.0;
    const double v = 2.0 * uniform_open(g) - 1.0;
    const double s = u * u + v * v;
    if (s < 1.0 && s > 0.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

namespace detail {

// Marsaglia-Tsang squeeze for shape >= 1, unit rate.
template <Rng64 G>
double gamma_shape_at_least_one(double shape, G& g) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = sample_normal(g);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(g);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace detail

/// Gamma variate with unit rate. For shape < 1 the shape+1 variate is boosted by U^(1/shape).
template <Rng64 G>
double sample_gamma_unit(double shape, G& g) {
  if (shape == 1.0) return sample_exponential(g);
  if (shape > 1.0) return detail::gamma_shape_at_least_one(shape, g);
  const double boosted = detail::gamma_shape_at_least_one(shape + 1.0, g);
  const double value = boosted * std::pow(uniform_open(g), 1.0 / shape);
  // underflow is only reachable for shapes far below the model's range
  return value > 0.0 ? value : std::numeric_limits<double>::min();
}

/// G_{r,lambda}: gamma variate with shape r and rate lambda.
template <Rng64 G>
double sample_gamma(const GammaParams& p, G& g) {
  return sample_gamma_unit(p.r(), g) / p.lambda();
}

/// W_gamma with d.f. 1 - exp(-x^gamma), generated as W_1^(1/gamma).
template <Rng64 G>
double sample_weibull(double gamma, G& g) {
  detail::require_positive(gamma, "Weibull exponent");
  return std::pow(sample_exponential(g), 1.0 / gamma);
}

/// Pareto variate with P(Pi > x) = 1 / (1 + x), x >= 0.
template <Rng64 G>
double sample_pareto_unit(G& g) {
  const double u = uniform_open(g);
  return (1.0 - u) / u;
}

/// One-sided strictly stable S_{alpha,1} with Laplace transform exp(-s^alpha), via Kanter's
/// representation S = (A(U) / W_1)^((1-alpha)/alpha) with U uniform on (0, pi). alpha = 1 is
/// the point mass at 1.
template <Rng64 G>
double sample_stable_onesided(const StableIndex& idx, G& g) {
  const double alpha = idx.alpha();
  if (alpha == 1.0) return 1.0;
  const double u = std::numbers::pi * uniform_open(g);
  const double e = sample_exponential(g);
  const double log_sin_au = std::log(std::sin(alpha * u));
  const double log_a = (log_sin_au - std::log(std::sin(u))) / (1.0 - alpha) +
                       std::log(std::sin((1.0 - alpha) * u)) - log_sin_au;
  return std::exp((1.0 - alpha) / alpha * (log_a - std::log(e)));
}

/// R_alpha = S / S' for independent one-sided stable variates, alpha in (0, 1).
template <Rng64 G>
double sample_stable_ratio(double alpha, G& g) {
  detail::require_ratio_alpha(alpha);
  const StableIndex idx(alpha);
  const double num = sample_stable_onesided(idx, g);
  return num / sample_stable_onesided(idx, g);
}

namespace detail {

// Z_{r,mu} = mu (G_r + G_{1-r}) / G_r, extended to r = 1 where it is the constant mu.
template <Rng64 G>
double mixing_z_closed(double r, double mu, G& g) {
  if (r == 1.0) return mu;
  const double gr = sample_gamma_unit(r, g);
  const double gc = sample_gamma_unit(1.0 - r, g);
  return mu * (gr + gc) / gr;
}

// R_gamma extended to gamma = 1 (ratio of two point masses at 1).
template <Rng64 G>
double stable_ratio_closed(double gamma, G& g) {
  if (gamma == 1.0) return 1.0;
  return sample_stable_ratio(gamma, g);
}

}  // namespace detail

/// Z_{r,mu}, the random success odds of the mixed geometric form of NB(r, p); r in (0, 1).
template <Rng64 G>
double sample_Z(double r, double mu, G& g) {
  detail::require_mixing_shape(r);
  detail::require_positive(mu, "mu");
  return detail::mixing_z_closed(r, mu, g);
}

/// F(2r, 2) variate, i.e. the law with density snedecor_fisher_density(x, r).
template <Rng64 G>
double sample_snedecor_fisher(double r, G& g) {
  detail::require_positive(r, "r");
  const double num = sample_gamma_unit(r, g) / r;
  return num / sample_gamma_unit(1.0, g);
}

/// Poisson variate. Multiplication method below mean 10, Hormann's PTRS above.
template <Rng64 G>
std::uint64_t sample_poisson(double mean, G& g) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidArgument("Poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = uniform_open(g);
    while (prod > limit) {
      ++k;
      prod *= uniform_open(g);
    }
    return k;
  }
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = uniform_open(g) - 0.5;
    const double v = uniform_open(g);
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * log_mean - log_gamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

/// Negative binomial variate as a gamma-mixed Poisson: N = P(G_{r,mu}), mu = p / (1 - p).
template <Rng64 G>
std::uint64_t sample_negbin(const NegBinParams& nb, G& g) {
  return sample_poisson(sample_gamma_unit(nb.r(), g) / nb.mu(), g);
}

// --- limit law ----------------------------------------------------------------

/// Product representations of the limit variable M_{r,gamma,lambda}. Every tag yields the
/// same law; all but Direct and SnedecorFisher require r and gamma in (0, 1].
enum class RepresentationTag {
  Direct,            ///< G_{r,lambda}^(1/gamma) / W_gamma
  StableForm,        ///< G_{r,lambda}^(1/gamma) S_{gamma,1} / W_1
  WeibullRatio,      ///< (W_gamma / W'_gamma) Z_{r,lambda}^(-1/gamma)
  ParetoRatio,       ///< Pi R_gamma Z_{r,lambda}^(-1/gamma)
  FoldedNormal,      ///< |X| sqrt(2 W_1) R_gamma / (W'_1 Z_{r,lambda}^(1/gamma))
  MixedExponential,  ///< W_1 / U with random rate U = W'_1 R_gamma Z_{r,lambda}^(1/gamma)
  SnedecorFisher,    ///< (r Q_{r,1} / lambda)^(1/gamma)
};

inline constexpr std::array kAllRepresentationTags = {
    RepresentationTag::Direct,       RepresentationTag::StableForm,
    RepresentationTag::WeibullRatio, RepresentationTag::ParetoRatio,
    RepresentationTag::FoldedNormal, RepresentationTag::MixedExponential,
    RepresentationTag::SnedecorFisher,
};

inline std::string_view to_string(RepresentationTag tag) {
  switch (tag) {
    case RepresentationTag::Direct: return "direct";
    case RepresentationTag::StableForm: return "stable";
    case RepresentationTag::WeibullRatio: return "weibull-ratio";
    case RepresentationTag::ParetoRatio: return "pareto-ratio";
    case RepresentationTag::FoldedNormal: return "folded-normal";
    case RepresentationTag::MixedExponential: return "mixed-exponential";
    case RepresentationTag::SnedecorFisher: return "snedecor-fisher";
  }
  return "unknown";
}

inline std::optional<RepresentationTag> parse_representation_tag(std::string_view name) {
  for (auto tag : kAllRepresentationTags) {
    if (to_string(tag) == name) return tag;
  }
  return std::nullopt;
}

inline bool requires_unit_exponents(RepresentationTag tag) {
  return tag != RepresentationTag::Direct && tag != RepresentationTag::SnedecorFisher;
}

/// Throws RepresentationDomainError when `tag` is not valid at `p`.
inline void check_representation(const ModelParams& p, RepresentationTag tag) {
  if (requires_unit_exponents(tag) && (p.r() > 1.0 || p.gamma() > 1.0)) {
    throw RepresentationDomainError(std::string("representation '") + std::string(to_string(tag)) +
                                    "' needs r and gamma in (0, 1]; got r=" +
                                    std::to_string(p.r()) + ", gamma=" + std::to_string(p.gamma()));
  }
}

/// One draw of M_{r,gamma,lambda} through the representation `tag`.
template <Rng64 G>
double sample_limit(const ModelParams& p, RepresentationTag tag, G& g) {
  check_representation(p, tag);
  const double r = p.r();
  const double lambda = p.lambda();
  const double gamma = p.gamma();
  const double inv_gamma = 1.0 / gamma;
  switch (tag) {
    case RepresentationTag::Direct: {
      // (G_r / lambda)^(1/gamma) / W_1^(1/gamma) with a single power
      const double gr = sample_gamma_unit(r, g) / lambda;
      return std::pow(gr / sample_exponential(g), inv_gamma);
    }
    case RepresentationTag::StableForm: {
      const double gr = sample_gamma_unit(r, g) / lambda;
      const double s = sample_stable_onesided(StableIndex(gamma), g);
      return std::pow(gr, inv_gamma) * s / sample_exponential(g);
    }
    case RepresentationTag::WeibullRatio: {
      const double w = sample_weibull(gamma, g);
      const double w_prime = sample_weibull(gamma, g);
      const double z = detail::mixing_z_closed(r, lambda, g);
      return w / w_prime / std::pow(z, inv_gamma);
    }
    case RepresentationTag::ParetoRatio: {
      const double pi = sample_pareto_unit(g);
      const double ratio = detail::stable_ratio_closed(gamma, g);
      const double z = detail::mixing_z_closed(r, lambda, g);
      return pi * ratio / std::pow(z, inv_gamma);
    }
    case RepresentationTag::FoldedNormal: {
      const double x = std::abs(sample_normal(g));
      const double w = sample_exponential(g);
      const double ratio = detail::stable_ratio_closed(gamma, g);
      const double w_prime = sample_exponential(g);
      const double z = detail::mixing_z_closed(r, lambda, g);
      return x * std::sqrt(2.0 * w) * ratio / (w_prime * std::pow(z, inv_gamma));
    }
    case RepresentationTag::MixedExponential: {
      const double w = sample_exponential(g);
      const double ratio = detail::stable_ratio_closed(gamma, g);
      const double z = detail::mixing_z_closed(r, lambda, g);
      const double rate = w * ratio * std::pow(z, inv_gamma);
      return sample_exponential(g) / rate;
    }
    case RepresentationTag::SnedecorFisher: {
      const double q = sample_snedecor_fisher(r, g);
      return std::pow(r * q / lambda, inv_gamma);
    }
  }
  throw InvalidArgument("unknown representation tag");
}

/// Pre-limit experiment behind the limit theorem: N ~ NB(r, p_n) with p_n = min(q, lambda/n),
/// then max of N i.i.d. Pareto variates with d.f. 1 - x^(-gamma), x >= 1, scaled by
/// F^(-1)(1 - 1/n) = n^(1/gamma). Returns 0 when N = 0.
///
/// The maximum of N i.i.d. draws has d.f. F^N and is produced by inverting F^N directly.
template <Rng64 G>
double simulate_prelimit_max(std::uint64_t n, const ModelParams& p, double q, G& g) {
  if (n < 1) throw InvalidArgument("pre-limit index n must be >= 1");
  detail::require_open_unit(q, "q");
  const double nd = static_cast<double>(n);
  const double pn = std::min(q, p.lambda() / nd);
  const std::uint64_t count = sample_negbin(NegBinParams(p.r(), pn), g);
  if (count == 0) return 0.0;
  // F^N(x) = u  <=>  1 - x^(-gamma) = u^(1/N)
  const double log_u_root = std::log(uniform_open(g)) / static_cast<double>(count);
  const double tail = -std::expm1(log_u_root);
  return std::exp((-std::log(tail) - std::log(nd)) / p.gamma());
}

}  // namespace wetmax
