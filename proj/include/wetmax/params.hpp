#pragma once

#include <cmath>
#include <string>

#include "wetmax/errors.hpp"

namespace wetmax {

namespace detail {

inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(name) + " must be finite and > 0, got " + std::to_string(v));
  }
}

inline void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw InvalidArgument(std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
  }
}

}  // namespace detail

/// Parameters (r, lambda, gamma) of the limit law
/// F(x) = (lambda x^gamma / (1 + lambda x^gamma))^r.
class ModelParams {
 public:
  ModelParams(double r, double lambda, double gamma) : r_(r), lambda_(lambda), gamma_(gamma) {
    detail::require_positive(r, "r");
    detail::require_positive(lambda, "lambda");
    detail::require_positive(gamma, "gamma");
  }

  [[nodiscard]] double r() const noexcept { return r_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double r_;
  double lambda_;
  double gamma_;
};

/// Gamma law with shape r and rate lambda (density lambda^r x^(r-1) e^(-lambda x) / Gamma(r)).
class GammaParams {
 public:
  GammaParams(double r, double lambda) : r_(r), lambda_(lambda) {
    detail::require_positive(r, "gamma shape r");
    detail::require_positive(lambda, "gamma rate lambda");
  }

  [[nodiscard]] double r() const noexcept { return r_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }

  friend bool operator==(const GammaParams&, const GammaParams&) = default;

 private:
  double r_;
  double lambda_;
};

/// Generalized gamma law: power transform G^(1/gamma) of a gamma variate. gamma may be negative.
class GGParams {
 public:
  GGParams(double r, double gamma, double lambda) : r_(r), gamma_(gamma), lambda_(lambda) {
    detail::require_positive(r, "r");
    detail::require_positive(lambda, "lambda");
    if (gamma == 0.0 || !std::isfinite(gamma)) {
      throw InvalidArgument("generalized gamma power must be finite and nonzero");
    }
  }

  [[nodiscard]] double r() const noexcept { return r_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }

 private:
  double r_;
  double gamma_;
  double lambda_;
};

/// Negative binomial law on {0, 1, 2, ...}: P(k) = Gamma(r+k) p^r (1-p)^k / (k! Gamma(r)).
class NegBinParams {
 public:
  NegBinParams(double r, double p) : r_(r), p_(p) {
    detail::require_positive(r, "negative binomial shape r");
    detail::require_open_unit(p, "negative binomial p");
  }

  [[nodiscard]] double r() const noexcept { return r_; }
  [[nodiscard]] double p() const noexcept { return p_; }
  /// Rate of the gamma mixing law, p / (1 - p).
  [[nodiscard]] double mu() const noexcept { return p_ / (1.0 - p_); }
  [[nodiscard]] double mean() const noexcept { return r_ * (1.0 - p_) / p_; }

  friend bool operator==(const NegBinParams&, const NegBinParams&) = default;

 private:
  double r_;
  double p_;
};

/// Characteristic exponent of a one-sided strictly stable law (Laplace transform exp(-s^alpha)).
class StableIndex {
 public:
  explicit StableIndex(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw InvalidArgument("stable index alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
  }

  [[nodiscard]] double alpha() const noexcept { return alpha_; }

 private:
  double alpha_;
};

}  // namespace wetmax
