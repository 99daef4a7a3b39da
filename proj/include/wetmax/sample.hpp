#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wetmax/errors.hpp"

namespace wetmax {

/// Per-wet-period maxima X*_1, ..., X*_m, with a sorted copy for order statistics.
class MaximaSample {
 public:
  explicit MaximaSample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw EmptySample("maxima sample is empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
        throw InvalidArgument("maxima must be finite and > 0; value #" + std::to_string(i + 1) +
                              " is " + std::to_string(values_[i]));
      }
    }
    sorted_ = values_;
    std::sort(sorted_.begin(), sorted_.end());
  }

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<const double> sorted() const noexcept { return sorted_; }

  /// Order statistic X*_(i), 1-based.
  [[nodiscard]] double order_stat(std::size_t i) const {
    if (i < 1 || i > sorted_.size()) {
      throw InvalidArgument("order statistic index " + std::to_string(i) + " out of range");
    }
    return sorted_[i - 1];
  }

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
};

}  // namespace wetmax
