#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace wetmax {

struct NelderMeadOptions {
  double initial_step = 0.1;
  double diameter_tol = 1e-8;  ///< stop when every vertex pair is closer than this
  std::size_t max_iterations = 2000;
  std::size_t restarts = 1;  ///< fresh simplexes built around the incumbent after convergence
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
};

/// Downhill simplex minimization (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// Non-finite objective values are treated as +inf. The starting point is a vertex of the
/// first simplex, so the returned value never exceeds f(x0).
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  NelderMeadResult result;
  result.x = std::move(x0);
  result.value = eval(result.x);
  if (n == 0) {
    result.converged = true;
    return result;
  }

  std::size_t iterations = 0;
  for (std::size_t round = 0; round <= opt.restarts; ++round) {
    std::vector<std::vector<double>> simplex(n + 1, result.x);
    std::vector<double> values(n + 1, result.value);
    for (std::size_t i = 0; i < n; ++i) {
      simplex[i + 1][i] += opt.initial_step;
      values[i + 1] = eval(simplex[i + 1]);
    }
    std::vector<std::size_t> order(n + 1);
    bool converged = false;

    while (iterations < opt.max_iterations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

      double diameter = 0.0;
      for (std::size_t a = 0; a <= n; ++a) {
        for (std::size_t b = a + 1; b <= n; ++b) {
          double d2 = 0.0;
          for (std::size_t k = 0; k < n; ++k) {
            const double d = simplex[a][k] - simplex[b][k];
            d2 += d * d;
          }
          diameter = std::max(diameter, std::sqrt(d2));
        }
      }
      if (diameter < opt.diameter_tol) {
        converged = true;
        break;
      }
      ++iterations;

      const std::size_t best = order.front();
      const std::size_t worst = order.back();
      const std::size_t second_worst = order[n - 1];

      std::vector<double> centroid(n, 0.0);
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == worst) continue;
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[v][k] / static_cast<double>(n);
      }
      auto along = [&](double t) {
        std::vector<double> p(n);
        for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
        return p;
      };

      auto reflected = along(-1.0);
      const double f_reflected = eval(reflected);
      if (f_reflected < values[best]) {
        auto expanded = along(-2.0);
        const double f_expanded = eval(expanded);
        if (f_expanded < f_reflected) {
          simplex[worst] = std::move(expanded);
          values[worst] = f_expanded;
        } else {
          simplex[worst] = std::move(reflected);
          values[worst] = f_reflected;
        }
        continue;
      }
      if (f_reflected < values[second_worst]) {
        simplex[worst] = std::move(reflected);
        values[worst] = f_reflected;
        continue;
      }
      const bool outside = f_reflected < values[worst];
      auto contracted = along(outside ? -0.5 : 0.5);
      const double f_contracted = eval(contracted);
      if (f_contracted < (outside ? f_reflected : values[worst])) {
        simplex[worst] = std::move(contracted);
        values[worst] = f_contracted;
        continue;
      }
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == best) continue;
        for (std::size_t k = 0; k < n; ++k) {
          simplex[v][k] = simplex[best][k] + 0.5 * (simplex[v][k] - simplex[best][k]);
        }
        values[v] = eval(simplex[v]);
      }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    const auto best_idx = static_cast<std::size_t>(best_it - values.begin());
    if (values[best_idx] <= result.value) {
      result.x = simplex[best_idx];
      result.value = values[best_idx];
    }
    result.converged = converged;
    if (!converged) break;
  }
  result.iterations = iterations;
  return result;
}

}  // namespace wetmax
