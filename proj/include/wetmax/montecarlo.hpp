#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <type_traits>
#include <vector>

#include "wetmax/rng.hpp"

namespace wetmax {

/// Runs `fn(index, rng)` for index in [0, count), giving replicate i the substream i of
/// `base`. Results are returned in index order, so the aggregate is identical for any
/// number of workers. workers == 0 means one per hardware thread.
template <class Fn>
auto run_replicates(std::size_t count, const CounterRng& base, unsigned workers, Fn fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t, CounterRng&>> {
  using Result = std::invoke_result_t<Fn&, std::size_t, CounterRng&>;
  std::vector<Result> results(count);
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));

  auto run_slice = [&](unsigned worker) {
    for (std::size_t i = worker; i < count; i += workers) {
      CounterRng rng = base.substream(i);
      results[i] = fn(i, rng);
    }
  };

  if (workers <= 1) {
    run_slice(0);
    return results;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        run_slice(w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

/// `count` draws of `draw(rng)` from a single generator.
template <class Draw>
std::vector<double> draw_many(std::size_t count, CounterRng& rng, Draw&& draw) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(static_cast<double>(draw(rng)));
  return out;
}

}  // namespace wetmax
