#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <type_traits>

namespace wetmax {

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

inline constexpr std::uint64_t kWeyl = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

/// Counter-based 64-bit generator. Output i of stream s under seed k is a pure function of
/// (k, s, i), so replicate j of a Monte Carlo study can own substream j regardless of how
/// replicates are distributed over threads. Satisfies std::uniform_random_bit_generator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream), key_(derive_key(seed, stream)) {}

  constexpr result_type operator()() noexcept {
    ++counter_;
    return detail::mix64(key_ + counter_ * detail::kWeyl);
  }

  /// Independent generator for substream `index` of this generator's stream.
  [[nodiscard]] constexpr CounterRng substream(std::uint64_t index) const noexcept {
    return CounterRng(seed_, detail::mix64(stream_ ^ detail::mix64(index + detail::kWeyl)));
  }

  [[nodiscard]] constexpr std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] constexpr std::uint64_t stream() const noexcept { return stream_; }
  [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

  void discard(std::uint64_t n) noexcept { counter_ += n; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  friend constexpr bool operator==(const CounterRng&, const CounterRng&) = default;

 private:
  static constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) noexcept {
    return detail::mix64(detail::mix64(seed) ^ detail::mix64(stream + 0x632be59bd9b4e019ULL));
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Engines the samplers accept: any URBG producing full-range 64-bit words.
template <class G>
concept Rng64 = std::uniform_random_bit_generator<std::remove_reference_t<G>> &&
                std::same_as<typename std::remove_reference_t<G>::result_type, std::uint64_t> &&
                (std::remove_reference_t<G>::min() == 0) &&
                (std::remove_reference_t<G>::max() == std::numeric_limits<std::uint64_t>::max());

}  // namespace wetmax
