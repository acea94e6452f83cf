#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace circreg {

// xoshiro256++ seeded through splitmix64. Independent streams come from
// `Rng::stream(seed, k)`, which applies k long jumps of 2^128 steps, so
// streams for the same seed never overlap in practice.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  double uniform();  // [0, 1) with 53 random bits
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t below(std::uint64_t bound);  // uniform on [0, bound)
  void jump();

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace circreg
