#pragma once

#include <array>
#include <cstdint>

#include "sausage/types.hpp"

namespace sausage {

// Philox4x32-10 block function: a stateless map (key, counter) -> 128 random bits.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::array<std::uint32_t, 4> ctr);

// Fixed stream identifiers so independent consumers never share counters.
enum class Stream : std::uint32_t {
  Increments = 0,
  Noise = 1,
  BridgeMin = 2,
  BridgeMax = 3,
  Cloud = 4,
  Test = 5,
};

// Two uniforms in (0, 1] drawn from the block at (seed, stream, index).
std::array<double, 2> counter_uniform2(std::uint64_t seed, Stream stream, std::uint64_t index);

// One standard planar Gaussian via Box-Muller on the block at (seed, stream, index).
Point counter_gaussian2(std::uint64_t seed, Stream stream, std::uint64_t index);

// splitmix64 finalizer; used to derive per-task seeds from a base seed.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t task);

// Sequential 64-bit engine over the counter function (UniformRandomBitGenerator),
// for hot loops that pair it with a library distribution.
class PhiloxEngine {
 public:
  using result_type = std::uint64_t;
  PhiloxEngine(std::uint64_t seed, Stream stream) : seed_(seed), stream_(stream) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    if (n_left_ == 0) refill();
    return buf_[--n_left_];
  }

 private:
  void refill();
  std::uint64_t seed_;
  Stream stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t buf_[2] = {0, 0};
  int n_left_ = 0;
};

// Small sequential generator built on the counter function, for test fixtures and
// cloud generators where a running stream is more convenient.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, Stream stream = Stream::Test)
      : seed_(seed), stream_(stream) {}
  double uniform();                      // (0, 1]
  double uniform(double lo, double hi);  // [lo, hi]
  double normal();
  std::uint64_t below(std::uint64_t n);  // [0, n)

 private:
  std::uint64_t seed_;
  Stream stream_;
  std::uint64_t counter_ = 0;
  double spare_[2] = {0, 0};
  int n_spare_ = 0;
};

}  // namespace sausage
