#include "sausage/rng.hpp"

#include <cmath>
#include <numbers>

namespace sausage {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t a, std::uint32_t b) {
  const std::uint64_t x = (static_cast<std::uint64_t>(a >> 5) << 26) | (b >> 6);
  return (static_cast<double>(x) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::array<std::uint32_t, 4> c) {
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    k0 += kW0;
    k1 += kW1;
  }
  return c;
}

std::array<double, 2> counter_uniform2(std::uint64_t seed, Stream stream, std::uint64_t index) {
  const auto r = philox4x32(seed, {static_cast<std::uint32_t>(index),
                                   static_cast<std::uint32_t>(index >> 32),
                                   static_cast<std::uint32_t>(stream), 0x5a5a5a5au});
  return {to_unit(r[0], r[1]), to_unit(r[2], r[3])};
}

Point counter_gaussian2(std::uint64_t seed, Stream stream, std::uint64_t index) {
  const auto u = counter_uniform2(seed, stream, index);
  const double rad = std::sqrt(-2.0 * std::log(u[0]));
  const double ang = 2.0 * std::numbers::pi * u[1];
  return Point(rad * std::cos(ang), rad * std::sin(ang));
}

void PhiloxEngine::refill() {
  const auto r = philox4x32(seed_, {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                    static_cast<std::uint32_t>(stream_), 0xa5a5a5a5u});
  ++counter_;
  buf_[0] = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
  buf_[1] = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
  n_left_ = 2;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t task) {
  return mix64(mix64(base) ^ (task * 0xD6E8FEB86659FD93ull + 1));
}

double CounterRng::uniform() {
  if (n_spare_ == 0) {
    const auto u = counter_uniform2(seed_, stream_, counter_++);
    spare_[0] = u[1];
    spare_[1] = u[0];
    n_spare_ = 2;
  }
  return spare_[--n_spare_];
}

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * (1.0 - uniform()); }

double CounterRng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::below(std::uint64_t n) {
  const double u = 1.0 - uniform();  // [0, 1)
  auto k = static_cast<std::uint64_t>(u * static_cast<double>(n));
  return k < n ? k : n - 1;
}

}  // namespace sausage
