#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace povm {

/// SplitMix64 finalizer; used to derive independent stream seeds from a 64-bit master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the `stream`-th child of `seed`. Children of distinct streams are decorrelated.
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Seeded generator. Every random draw in the library goes through an Rng constructed from an
/// explicit seed, so identical seeds reproduce identical instances on a given standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  Rng split(std::uint64_t stream) { return Rng(split_seed(engine_(), stream)); }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return normal_(engine_); }
  /// Standard complex Gaussian: E|z|^2 = 1.
  std::complex<double> complex_normal() {
    constexpr double r = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {r * re, r * im};
  }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace povm
