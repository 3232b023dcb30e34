#pragma once

// Seeded random streams. Every trial gets its own stream derived from
// (seed, stream id, trial index) by SplitMix64, so results never depend on
// which thread ran which trial. Sampling is done by hand on top of the
// raw 64-bit engine output so values are identical across standard
// libraries.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace sphiso {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  // Independent stream for trial `index` of the stream named `stream`.
  static Rng stream(std::uint64_t seed, std::string_view stream, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed ^ fnv1a(stream)) + splitmix64(index)));
  }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  double normal() {
    // Box-Muller; the second value is discarded to keep streams simple.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::complex<double> complex_normal() { return {normal(), normal()}; }
  std::complex<double> complex_uniform(double radius) {
    return {uniform(-radius, radius), uniform(-radius, radius)};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sphiso
