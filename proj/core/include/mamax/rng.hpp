#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mamax {

// splitmix64 finalizer; used to whiten seeds and derive independent streams.
inline std::uint64_t mix_u64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds a word path into a root seed. Stable across platforms; every random
// stream in the library is addressed this way so results never depend on the
// order in which streams happen to be consumed.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix_u64(root);
  for (std::uint64_t w : path) s = mix_u64(s ^ mix_u64(w));
  return s;
}

// mt19937_64 with explicit output mappings. std::uniform_real_distribution and
// std::normal_distribution are implementation-defined, so draws go through
// fixed formulas instead: identical bits on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_u64(seed)) {}

  static Rng derive(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(root, path));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // Circularly symmetric complex normal with E|z|^2 = variance (Box-Muller).
  std::complex<double> complex_normal(double variance) {
    double u1 = 1.0 - uniform();  // (0, 1]: keeps log finite
    double u2 = uniform();
    double mag = std::sqrt(-variance * std::log(u1));
    return std::polar(mag, 2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mamax
