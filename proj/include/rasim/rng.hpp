#ifndef RASIM_RNG_HPP
#define RASIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace rasim {

// Standard-library distributions are implementation-defined, so every
// distribution here is hand-rolled on top of the (bit-exact) mt19937_64
// core. Identical seeds therefore produce identical streams on any host.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  // Derives an independent stream from (seed, stream id, index) via a
  // splitmix64 mix, so per-frame or per-axis substreams never overlap.
  static RandomStream substream(std::uint64_t seed, std::uint64_t stream_id,
                                std::uint64_t index = 0);

  std::uint64_t bits() { return eng_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean = 0.0, double sigma = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + sigma * spare_;
    }
    // Box-Muller; u1 is shifted off zero so log() stays finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * 3.14159265358979323846 * u2);
    has_spare_ = true;
    return mean + sigma * r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Knuth's product method; fine for the small rates used here.
  int poisson(double rate) {
    if (rate <= 0.0) {
      return 0;
    }
    const double limit = std::exp(-rate);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t stream_id,
                                            std::uint64_t index) {
  std::uint64_t mixed = splitmix64(seed);
  mixed = splitmix64(mixed ^ stream_id);
  mixed = splitmix64(mixed ^ index);
  return RandomStream(mixed);
}

}  // namespace rasim

#endif  // RASIM_RNG_HPP
