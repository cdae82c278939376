#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace ijam {

// Every random quantity in the simulator is drawn from a substream keyed by
// (base seed, purpose tag, index). The substream seed is a SplitMix64 hash of
// the key and feeds a std::mt19937_64. Indices are frame numbers, so frames
// can be generated in any order or in parallel with identical results.

enum class StreamTag : std::uint64_t {
  kJamPattern = 0x6a61'6d70,   // random-scheme sample selection
  kJamWaveform = 0x6a61'6d77,  // Gaussian jamming waveform
  kNoiseBob = 0x6e62'6f62,
  kNoiseEve = 0x6e65'7665,
  kPayload = 0x7061'796c,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(tag)) ^ index);
}

inline std::mt19937_64 substream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  return std::mt19937_64(substream_seed(seed, tag, index));
}

/// Circular complex Gaussian draws with E|z|^2 = variance.
class ComplexGaussian {
 public:
  explicit ComplexGaussian(std::mt19937_64 engine) : engine_(engine) {}

  std::complex<double> operator()(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {s * re, s * im};
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ijam
