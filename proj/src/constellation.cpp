#include "ijam/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ijam::qam64 {
namespace {

// Gray group (b0 b1 b2) -> level.
constexpr std::array<int, 8> kLevel{-7, -5, -1, -3, 7, 5, 1, 3};
const double kNorm = 1.0 / std::sqrt(42.0);

}  // namespace

int level_of(unsigned bits3) { return kLevel.at(bits3 & 7u); }

unsigned bits_of_level(int level) {
  for (unsigned b = 0; b < 8; ++b) {
    if (kLevel[b] == level) return b;
  }
  throw std::invalid_argument("qam64: invalid level");
}

cd point(unsigned index) {
  return {level_of(index >> 3) * kNorm, level_of(index & 7u) * kNorm};
}

unsigned index_from_bits(std::span<const std::uint8_t> bits) {
  unsigned v = 0;
  for (int i = 0; i < kBitsPerSymbol; ++i) v = (v << 1) | (bits[i] & 1u);
  return v;
}

void bits_from_index(unsigned index, std::span<std::uint8_t> bits) {
  for (int i = 0; i < kBitsPerSymbol; ++i) {
    bits[i] = static_cast<std::uint8_t>((index >> (kBitsPerSymbol - 1 - i)) & 1u);
  }
}

namespace {

int slice_axis(double v) {
  // Nearest odd level in [-7, 7].
  if (!std::isfinite(v)) return 1;
  const double scaled = v / kNorm;
  int level = 2 * static_cast<int>(std::floor(scaled / 2.0)) + 1;
  return std::clamp(level, -7, 7);
}

}  // namespace

unsigned slice(cd y) {
  return (bits_of_level(slice_axis(y.real())) << 3) | bits_of_level(slice_axis(y.imag()));
}

}  // namespace ijam::qam64
