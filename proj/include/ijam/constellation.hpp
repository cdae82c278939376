#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>

namespace ijam {

using cd = std::complex<double>;

// Square Gray-coded 64-QAM with the 802.11 bit-to-level table, scaled to unit
// average energy. A point index packs its six bits in transmission order with
// the first bit in the most significant position: bits 0..2 select I, 3..5
// select Q.
namespace qam64 {

inline constexpr int kBitsPerSymbol = 6;
inline constexpr int kPoints = 64;

/// Amplitude level (-7..7, odd) for a 3-bit Gray group.
int level_of(unsigned bits3);
/// Inverse of level_of.
unsigned bits_of_level(int level);

cd point(unsigned index);
/// Index from bits[0..5] (each 0 or 1).
unsigned index_from_bits(std::span<const std::uint8_t> bits);
void bits_from_index(unsigned index, std::span<std::uint8_t> bits);
/// Hard decision: nearest constellation point.
unsigned slice(cd y);

}  // namespace qam64

namespace bpsk {
inline cd point(std::uint8_t bit) { return bit ? cd{1.0, 0.0} : cd{-1.0, 0.0}; }
inline std::uint8_t slice(cd y) { return y.real() >= 0.0 ? 1 : 0; }
}  // namespace bpsk

}  // namespace ijam
