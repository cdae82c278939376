#pragma once

#include <array>
#include <complex>
#include <span>

namespace ijam::ofdm {

using cd = std::complex<double>;

inline constexpr std::size_t kFftSize = 64;
inline constexpr std::size_t kCyclicPrefix = 16;
inline constexpr std::size_t kSymbolSamples = kFftSize + kCyclicPrefix;
inline constexpr std::size_t kDataSubcarriers = 52;
inline constexpr std::size_t kSigSubcarriers = 48;

using Grid = std::array<cd, kFftSize>;

/// FFT bins of the 52 occupied subcarriers, -26..-1 then 1..26.
const std::array<std::size_t, kDataSubcarriers>& data_bins();
/// The 48 SIG subcarriers (occupied bins minus +-7 and +-21).
const std::array<std::size_t, kSigSubcarriers>& sig_bins();

/// Time-domain symbol: cyclic prefix followed by IDFT(grid) / sqrt(52).
/// `out` must hold kSymbolSamples values.
void modulate(const Grid& grid, std::span<cd> out);

/// Inverse of modulate applied to a 64-sample symbol body.
Grid demodulate(std::span<const cd> body);

}  // namespace ijam::ofdm
