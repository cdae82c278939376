#pragma once

// Reference values and slow reference implementations the unit tests compare
// against. Nothing here calls into the library.

#include <cstdint>
#include <span>

namespace oracle {

// Q(x) = erfc(x / sqrt 2) / 2 evaluated with mpmath at 40 digits.
inline constexpr double kQ1 = 0.15865525393145705141;
inline constexpr double kQ2 = 0.0227501319481792072;
inline constexpr double kQ3 = 0.0013498980316300945267;
inline constexpr double kQ5 = 2.8665157187919391167e-7;

// 1 - (1 - 3/4 Q(sqrt(2/7 r)))^2 for ratio r, same precision.
struct PrPoint {
  double ratio;
  double pr;
};
inline constexpr PrPoint kPr[] = {
    {14.0, 0.03383406563896030591},  {1.0, 0.3952877521099010721},
    {3.5, 0.22382391799715457315},   {7.0, 0.11449491521196640671},
    {28.0, 0.0035052241913951959506}, {0.5, 0.4591079578134736113},
    {100.0, 6.7728663955942311683e-8},
};
inline constexpr double kPrCeiling = 0.609375;  // 1 - (5/8)^2

// Bit-at-a-time reflected CRC-32, no table.
inline std::uint32_t crc32_bitwise(std::span<const std::uint8_t> data) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint8_t byte : data) {
    crc ^= byte;
    for (int i = 0; i < 8; ++i) crc = (crc >> 1) ^ (0xEDB88320u & (0u - (crc & 1u)));
  }
  return ~crc;
}

// Smallest n with n * l_dbps >= 16 + 8 * length + 6, by counting up.
inline int n_sym_brute(std::size_t length, int l_dbps) {
  const std::size_t need = 16 + 8 * length + 6;
  int n = 0;
  while (static_cast<std::size_t>(n) * static_cast<std::size_t>(l_dbps) < need) ++n;
  return n;
}

// 802.11 64-QAM per-axis Gray table, b0 b1 b2 -> level.
inline constexpr int kGrayLevel[8] = {-7, -5, -1, -3, 7, 5, 1, 3};

}  // namespace oracle
