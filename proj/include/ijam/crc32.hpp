#pragma once

#include <cstdint>
#include <span>

namespace ijam {

/// IEEE 802.3 / 802.11 FCS: polynomial 0x04C11DB7, reflected, init and
/// final XOR 0xFFFFFFFF. crc32("123456789") == 0xCBF43926.
std::uint32_t crc32(std::span<const std::uint8_t> data);

}  // namespace ijam
