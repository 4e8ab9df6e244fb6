#pragma once

#include <cstdint>
#include <vector>

namespace polarforge {

using Bit = std::uint8_t;

/// Non-reflected CRC over a bit stream, MSB first, init 0, xorout 0.
/// Default is the 8-bit polynomial x^8 + x^2 + x + 1 (0x07).
struct CrcSpec {
  unsigned width = 8;
  std::uint64_t poly = 0x07;
};

/// Remainder of data * x^width mod poly; `width` bits, MSB first.
std::vector<Bit> crc_remainder(const std::vector<Bit>& data,
                               const CrcSpec& crc);

/// data followed by its CRC bits.
std::vector<Bit> crc_attach(std::vector<Bit> data, const CrcSpec& crc);

/// True iff the trailing `width` bits are the CRC of the leading bits.
/// Throws if fewer than `width` bits are given.
bool crc_check(const std::vector<Bit>& bits, const CrcSpec& crc);

}  // namespace polarforge
