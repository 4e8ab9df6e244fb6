#include "polarforge/crc.hpp"

#include <stdexcept>

namespace polarforge {

namespace {

std::uint64_t run_division(const std::vector<Bit>& bits, std::size_t count,
                           const CrcSpec& crc) {
  const std::uint64_t mask =
      crc.width == 64 ? ~0ull : ((1ull << crc.width) - 1);
  const std::uint64_t top = 1ull << (crc.width - 1);
  std::uint64_t reg = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const bool fb = ((reg & top) != 0) ^ (bits[i] & 1);
    reg = (reg << 1) & mask;
    if (fb) reg ^= crc.poly;
  }
  return reg;
}

void check_spec(const CrcSpec& crc) {
  if (crc.width < 1 || crc.width > 64)
    throw std::invalid_argument("CRC width must be in [1,64]");
}

}  // namespace

std::vector<Bit> crc_remainder(const std::vector<Bit>& data,
                               const CrcSpec& crc) {
  check_spec(crc);
  const std::uint64_t reg = run_division(data, data.size(), crc);
  std::vector<Bit> out(crc.width);
  for (unsigned b = 0; b < crc.width; ++b)
    out[b] = static_cast<Bit>((reg >> (crc.width - 1 - b)) & 1);
  return out;
}

std::vector<Bit> crc_attach(std::vector<Bit> data, const CrcSpec& crc) {
  std::vector<Bit> rem = crc_remainder(data, crc);
  data.insert(data.end(), rem.begin(), rem.end());
  return data;
}

bool crc_check(const std::vector<Bit>& bits, const CrcSpec& crc) {
  check_spec(crc);
  if (bits.size() < crc.width)
    throw std::invalid_argument("input shorter than CRC width");
  std::vector<Bit> payload(bits.begin(), bits.end() - crc.width);
  std::vector<Bit> rem = crc_remainder(payload, crc);
  for (unsigned b = 0; b < crc.width; ++b)
    if (rem[b] != bits[bits.size() - crc.width + b]) return false;
  return true;
}

}  // namespace polarforge
