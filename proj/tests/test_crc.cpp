#include <stdexcept>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "polarforge/crc.hpp"
#include "polarforge/rng.hpp"

using namespace polarforge;

namespace {

std::vector<Bit> ascii_bits(const std::string& s) {
  std::vector<Bit> bits;
  for (unsigned char c : s)
    for (int b = 7; b >= 0; --b) bits.push_back((c >> b) & 1);
  return bits;
}

}  // namespace

TEST_SUITE_BEGIN("crc");

TEST_CASE("all-zero payload has an all-zero CRC") {
  const CrcSpec crc;
  for (std::size_t len : {1u, 8u, 63u}) {
    const std::vector<Bit> zeros(len, 0);
    for (Bit b : crc_remainder(zeros, crc)) CHECK(b == 0);
    CHECK(crc_check(crc_attach(zeros, crc), crc));
  }
}

TEST_CASE("check value of '123456789' is 0xF4") {
  const CrcSpec crc;  // width 8, poly 0x07
  const auto bits = crc_remainder(ascii_bits("123456789"), crc);
  unsigned value = 0;
  for (Bit b : bits) value = (value << 1) | b;
  CHECK(value == 0xF4);
  // Independent byte-wise table implementation agrees.
  std::vector<std::uint8_t> bytes;
  for (char c : std::string("123456789"))
    bytes.push_back(static_cast<std::uint8_t>(c));
  CHECK(oracles::crc8_table_bytes(bytes, 0x07) == 0xF4);
}

TEST_CASE("bitwise division matches the byte-wise table on random input") {
  const CrcSpec crc;
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint8_t> bytes(1 + trial % 24);
    for (auto& b : bytes)
      b = static_cast<std::uint8_t>(rng.next_u64() & 0xff);
    std::vector<Bit> bits;
    for (auto byte : bytes)
      for (int k = 7; k >= 0; --k) bits.push_back((byte >> k) & 1);
    unsigned value = 0;
    for (Bit b : crc_remainder(bits, crc)) value = (value << 1) | b;
    CHECK(value == oracles::crc8_table_bytes(bytes, 0x07));
  }
}

TEST_CASE("detects every single-bit flip in a 64-bit payload") {
  const CrcSpec crc;
  Rng rng(8);
  std::vector<Bit> payload(64);
  for (auto& b : payload) b = rng.next_bit();
  const auto attached = crc_attach(payload, crc);
  CHECK(crc_check(attached, crc));
  for (std::size_t i = 0; i < attached.size(); ++i) {
    auto flipped = attached;
    flipped[i] ^= 1;
    CHECK_FALSE(crc_check(flipped, crc));
  }
}

TEST_CASE("attach/check round trip") {
  const CrcSpec crc;
  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Bit> payload(1 + (rng.next_u64() % 120));
    for (auto& b : payload) b = rng.next_bit();
    CHECK(crc_check(crc_attach(payload, crc), crc));
  }
}

TEST_CASE("input shorter than the CRC width throws") {
  const CrcSpec crc;
  CHECK_THROWS_AS(crc_check({1, 0, 1}, crc), std::invalid_argument);
}

TEST_SUITE_END();
