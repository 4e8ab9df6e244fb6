#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polarforge/crc.hpp"
#include "polarforge/polar.hpp"
#include "polarforge/sc_engine.hpp"

namespace polarforge {

/// LLR-based successive-cancellation list decoder. Each surviving path
/// accumulates a penalty of |L_i| whenever its decision contradicts the
/// sign of its LLR; paths are pruned to the smallest penalties. With
/// list size 1 and no CRC this is bit-exact with sc_decode.
class SclDecoder {
 public:
  SclDecoder(std::uint32_t block_length, std::uint32_t list_size,
             std::optional<CrcSpec> crc = std::nullopt,
             CheckNodeRule rule = CheckNodeRule::Exact);

  /// Returns the K bits u_A of the winning path: the smallest-penalty
  /// path passing CRC when a CRC is configured (falling back to the
  /// best path if none passes), else the smallest-penalty path. When a
  /// CRC is configured, spec.dimension counts the CRC bits.
  BitWord decode(const LlrWord& llrs, const CodeSpec& spec);

 private:
  struct Path {
    ScEngine engine;
    BitWord decisions;
    double penalty = 0.0;
  };

  std::uint32_t block_length_;
  std::uint32_t list_size_;
  std::optional<CrcSpec> crc_;
  CheckNodeRule rule_;
};

}  // namespace polarforge
