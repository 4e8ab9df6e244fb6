#pragma once

#include <cstdint>

#include "polarforge/channel.hpp"

namespace polarforge {

/// Capacity and variance of the information density under uniform
/// inputs, both in bits (variance in bits^2).
struct DispersionStats {
  double capacity = 0.0;
  double dispersion = 0.0;
};

DispersionStats channel_dispersion(const ChannelModel& ch);

/// Standard normal tail Q(x).
double q_function(double x);

/// Normal-approximation frame error estimate
/// Q((N C - K + 0.5 log2 N) / sqrt(N V)); the 0.5 log2 N correction is
/// on by default.
double dispersion_fer(std::uint32_t block_length, std::uint32_t dimension,
                      const ChannelModel& ch, bool half_log_correction = true);

}  // namespace polarforge
