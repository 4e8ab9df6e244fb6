#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarforge/channel.hpp"

namespace polarforge {

enum class ConstructionMethod { ExactBec, MonteCarlo };

/// Per-index information measures of the synthesized bit-channels
/// W_1..W_N, natural (non-bit-reversed) index order; vectors are
/// 0-based with entry i-1 describing bit-channel i.
struct BitChannelStats {
  std::uint32_t block_length = 0;
  ConstructionMethod method = ConstructionMethod::ExactBec;
  std::uint64_t samples = 0;  // MC only
  std::uint64_t seed = 0;     // MC only
  std::vector<double> capacity;
  std::vector<double> bhattacharyya;
  std::vector<double> cutoff;
};

/// Exact BEC bit-channel statistics via the erasure recursion
/// (2e - e^2, e^2) applied per polarization level.
BitChannelStats bec_bit_channels(double eps, std::uint32_t block_length);

/// Genie-aided Monte-Carlo construction: transmit the all-zero
/// transform input, run the SC LLR recursion with the true past, and
/// average per-index estimators over `samples` draws. Deterministic for
/// a given (samples, seed) and independent of `workers`.
BitChannelStats mc_bit_channels(const ChannelModel& ch,
                                std::uint32_t block_length,
                                std::uint64_t samples, std::uint64_t seed,
                                unsigned workers = 0);

/// Cumulative information profiles; row i holds sums over bit-channels
/// 1..i, row 0 is all zeros.
struct ProfileTable {
  std::vector<double> pol_cap;
  std::vector<double> pol_r0;
  std::vector<double> unpol_cap;
  std::vector<double> unpol_r0;
};

ProfileTable profiles(const BitChannelStats& stats, const ChannelModel& ch);

/// CSV with header `i,pol_cap,pol_r0,unpol_cap,unpol_r0`.
std::string profile_csv(const ProfileTable& table);

struct PolarizationFractions {
  double high = 0.0;  // capacity_i > 1-delta
  double mid = 0.0;
  double low = 0.0;  // capacity_i < delta
};

PolarizationFractions polarization_fractions(const BitChannelStats& stats,
                                             double delta);

/// JSON text: {channel, N, method, samples, seed, rows:[...]}.
std::string stats_json(const BitChannelStats& stats,
                       const std::string& channel_text);

}  // namespace polarforge
