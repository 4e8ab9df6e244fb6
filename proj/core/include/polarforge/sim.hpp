#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polarforge/channel.hpp"
#include "polarforge/crc.hpp"
#include "polarforge/pac.hpp"
#include "polarforge/polar.hpp"

namespace polarforge {

enum class SystemKind { PolarSc, PolarCascl, PacFano };

const char* system_kind_name(SystemKind kind);
SystemKind system_kind_from_name(const std::string& name);

/// A fully resolved coding system. For polar-cascl the code dimension
/// counts the CRC bits and payload_k is the source word length; for the
/// other systems payload_k == code.dimension.
struct SimSystem {
  SystemKind kind = SystemKind::PolarSc;
  CodeSpec code;
  std::uint32_t payload_k = 0;
  std::optional<CrcSpec> crc;   // polar-cascl
  std::uint32_t list_size = 1;  // polar-cascl
  ConvSpec conv;                // pac-fano
  FanoParams fano;              // pac-fano
  CheckNodeRule rule = CheckNodeRule::Exact;

  void validate() const;
};

struct SimConfig {
  std::vector<ChannelModel> points;
  SimSystem system;
  std::uint64_t min_errors = 100;
  std::uint64_t max_frames = 10000000;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0 = hardware concurrency; never affects results
  bool all_zero_source = false;  // symmetric-channel shortcut, SC/SCL only
  bool record_timing = false;    // wall time breaks byte reproducibility
};

struct SimRecord {
  ChannelModel point;
  std::uint64_t frames = 0;
  std::uint64_t errors = 0;
  double fer = 0.0;
  double fer_ci95 = 0.0;  // Wilson 95% half-width
  std::uint64_t exhausted = 0;
  double visits_mean = 0.0;
  std::uint64_t visits_p50 = 0;
  std::uint64_t visits_p99 = 0;
  std::uint64_t visits_max = 0;
  double seconds = 0.0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo frame-error-rate sweep. Frames are deterministic given
/// (seed, point index, frame index); each point stops at min_errors
/// frame errors or max_frames, whichever comes first. Results are
/// byte-identical for any worker count.
std::vector<SimRecord> run_fer(
    const SimConfig& config,
    const std::function<void(const SimRecord&)>& on_point = nullptr);

/// CSV with the fixed header
/// snr_db,frames,errors,fer,fer_ci95,exhausted,visits_mean,visits_p50,
/// visits_p99,visits_max,seconds,seed. The first column carries the
/// channel parameter for non-BIAWGN sweeps.
std::string records_csv(const std::vector<SimRecord>& records);

/// JSON mirror of the CSV rows.
std::string records_json(const std::vector<SimRecord>& records);

/// Serialized resolved configuration; re-running from it reproduces the
/// CSV byte for byte.
std::string manifest_json(const SimConfig& config);
SimConfig config_from_manifest(const std::string& json_text);

double wilson_halfwidth(std::uint64_t errors, std::uint64_t frames);

}  // namespace polarforge
