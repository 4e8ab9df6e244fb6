#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarforge/construction.hpp"
#include "polarforge/polar.hpp"
#include "polarforge/sc_engine.hpp"

namespace polarforge {

/// Rate-1 convolution over GF(2), impulse response c_0..c_m with
/// c_0 = c_m = 1. The matrix form is an upper-triangular Toeplitz
/// matrix, so the map is invertible by forward substitution.
struct ConvSpec {
  BitWord taps{1};

  /// Parses "1011011" (c_0 first).
  static ConvSpec from_string(const std::string& text);
  std::string to_string() const;
  void validate() const;
  unsigned memory() const { return static_cast<unsigned>(taps.size()) - 1; }
};

/// u = v T, truncated to the input length.
BitWord conv_encode(const BitWord& v, const ConvSpec& conv);

/// The unique v with conv_encode(v) == u.
BitWord conv_invert(const BitWord& u, const ConvSpec& conv);

enum class ScoreRuleKind { ReedMuller, Capacity, Cutoff };

/// RM score s(i) = Hamming weight of the binary representation of i-1.
unsigned rm_score(std::uint32_t index);

/// Top-K indices by score; ties go to the larger index. RM needs no
/// channel statistics; the capacity/cutoff rules require `stats`.
std::vector<std::uint32_t> build_data_index_set(
    ScoreRuleKind rule, std::uint32_t block_length, std::uint32_t dimension,
    const BitChannelStats* stats = nullptr);

/// Cumulative data-position counts K_0..K_N, K_i = |A n {1..i}|.
std::vector<std::uint32_t> rate_profile(
    const std::vector<std::uint32_t>& data_indices,
    std::uint32_t block_length);

struct FanoParams {
  double delta = 2.0;                  // threshold step, bits
  std::uint64_t max_visits = 1000000;  // node-visit budget per frame
  /// Per-position additive metric bias. Empty selects the rate-profile
  /// rule (+1 at frozen positions, 0 at data positions).
  std::vector<double> bias;
};

/// Bias vector 1 - C(W_i) from construction statistics: the correct
/// path becomes drift-free at every position, which keeps early threshold
/// drops from letting wrong tail paths coast to a leaf.
std::vector<double> capacity_metric_bias(const BitChannelStats& stats);

/// A PAC code: (N, K, A) plus the convolution taps, with the Fano
/// search parameters used to decode it.
struct PacSpec {
  CodeSpec code;
  ConvSpec conv;
  FanoParams fano;
};

/// v_A = d, v elsewhere 0, then x = (v T) P_n.
BitWord pac_encode(const BitWord& data, const PacSpec& spec);

/// Fano branch metric in bits: log2 Pr(u = bit | llr) plus a +1 bias at
/// frozen positions. On the correct path the per-branch drift is about
/// C(W_i) - r_i, keeping the cumulative metric rising whenever the rate
/// profile stays below the capacity profile.
double fano_branch_metric(double llr_value, Bit bit, bool is_data_position);

struct FanoResult {
  BitWord data;
  std::uint64_t visits = 0;
  bool exhausted = false;
};

/// Depth-first Fano search over the irregular tree induced by the rate
/// profile: two branches at data positions, one forced branch (v_i = 0)
/// at frozen positions. Classic threshold rules with step delta.
class FanoDecoder {
 public:
  explicit FanoDecoder(const PacSpec& spec,
                       CheckNodeRule rule = CheckNodeRule::Exact);

  FanoResult decode(const LlrWord& llrs);

  const PacSpec& spec() const { return spec_; }

 private:
  struct Node {  // per-position search state, filled on forward entry
    double metric[2];
    Bit vbit[2];
    Bit ubit[2];
    int branches = 0;
    int choice = 0;
    double gamma_in = 0.0;  // path metric entering this position
  };

  Bit forced_feedback(std::uint32_t pos) const;
  void enter(std::uint32_t pos, double gamma_in);

  PacSpec spec_;
  ScEngine engine_;
  std::vector<Bit> mask_;
  std::vector<double> bias_;
  std::vector<Node> nodes_;
  std::vector<Bit> v_;
  std::uint64_t visits_ = 0;
};

/// One-shot convenience wrapper around FanoDecoder.
FanoResult fano_decode(const LlrWord& llrs, const PacSpec& spec);

}  // namespace polarforge
